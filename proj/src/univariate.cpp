#include "ineqreg/univariate.hpp"

#include <chrono>
#include <cmath>

namespace ineqreg {

namespace {

Matrix inverse_of_spd(const Matrix& m) { return cholesky(m).inverse(); }

}  // namespace

PosteriorCache compute_posterior_cache(const Matrix& X_S, const Matrix& X_Sprime,
                                       const Vector& Y, const PriorSpec& prior) {
    const Index n = Y.size();
    const Index q = X_S.cols();
    const Index psp = X_Sprime.cols();
    if (X_S.rows() != n || (psp > 0 && X_Sprime.rows() != n))
        throw ShapeMismatch("compute_posterior_cache: design row counts do not match Y");
    if (prior.mu_S.size() != q || prior.C_S.rows() != q)
        throw ShapeMismatch("compute_posterior_cache: S-block prior shape mismatch");
    if (prior.mu_Sprime.size() != psp || prior.C_Sprime.rows() != psp)
        throw ShapeMismatch("compute_posterior_cache: S'-block prior shape mismatch");
    if (!(prior.a > 0.0) || !(prior.b > 0.0))
        throw InvalidParameter("compute_posterior_cache: a and b must be > 0");

    PosteriorCache cache;
    Matrix C_S_inv = inverse_of_spd(prior.C_S);
    Matrix prec_S = symmetrized(X_S.transpose() * X_S + C_S_inv);
    cache.Ctilde_S = cholesky(prec_S).inverse();
    cache.W = X_S.transpose() * Y + C_S_inv * prior.mu_S;
    cache.cross = X_S.transpose() * X_Sprime;  // q x (p-q)

    double quad_prior_S = prior.mu_S.dot(C_S_inv * prior.mu_S);
    double quad_prior_Sp = 0.0;
    double marginal_quads = cache.W.dot(cache.Ctilde_S * cache.W);

    if (psp > 0) {
        Matrix C_Sp_inv = inverse_of_spd(prior.C_Sprime);
        Matrix prec_Sp = symmetrized(X_Sprime.transpose() * X_Sprime + C_Sp_inv -
                                     cache.cross.transpose() * cache.Ctilde_S * cache.cross);
        cache.Ctilde_Sprime = cholesky(prec_Sp).inverse();
        cache.mu_tilde_Sprime =
            cache.Ctilde_Sprime * (C_Sp_inv * prior.mu_Sprime + X_Sprime.transpose() * Y -
                                   cache.cross.transpose() * (cache.Ctilde_S * cache.W));
        quad_prior_Sp = prior.mu_Sprime.dot(C_Sp_inv * prior.mu_Sprime);
        marginal_quads += cache.mu_tilde_Sprime.dot(prec_Sp * cache.mu_tilde_Sprime);
    } else {
        cache.Ctilde_Sprime.resize(0, 0);
        cache.mu_tilde_Sprime.resize(0);
    }

    cache.nu_tilde = 0.5 * (double(n) + prior.a);
    cache.eta_tilde =
        0.5 * (prior.b + Y.squaredNorm() + quad_prior_Sp + quad_prior_S - marginal_quads);
    if (!(cache.eta_tilde > 0.0))
        throw NonPositiveEta("compute_posterior_cache: eta_tilde <= 0 (inconsistent inputs)");
    return cache;
}

namespace {

// State-independent pieces of the sampling loop plus preallocated workspace,
// so an iteration is a handful of small mat-vecs, the coordinate sweep, and
// no heap traffic.
struct UniEngine {
    const PosteriorCache& cache;
    Matrix H_S;
    Matrix H_S_inv;
    Matrix L_Sprime;       // chol of Ctilde_Sprime
    Matrix theta_prec;     // (H_S Ctilde_S H_S')^-1, sigma2 factored out
    Matrix H_S_Ct;         // H_S Ctilde_S  (for the theta-space mean)
    Vector theta_mean_w;   // H_S Ctilde_S W, the beta_Sprime-free part
    Matrix H_S_Ct_cross;   // H_S Ctilde_S cross
    int inner_sweeps;

    mutable Vector ws_z;
    mutable Vector ws_theta_mean;
    mutable Vector ws_centered;

    UniEngine(const PosteriorCache& c, const Matrix& hs, int sweeps)
        : cache(c), H_S(hs), inner_sweeps(sweeps) {
        if (sweeps < 1) throw InvalidParameter("gibbs_step: inner_sweeps must be >= 1");
        Eigen::PartialPivLU<Matrix> lu(H_S);
        H_S_inv = lu.inverse();
        if (cache.Ctilde_Sprime.rows() > 0)
            L_Sprime = cholesky(cache.Ctilde_Sprime).lower();
        Matrix theta_cov = symmetrized(H_S * cache.Ctilde_S * H_S.transpose());
        theta_prec = cholesky(theta_cov).inverse();
        H_S_Ct = H_S * cache.Ctilde_S;
        theta_mean_w = H_S_Ct * cache.W;
        H_S_Ct_cross = H_S_Ct * cache.cross;
        ws_z.resize(cache.mu_tilde_Sprime.size());
        ws_theta_mean.resize(H_S.rows());
        ws_centered.resize(H_S.rows());
    }

    // Advances (sigma2, beta_Sprime, theta) in place; box must hold the
    // conditional bounds for the *new* beta_Sprime before the sweep, which
    // `update_box` refreshes.
    template <typename UpdateBox>
    void step_inplace(double& sigma2, Vector& beta_Sprime, Vector& theta,
                      BoxBounds& box, const UpdateBox& update_box, RngStream& rng) const {
        sigma2 = sample_inverse_gamma(cache.nu_tilde, cache.eta_tilde, rng);
        const Index psp = cache.mu_tilde_Sprime.size();
        if (psp > 0) {
            for (Index i = 0; i < psp; ++i) ws_z[i] = rng.normal();
            beta_Sprime.noalias() = L_Sprime.triangularView<Eigen::Lower>() * ws_z;
            beta_Sprime = cache.mu_tilde_Sprime + std::sqrt(sigma2) * beta_Sprime;
            update_box(beta_Sprime, box);
            ws_theta_mean.noalias() = H_S_Ct_cross * beta_Sprime;
            ws_theta_mean = theta_mean_w - ws_theta_mean;
        } else {
            ws_theta_mean = theta_mean_w;
        }
        for (int s = 0; s < inner_sweeps; ++s)
            detail::tmvn_gibbs_sweep(theta_prec, 1.0 / sigma2, ws_theta_mean, box, theta,
                                     ws_centered, rng);
    }

    ChainState step(const ChainState& state, const BoundsFn& bounds_fn, RngStream& rng) const {
        ChainState next = state;
        Vector theta = H_S * state.beta_S;
        BoxBounds box = bounds_fn(state.beta_Sprime);
        auto update_box = [&](const Vector& beta_Sprime, BoxBounds& b) {
            b = bounds_fn(beta_Sprime);
        };
        step_inplace(next.sigma2, next.beta_Sprime, theta, box, update_box, rng);
        next.beta_S.noalias() = H_S_inv * theta;
        return next;
    }
};

double default_sigma2_init(double a, double b) { return a > 2.0 ? b / (a - 2.0) : 1.0; }

}  // namespace

ChainState gibbs_step(const PosteriorCache& cache, const ChainState& state,
                      const BoundsFn& bounds_fn, const Matrix& H_S, int inner_sweeps,
                      RngStream& rng) {
    return UniEngine(cache, H_S, inner_sweeps).step(state, bounds_fn, rng);
}

std::vector<std::string> Chain::parameter_names() const {
    std::vector<std::string> names{"sigma2"};
    for (Index j = 0; j < beta.cols(); ++j) names.push_back("beta_" + std::to_string(j + 1));
    return names;
}

Matrix Chain::draws() const {
    const Index n = sigma2.size() - Index(burn_in);
    if (n <= 0) throw EmptyChain("Chain::draws: burn-in consumes the whole chain");
    Matrix out(n, beta.cols() + 1);
    out.col(0) = sigma2.tail(n);
    out.rightCols(beta.cols()) = beta.bottomRows(n);
    return out;
}

Chain run_chain(const Matrix& X, const Vector& Y, const RestrictionSystem& system,
                const Partition& partition, const PriorSpec& prior, const ChainOptions& opt) {
    if (opt.iters < 1) throw InvalidParameter("run_chain: iters must be >= 1");
    auto [X_S, X_Sprime] = permute_design(X, partition);
    PosteriorCache cache = compute_posterior_cache(X_S, X_Sprime, Y, prior);
    UniEngine engine(cache, partition.H_S, opt.inner_sweeps);

    std::optional<Vector> anchor;
    if (partition.p() > partition.q()) anchor = prior.mu_Sprime;
    Vector beta0 = feasible_point(system, partition, anchor);

    ChainState state;
    state.sigma2 = opt.sigma2_init ? *opt.sigma2_init : default_sigma2_init(prior.a, prior.b);
    state.beta_S.resize(partition.q());
    state.beta_Sprime.resize(partition.p() - partition.q());
    for (Index i = 0; i < partition.q(); ++i) state.beta_S[i] = beta0[partition.S[size_t(i)]];
    for (Index i = 0; i < partition.p() - partition.q(); ++i)
        state.beta_Sprime[i] = beta0[partition.Sprime[size_t(i)]];

    RngStream rng(opt.seed, opt.rng_stream);
    Chain chain;
    chain.beta.resize(Index(opt.iters), partition.p());
    chain.sigma2.resize(Index(opt.iters));
    chain.burn_in = opt.resolved_burn_in();
    chain.seed = opt.seed;
    chain.inner_sweeps = opt.inner_sweeps;

    const Index q = partition.q(), p = partition.p();
    const Vector K0 = system.K.col(0);
    const Vector G0 = system.G.col(0);
    // With a zero H_S' block the conditional bounds never move.
    const bool constant_box =
        partition.H_Sprime.size() == 0 || partition.H_Sprime.cwiseAbs().maxCoeff() == 0.0;
    Vector box_shift(q);
    BoxBounds box = conditional_box(partition, system, state.beta_Sprime);
    auto update_box = [&](const Vector& beta_Sprime, BoxBounds& b) {
        if (constant_box) return;
        box_shift.noalias() = partition.H_Sprime * beta_Sprime;
        b.lower = K0 - box_shift;
        b.upper = G0 - box_shift;
    };
    Vector theta = partition.H_S * state.beta_S;
    Vector beta_S(q);
    double sigma2 = state.sigma2;
    Vector beta_Sprime = state.beta_Sprime;

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t t = 0; t < opt.iters; ++t) {
        engine.step_inplace(sigma2, beta_Sprime, theta, box, update_box, rng);
        beta_S.noalias() = engine.H_S_inv * theta;
        chain.sigma2[Index(t)] = sigma2;
        auto row = chain.beta.row(Index(t));
        for (Index i = 0; i < q; ++i) row[partition.S[size_t(i)]] = beta_S[i];
        for (Index i = 0; i < p - q; ++i) row[partition.Sprime[size_t(i)]] = beta_Sprime[i];
    }
    chain.sampling_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return chain;
}

Chain geweke_baseline_chain(const Matrix& X, const Vector& Y, const RestrictionSystem& system,
                            const FullPrior& prior, const ChainOptions& opt) {
    const Index p = X.cols();
    const Index n = Y.size();
    if (system.q() != p || system.p() != p)
        throw NotSquare("geweke_baseline_chain: restriction matrix must be square p x p");
    if (system.k() != 1) throw ShapeMismatch("geweke_baseline_chain: univariate systems only");
    Eigen::FullPivLU<Matrix> lu(system.H);
    if (!lu.isInvertible()) throw Singular("geweke_baseline_chain: restriction matrix singular");
    if (prior.mu.size() != p || prior.C.rows() != p)
        throw ShapeMismatch("geweke_baseline_chain: prior shape mismatch");
    if (!(prior.a > 0.0) || !(prior.b > 0.0))
        throw InvalidParameter("geweke_baseline_chain: a and b must be > 0");

    Matrix C_inv = cholesky(prior.C).inverse();
    Matrix prec = symmetrized(X.transpose() * X + C_inv);
    Matrix Ctilde = cholesky(prec).inverse();
    Vector mu_tilde = Ctilde * (X.transpose() * Y + C_inv * prior.mu);
    const double nu_tilde = 0.5 * (double(n) + prior.a);
    const double eta_tilde =
        0.5 * (prior.b + Y.squaredNorm() + prior.mu.dot(C_inv * prior.mu) -
               mu_tilde.dot(prec * mu_tilde));
    if (!(eta_tilde > 0.0)) throw NonPositiveEta("geweke_baseline_chain: eta_tilde <= 0");

    Matrix H = system.H;
    Matrix theta_cov = symmetrized(H * Ctilde * H.transpose());
    Matrix theta_prec = cholesky(theta_cov).inverse();
    Vector theta_mean = H * mu_tilde;
    BoxBounds box(system.K.col(0), system.G.col(0));

    // Midpoint start in the theta box.
    Vector theta(p);
    for (Index i = 0; i < p; ++i) {
        double lo = box.lower[i], up = box.upper[i];
        if (std::isfinite(lo) && std::isfinite(up)) theta[i] = 0.5 * (lo + up);
        else if (std::isfinite(lo)) theta[i] = lo + 1.0;
        else if (std::isfinite(up)) theta[i] = up - 1.0;
        else theta[i] = 0.0;
    }

    RngStream rng(opt.seed, opt.rng_stream);
    Chain chain;
    chain.beta.resize(Index(opt.iters), p);
    chain.sigma2.resize(Index(opt.iters));
    chain.burn_in = opt.resolved_burn_in();
    chain.seed = opt.seed;
    chain.inner_sweeps = 1;

    Matrix H_inv = lu.inverse();
    Vector beta(p), ws(p);

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t t = 0; t < opt.iters; ++t) {
        double s2 = sample_inverse_gamma(nu_tilde, eta_tilde, rng);
        detail::tmvn_gibbs_sweep(theta_prec, 1.0 / s2, theta_mean, box, theta, ws, rng);
        chain.sigma2[Index(t)] = s2;
        beta.noalias() = H_inv * theta;
        chain.beta.row(Index(t)) = beta.transpose();
    }
    chain.sampling_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return chain;
}

Vector ols_fit(const Matrix& X, const Vector& Y) {
    if (X.rows() != Y.size()) throw ShapeMismatch("ols_fit: X/Y row mismatch");
    Matrix gram = symmetrized(X.transpose() * X);
    return cholesky(gram).solve(Vector(X.transpose() * Y));
}

PriorSpec prior_from_ols(const Matrix& X, const Vector& Y, const Partition& partition,
                         double a, double b) {
    Vector beta_hat = ols_fit(X, Y);
    auto [X_S, X_Sprime] = permute_design(X, partition);
    PriorSpec prior;
    prior.a = a;
    prior.b = b;
    prior.mu_S.resize(partition.q());
    for (Index i = 0; i < partition.q(); ++i) prior.mu_S[i] = beta_hat[partition.S[size_t(i)]];
    prior.mu_Sprime.resize(partition.p() - partition.q());
    for (Index i = 0; i < partition.p() - partition.q(); ++i)
        prior.mu_Sprime[i] = beta_hat[partition.Sprime[size_t(i)]];
    prior.C_S = cholesky(symmetrized(X_S.transpose() * X_S)).inverse();
    if (X_Sprime.cols() > 0)
        prior.C_Sprime = cholesky(symmetrized(X_Sprime.transpose() * X_Sprime)).inverse();
    else
        prior.C_Sprime.resize(0, 0);
    return prior;
}

}  // namespace ineqreg
