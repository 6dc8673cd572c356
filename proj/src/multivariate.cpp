#include "ineqreg/multivariate.hpp"

#include <chrono>
#include <cmath>

namespace ineqreg {

PosteriorCacheMV compute_posterior_cache_mv(const Matrix& X_S, const Matrix& X_Sprime,
                                            const Matrix& Y, const PriorSpecMV& prior) {
    const Index n = Y.rows();
    const Index k = Y.cols();
    const Index q = X_S.cols();
    const Index psp = X_Sprime.cols();
    if (X_S.rows() != n || (psp > 0 && X_Sprime.rows() != n))
        throw ShapeMismatch("compute_posterior_cache_mv: design row counts do not match Y");
    if (prior.Q.rows() != k || prior.Q.cols() != k)
        throw ShapeMismatch("compute_posterior_cache_mv: Q must be k x k");
    if (prior.M_S.rows() != q || prior.M_S.cols() != k || prior.D_S.rows() != q)
        throw ShapeMismatch("compute_posterior_cache_mv: S-block prior shape mismatch");
    if (prior.M_Sprime.rows() != psp || prior.D_Sprime.rows() != psp ||
        (psp > 0 && prior.M_Sprime.cols() != k))
        throw ShapeMismatch("compute_posterior_cache_mv: S'-block prior shape mismatch");
    if (!(prior.r > double(k) - 1.0))
        throw InvalidDegreesOfFreedom("compute_posterior_cache_mv: need r > k - 1");

    PosteriorCacheMV cache;
    Matrix D_S_inv = cholesky(prior.D_S).inverse();
    Matrix prec_S = symmetrized(D_S_inv + X_S.transpose() * X_S);
    cache.Dtilde_S = cholesky(prec_S).inverse();
    cache.W = X_S.transpose() * Y + D_S_inv * prior.M_S;
    cache.cross = X_S.transpose() * X_Sprime;

    Matrix v = prior.Q + Y.transpose() * Y +
               prior.M_S.transpose() * D_S_inv * prior.M_S -
               cache.W.transpose() * cache.Dtilde_S * cache.W;

    if (psp > 0) {
        Matrix D_Sp_inv = cholesky(prior.D_Sprime).inverse();
        Matrix prec_Sp = symmetrized(D_Sp_inv + X_Sprime.transpose() * X_Sprime -
                                     cache.cross.transpose() * cache.Dtilde_S * cache.cross);
        cache.Dtilde_Sprime = cholesky(prec_Sp).inverse();
        cache.Mtilde_Sprime =
            cache.Dtilde_Sprime * (D_Sp_inv * prior.M_Sprime + X_Sprime.transpose() * Y -
                                   cache.cross.transpose() * (cache.Dtilde_S * cache.W));
        v += prior.M_Sprime.transpose() * D_Sp_inv * prior.M_Sprime -
             cache.Mtilde_Sprime.transpose() * prec_Sp * cache.Mtilde_Sprime;
    } else {
        cache.Dtilde_Sprime.resize(0, 0);
        cache.Mtilde_Sprime.resize(0, k);
    }

    cache.df_post = double(n) + prior.r;
    cache.V = symmetrized(v);
    cholesky(cache.V);  // V must be SPD; throws otherwise
    return cache;
}

namespace {

struct MvEngine {
    const PosteriorCacheMV& cache;
    const RestrictionSystem& system;
    const Partition& partition;
    Eigen::PartialPivLU<Matrix> R_S_lu;
    Matrix theta_prec_S;  // (R_S Dtilde_S R_S')^-1
    Matrix R_S_Dt;        // R_S Dtilde_S
    Matrix L_Dtilde_Sprime;
    int inner_sweeps;

    MvEngine(const PosteriorCacheMV& c, const RestrictionSystem& sys, const Partition& part,
             int sweeps)
        : cache(c), system(sys), partition(part), R_S_lu(part.H_S), inner_sweeps(sweeps) {
        if (sweeps < 1) throw InvalidParameter("gibbs_step_mv: inner_sweeps must be >= 1");
        Matrix theta_cov = symmetrized(part.H_S * cache.Dtilde_S * part.H_S.transpose());
        theta_prec_S = cholesky(theta_cov).inverse();
        R_S_Dt = part.H_S * cache.Dtilde_S;
        if (cache.Dtilde_Sprime.rows() > 0)
            L_Dtilde_Sprime = cholesky(cache.Dtilde_Sprime).lower();
    }

    ChainStateMV step(const ChainStateMV& state, RngStream& rng) const {
        const Index k = system.k();
        const Index q = partition.q();
        const Index psp = partition.p() - q;

        ChainStateMV next;
        next.Sigma = sample_inverse_wishart(cache.df_post, cache.V, rng);
        SpdFactor sigma_chol = cholesky(next.Sigma);
        Matrix L_Sigma = sigma_chol.lower();
        Matrix sigma_inv = sigma_chol.inverse();

        if (psp > 0) {
            Matrix z(psp, k);
            for (Index j = 0; j < k; ++j)
                for (Index i = 0; i < psp; ++i) z(i, j) = rng.normal();
            next.B_Sprime =
                cache.Mtilde_Sprime +
                Matrix(L_Dtilde_Sprime.triangularView<Eigen::Lower>() * z) * L_Sigma.transpose();
        } else {
            next.B_Sprime.resize(0, k);
        }

        // vec(R_S B_S) has covariance Sigma (x) (R_S Dtilde_S R_S'); the box is
        // the vec of the conditional bounds.
        BoxBounds box = conditional_box_mv(partition, system, next.B_Sprime);
        Matrix Mtilde_S = R_S_Dt * (cache.W - cache.cross * next.B_Sprime);
        Vector theta_mean = vec(Mtilde_S);
        Matrix precision = kron(sigma_inv, theta_prec_S);
        Vector theta = vec(Matrix(partition.H_S * state.B_S));
        Vector ws(theta.size());
        for (int s = 0; s < inner_sweeps; ++s)
            detail::tmvn_gibbs_sweep(precision, 1.0, theta_mean, box, theta, ws, rng);
        next.B_S = R_S_lu.solve(unvec(theta, q, k));
        return next;
    }
};

}  // namespace

ChainStateMV gibbs_step_mv(const PosteriorCacheMV& cache, const ChainStateMV& state,
                           const RestrictionSystem& system, const Partition& partition,
                           int inner_sweeps, RngStream& rng) {
    return MvEngine(cache, system, partition, inner_sweeps).step(state, rng);
}

std::vector<std::string> ChainMV::parameter_names() const {
    std::vector<std::string> names;
    for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < k; ++i)
            names.push_back("sigma_" + std::to_string(i + 1) + std::to_string(j + 1));
    for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < p; ++i)
            names.push_back("beta_" + std::to_string(i + 1) + std::to_string(j + 1));
    return names;
}

Matrix ChainMV::draws() const {
    const Index n = sigma.rows() - Index(burn_in);
    if (n <= 0) throw EmptyChain("ChainMV::draws: burn-in consumes the whole chain");
    Matrix out(n, sigma.cols() + beta.cols());
    out.leftCols(sigma.cols()) = sigma.bottomRows(n);
    out.rightCols(beta.cols()) = beta.bottomRows(n);
    return out;
}

ChainMV run_chain_mv(const Matrix& X, const Matrix& Y, const RestrictionSystem& system,
                     const Partition& partition, const PriorSpecMV& prior,
                     const ChainOptionsMV& opt) {
    if (opt.iters < 1) throw InvalidParameter("run_chain_mv: iters must be >= 1");
    const Index k = Y.cols();
    if (system.k() != k) throw ShapeMismatch("run_chain_mv: restriction/response k mismatch");
    auto [X_S, X_Sprime] = permute_design(X, partition);
    PosteriorCacheMV cache = compute_posterior_cache_mv(X_S, X_Sprime, Y, prior);
    MvEngine engine(cache, system, partition, opt.inner_sweeps);

    ChainStateMV state;
    if (opt.sigma_init) {
        state.Sigma = *opt.sigma_init;
    } else if (prior.r > double(k) + 1.0) {
        state.Sigma = prior.Q / (prior.r - double(k) - 1.0);
    } else {
        state.Sigma = prior.Q;
    }
    std::optional<Matrix> anchor;
    if (partition.p() > partition.q()) anchor = prior.M_Sprime;
    Matrix B0 = feasible_point_mv(system, partition, anchor);
    state.B_S.resize(partition.q(), k);
    state.B_Sprime.resize(partition.p() - partition.q(), k);
    for (Index i = 0; i < partition.q(); ++i) state.B_S.row(i) = B0.row(partition.S[size_t(i)]);
    for (Index i = 0; i < partition.p() - partition.q(); ++i)
        state.B_Sprime.row(i) = B0.row(partition.Sprime[size_t(i)]);

    RngStream rng(opt.seed, opt.rng_stream);
    ChainMV chain;
    chain.p = partition.p();
    chain.k = k;
    chain.sigma.resize(Index(opt.iters), k * k);
    chain.beta.resize(Index(opt.iters), partition.p() * k);
    chain.burn_in = opt.resolved_burn_in();
    chain.seed = opt.seed;
    chain.inner_sweeps = opt.inner_sweeps;

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t t = 0; t < opt.iters; ++t) {
        state = engine.step(state, rng);
        chain.sigma.row(Index(t)) = vec(state.Sigma).transpose();
        chain.beta.row(Index(t)) =
            vec(partition.assemble(state.B_S, state.B_Sprime)).transpose();
    }
    chain.sampling_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return chain;
}

Matrix ols_fit_mv(const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows()) throw ShapeMismatch("ols_fit_mv: X/Y row mismatch");
    Matrix gram = symmetrized(X.transpose() * X);
    return cholesky(gram).solve(Matrix(X.transpose() * Y));
}

PriorSpecMV prior_from_ols_mv(const Matrix& X, const Matrix& Y, const Partition& partition,
                              double r, std::optional<double> q_divisor) {
    Matrix B_hat = ols_fit_mv(X, Y);
    auto [X_S, X_Sprime] = permute_design(X, partition);
    Matrix resid = Y - X * B_hat;
    double divisor = q_divisor ? *q_divisor : double(Y.rows());
    PriorSpecMV prior;
    prior.r = r;
    prior.Q = symmetrized(resid.transpose() * resid) / divisor;
    prior.M_S.resize(partition.q(), Y.cols());
    for (Index i = 0; i < partition.q(); ++i) prior.M_S.row(i) = B_hat.row(partition.S[size_t(i)]);
    prior.M_Sprime.resize(partition.p() - partition.q(), Y.cols());
    for (Index i = 0; i < partition.p() - partition.q(); ++i)
        prior.M_Sprime.row(i) = B_hat.row(partition.Sprime[size_t(i)]);
    prior.D_S = cholesky(symmetrized(X_S.transpose() * X_S)).inverse();
    if (X_Sprime.cols() > 0)
        prior.D_Sprime = cholesky(symmetrized(X_Sprime.transpose() * X_Sprime)).inverse();
    else
        prior.D_Sprime.resize(0, 0);
    return prior;
}

}  // namespace ineqreg
