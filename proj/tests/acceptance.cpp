// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.
// Everything runs at desk scale with pinned seeds and tolerances.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ineqreg/datasets.hpp"
#include "ineqreg/diagnostics.hpp"
#include "ineqreg/experiments.hpp"

using namespace ineqreg;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix random_matrix(Index r, Index c, RngStream& rng) {
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j)
        for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
    return m;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double mc_se_mean(const Summary& s, Index j) { return s.sd[j] / std::sqrt(s.ess[j]); }

// Kurtosis-aware Monte Carlo standard error of a sample standard deviation.
double mc_se_sd(const Matrix& draws, const Summary& s, Index j) {
    Vector col = draws.col(j);
    double m = col.mean();
    double var = (col.array() - m).square().mean();
    double m4 = (col.array() - m).pow(4).mean();
    double kurt = m4 / (var * var);
    return s.sd[j] * std::sqrt(std::max(kurt - 1.0, 0.5) / (4.0 * s.ess[j]));
}

// ---------------------------------------------------------------- criterion 1
void criterion1_conjugacy() {
    bool ok = true;
    double worst = 0.0;
    {
        RngStream rng(1001);
        const Index n = 25, p = 4, q = 2;
        Matrix X = random_matrix(n, p, rng);
        Vector Y = random_matrix(n, 1, rng).col(0) * 1.5;

        RestrictionSystem sys;
        sys.H = Matrix::Zero(q, p);
        sys.H.leftCols(q) = Matrix::Identity(q, q);
        sys.K = Matrix::Constant(q, 1, -kInf);
        sys.G = Matrix::Constant(q, 1, kInf);
        validate(sys);
        Partition partition = select_partition(sys);

        PriorSpec prior;
        prior.a = 6.0;
        prior.b = 4.0;
        prior.mu_S = Vector::Zero(q);
        prior.mu_Sprime = Vector::Zero(p - q);
        prior.C_S = Matrix::Identity(q, q);
        prior.C_Sprime = Matrix::Identity(p - q, p - q);

        ChainOptions opt;
        opt.iters = 100000;
        opt.burn_in = 2000;
        opt.seed = 2024;
        opt.inner_sweeps = 5;
        Chain chain = run_chain(X, Y, sys, partition, prior, opt);
        Matrix draws = chain.draws();
        Summary s = summarize(draws, chain.parameter_names());

        auto [X_S, X_Sprime] = permute_design(X, partition);
        Matrix Xp(n, p);
        Xp << X_S, X_Sprime;
        Matrix prec = symmetrized(Xp.transpose() * Xp + Matrix::Identity(p, p));
        Matrix cov = cholesky(prec).inverse();
        Vector mean_perm = cov * (Xp.transpose() * Y);
        const double nu = 0.5 * (double(n) + prior.a);
        const double eta =
            0.5 * (prior.b + Y.squaredNorm() - mean_perm.dot(prec * mean_perm));
        const double s2_mean = eta / (nu - 1.0);
        const double s2_sd = std::sqrt(eta * eta / ((nu - 1) * (nu - 1) * (nu - 2)));

        Vector mean(p), sd(p);
        for (Index i = 0; i < p; ++i) {
            Index orig = (i < q) ? partition.S[size_t(i)] : partition.Sprime[size_t(i - q)];
            mean[orig] = mean_perm[i];
            sd[orig] = std::sqrt(s2_mean * cov(i, i));
        }

        for (Index j = 0; j < p; ++j) {
            double z_mean = std::fabs(s.mean[j + 1] - mean[j]) / mc_se_mean(s, j + 1);
            double z_sd = std::fabs(s.sd[j + 1] - sd[j]) / mc_se_sd(draws, s, j + 1);
            worst = std::max({worst, z_mean, z_sd});
        }
        worst = std::max(worst, std::fabs(s.mean[0] - s2_mean) / mc_se_mean(s, 0));
        worst = std::max(worst, std::fabs(s.sd[0] - s2_sd) / mc_se_sd(draws, s, 0));
        if (worst > 3.0) ok = false;
    }

    double worst_mv = 0.0;
    {
        RngStream rng(1002);
        const Index n = 18, p = 3, q = 2, k = 2;
        Matrix X = random_matrix(n, p, rng);
        Matrix Y = random_matrix(n, k, rng);

        RestrictionSystem sys;
        sys.H = Matrix::Zero(q, p);
        sys.H.leftCols(q) = Matrix::Identity(q, q);
        sys.K = Matrix::Constant(q, k, -kInf);
        sys.G = Matrix::Constant(q, k, kInf);
        validate(sys);
        Partition partition = select_partition(sys);

        PriorSpecMV prior;
        prior.r = 5.0;
        prior.Q = Matrix::Identity(k, k);
        prior.M_S = Matrix::Zero(q, k);
        prior.M_Sprime = Matrix::Zero(p - q, k);
        prior.D_S = Matrix::Identity(q, q);
        prior.D_Sprime = Matrix::Identity(p - q, p - q);

        ChainOptionsMV opt;
        opt.iters = 100000;
        opt.burn_in = 2000;
        opt.seed = 2025;
        opt.inner_sweeps = 5;
        ChainMV chain = run_chain_mv(X, Y, sys, partition, prior, opt);
        Matrix draws = chain.draws();
        Summary s = summarize(draws, chain.parameter_names());

        auto [X_S, X_Sprime] = permute_design(X, partition);
        Matrix Xp(n, p);
        Xp << X_S, X_Sprime;
        Matrix prec = symmetrized(Xp.transpose() * Xp + Matrix::Identity(p, p));
        Matrix M_perm = cholesky(prec).solve(Matrix(Xp.transpose() * Y));
        Matrix V = Matrix(prior.Q + Y.transpose() * Y - M_perm.transpose() * prec * M_perm);
        const double df = double(n) + prior.r;
        Matrix sigma_mean = V / (df - double(k) - 1.0);

        Matrix M_orig(p, k);
        for (Index i = 0; i < q; ++i) M_orig.row(partition.S[size_t(i)]) = M_perm.row(i);
        for (Index i = 0; i < p - q; ++i)
            M_orig.row(partition.Sprime[size_t(i)]) = M_perm.row(q + i);

        for (Index j = 0; j < p * k; ++j) {
            Index col = k * k + j;
            double z = std::fabs(s.mean[col] - vec(M_orig)[j]) / mc_se_mean(s, col);
            worst_mv = std::max(worst_mv, z);
        }
        for (Index j = 0; j < k * k; ++j) {
            double z = std::fabs(s.mean[j] - vec(sigma_mean)[j]) / mc_se_mean(s, j);
            worst_mv = std::max(worst_mv, z);
        }
        if (worst_mv > 3.0) ok = false;
    }
    report(1, "unconstrained conjugacy (uni + mv)", ok,
           "max |z| uni = " + fmt(worst) + ", mv = " + fmt(worst_mv) + " (<= 3)");
}

// ---------------------------------------------------------------- criterion 2
void criterion2_tmvn() {
    Vector mu = Vector::Zero(2);
    Matrix cov(2, 2);
    cov << 1.0, 0.5, 0.5, 1.0;
    BoxBounds bounds(Vector::Zero(2), Vector::Constant(2, kInf));
    const int n = 1000000;

    RngStream oracle_rng(2001);
    SpdFactor f = cholesky(cov);
    Vector o_sum = Vector::Zero(2);
    Matrix o_sq = Matrix::Zero(2, 2);
    for (int kept = 0; kept < n;) {
        Vector z = sample_mvn(mu, f, oracle_rng);
        if (z[0] >= 0.0 && z[1] >= 0.0) {
            o_sum += z;
            o_sq += z * z.transpose();
            ++kept;
        }
    }

    RngStream rng(2002);
    Vector x = Vector::Constant(2, 0.5);
    Vector g_sum = Vector::Zero(2);
    Matrix g_sq = Matrix::Zero(2, 2);
    bool contained = true;
    for (int i = 0; i < n; ++i) {
        x = sample_tmvn_box(mu, cov, bounds, x, 5, rng);
        if (!(x[0] > 0.0 && x[1] > 0.0)) contained = false;
        g_sum += x;
        g_sq += x * x.transpose();
    }
    double moment_gap = std::max((g_sum / n - o_sum / n).cwiseAbs().maxCoeff(),
                                 (g_sq / n - o_sq / n).cwiseAbs().maxCoeff());

    // Univariate truncated normal KS distance against the analytic CDF.
    RngStream ks_rng(2003);
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_truncnorm(0.0, 1.0, 0.0, kInf, ks_rng);
    std::sort(draws.begin(), draws.end());
    const double za = normal_cdf(0.0);
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        double cdf = (normal_cdf(draws[size_t(i)]) - za) / (1.0 - za);
        ks = std::max(ks, std::fabs(double(i + 1) / n - cdf));
        ks = std::max(ks, std::fabs(double(i) / n - cdf));
    }

    bool ok = contained && moment_gap < 0.01 && ks < 0.002;
    report(2, "TMVN moments vs rejection oracle, containment, KS", ok,
           "moment gap = " + fmt(moment_gap) + " (< 0.01), KS = " + fmt(ks) +
               " (< 0.002), containment " + (contained ? "100%" : "VIOLATED"));
}

// ---------------------------------------------------------------- criterion 3
void criterion3_example1(const StudyConfig& base) {
    for (int restriction : {1, 2}) {
        StudyConfig config = base;
        config.seed = 301 + std::uint64_t(restriction);
        ExperimentReport rep = run_example1(restriction, config);
        const MethodResult& m = rep.method("partitioned");
        double worst_bias = 0.0;
        for (Index j = 0; j < 5; ++j)
            worst_bias = std::max(worst_bias, std::fabs(m.est_mean[j] - rep.truth[j]));
        double s2 = m.est_mean[5];
        bool ok = worst_bias < 0.1 && m.mse_beta >= 0.03 && m.mse_beta <= 0.12 && s2 >= 0.6 &&
                  s2 <= 1.0;
        report(3, "example1 restriction " + std::to_string(restriction) + " (desk scale)", ok,
               "max coefficient bias = " + fmt(worst_bias) + " (< 0.1), MSE = " +
                   fmt(m.mse_beta) + " (in [0.03, 0.12]), sigma2 = " + fmt(s2) +
                   " (in [0.6, 1.0])");
        if (restriction == 2) {
            double ratio = m.seconds_per_iteration / rep.method("geweke").seconds_per_iteration;
            report(4, "per-iteration cost, partitioned vs baseline", ratio < 1.0,
                   "ratio = " + fmt(ratio) + " (< 1)");
        }
    }
}

// ---------------------------------------------------------------- criterion 5
void criterion5_delta_sweep(const StudyConfig& base) {
    StudyConfig config = base;
    config.seed = 501;
    Vector deltas(11);
    for (Index j = 0; j < 11; ++j) deltas[j] = -1.0 + 0.2 * double(j);
    auto sweep = run_delta_sweep(deltas, config);

    auto re_at = [&](double d) {
        for (const auto& [delta, re] : sweep)
            if (std::fabs(delta - d) < 1e-9) return re;
        return -1.0;
    };
    double argmax = sweep[0].first, best = sweep[0].second;
    for (const auto& [delta, re] : sweep)
        if (re > best) {
            best = re;
            argmax = delta;
        }
    bool ok = re_at(0.2) > 1.0 && re_at(0.6) > 1.0 && re_at(1.0) > 1.0 &&
              re_at(-1.0) < re_at(0.0) && argmax >= -0.2 - 1e-9 && argmax <= 0.2 + 1e-9;
    report(5, "relative-efficiency sweep shape", ok,
           "RE(0.2) = " + fmt(re_at(0.2)) + ", RE(0.6) = " + fmt(re_at(0.6)) + ", RE(1) = " +
               fmt(re_at(1.0)) + ", RE(-1) = " + fmt(re_at(-1.0)) + " < RE(0) = " +
               fmt(re_at(0.0)) + ", argmax = " + fmt(argmax) + " (in [-0.2, 0.2])");
}

// ---------------------------------------------------------------- criterion 6
void criterion6_example2(const StudyConfig& base) {
    StudyConfig config = base;
    config.seed = 601;
    ExperimentReport rep = run_example2(config);
    const MethodResult& m = rep.method("partitioned");
    bool symmetric = true;
    for (Index i = 0; i < m.estimates.rows(); ++i)
        if (m.estimates(i, 1) != m.estimates(i, 2)) symmetric = false;

    // Draw-level feasibility on a representative replication.
    RngStream data_rng(config.seed, 1000);
    Matrix X(20, 5);
    X.col(0).setOnes();
    for (Index j = 1; j < 5; ++j)
        for (Index i = 0; i < 20; ++i) X(i, j) = data_rng.normal();
    Matrix L = cholesky(example2_Sigma_true()).lower();
    Matrix Y = X * example2_B_true();
    for (Index i = 0; i < 20; ++i) {
        Vector z(2);
        z << data_rng.normal(), data_rng.normal();
        Y.row(i) += (L * z).transpose();
    }
    RestrictionSystem sys = example2_system();
    Partition partition = select_partition(sys);
    PriorSpecMV prior = prior_from_ols_mv(X, Y, partition, 2.0);
    ChainOptionsMV opt;
    opt.iters = 5000;
    opt.seed = config.seed;
    opt.inner_sweeps = config.inner_sweeps;
    ChainMV chain = run_chain_mv(X, Y, sys, partition, prior, opt);
    bool feasible = true;
    for (Index t = Index(chain.burn_in); t < Index(chain.iterations()); ++t)
        if (!check_feasible(Matrix(unvec(chain.beta.row(t).transpose(), 5, 2)), sys, 1e-12))
            feasible = false;

    bool ok = symmetric && feasible && m.mse_beta >= 0.35 && m.mse_beta <= 0.85 &&
              m.mse_sigma >= 0.15 && m.mse_sigma <= 0.55;
    report(6, "example2 (desk scale)", ok,
           "coefficient MSE = " + fmt(m.mse_beta) + " (in [0.35, 0.85]), sigma MSE = " +
               fmt(m.mse_sigma) + " (in [0.15, 0.55]), sigma_12 == sigma_21 " +
               (symmetric ? "exactly" : "VIOLATED") + ", draws " +
               (feasible ? "feasible" : "INFEASIBLE"));
}

// ---------------------------------------------------------------- criterion 7
void criterion7_rent() {
    StudyConfig config;
    config.seed = 701;
    config.inner_sweeps = 1;
    ExperimentReport rep = run_rent_analysis(config);
    const MethodResult& part = rep.method("partitioned");
    const MethodResult& base = rep.method("geweke");

    const double targets[5] = {37.70, 134.90, 122.74, -0.6447, -1.1448};
    bool close = std::fabs(part.est_mean[0] - targets[0]) < 2.0 &&
                 std::fabs(part.est_mean[1] - targets[1]) < 2.0 &&
                 std::fabs(part.est_mean[2] - targets[2]) < 2.0 &&
                 std::fabs(part.est_mean[3] - targets[3]) < 0.2 &&
                 std::fabs(part.est_mean[4] - targets[4]) < 0.2;
    bool tighter = part.post_sd[0] < base.post_sd[0] && part.post_sd[1] < base.post_sd[1] &&
                   part.post_sd[2] < base.post_sd[2];

    // Draw-level sign feasibility.
    Dataset ds = load_dataset(config.data_dir + "/rent.csv", DatasetFormat::rent);
    RestrictionSystem sys = rent_system();
    Partition partition = select_partition(sys, std::vector<Index>{1, 2, 3, 4});
    auto [X_S, X_Sprime] = permute_design(ds.X, partition);
    PriorSpec prior;
    prior.a = 0.001;
    prior.b = 0.001;
    const Vector mu = rent_prior_mean();
    prior.mu_S.resize(4);
    for (Index i = 0; i < 4; ++i) prior.mu_S[i] = mu[partition.S[size_t(i)]];
    prior.mu_Sprime = Vector::Constant(1, mu[partition.Sprime[0]]);
    prior.C_S = cholesky(symmetrized(X_S.transpose() * X_S)).inverse();
    prior.C_Sprime = cholesky(symmetrized(X_Sprime.transpose() * X_Sprime)).inverse();
    ChainOptions opt;
    opt.iters = 10000;
    opt.seed = config.seed;
    opt.inner_sweeps = 1;
    Chain chain = run_chain(ds.X, ds.Y.col(0), sys, partition, prior, opt);
    bool feasible = true;
    for (Index t = 0; t < Index(chain.iterations()); ++t) {
        Vector beta = chain.beta.row(t).transpose();
        if (!(beta[1] >= -1e-12 && beta[2] >= -1e-12 && beta[3] <= 1e-12 && beta[4] <= 1e-12))
            feasible = false;
    }

    bool ok = close && tighter && feasible;
    report(7, "rent data", ok,
           "estimates (" + fmt(part.est_mean[0]) + ", " + fmt(part.est_mean[1]) + ", " +
               fmt(part.est_mean[2]) + ", " + fmt(part.est_mean[3]) + ", " +
               fmt(part.est_mean[4]) + ") vs (37.70, 134.90, 122.74, -0.6447, -1.1448); sd " +
               "beta_1 " + fmt(part.post_sd[0]) + " < " + fmt(base.post_sd[0]) +
               (tighter ? "" : " VIOLATED") + "; signs " + (feasible ? "hold" : "VIOLATED"));
}

// ---------------------------------------------------------------- criterion 8
void criterion8_chemical() {
    StudyConfig config;
    config.seed = 801;
    config.inner_sweeps = 1;
    ExperimentReport rep = run_chemical_analysis(config);
    const MethodResult& m = rep.method("partitioned");

    // Published posterior means and sds (sigma upper triangle, then B by column).
    const double b_mean[12] = {332.1186, -1.5460, -1.5369, -2.0097, -25.9678, 0.4041,
                               0.2401,   1.2626,  -164.1275, 0.9142, 0.9404,  1.2491};
    const double b_sd[12] = {9.1182, 0.0544, 0.0974, 0.0107, 15.8022, 0.0944,
                             0.1441, 0.0940, 15.2907, 0.0913, 0.1213, 0.1123};
    const double s_mean[6] = {4.0024, -1.0698, -3.3008, 12.4211, -8.9508, 11.5510};
    const double s_sd[6] = {1.2713, 1.5922, 1.6979, 3.9347, 3.3254, 3.6744};
    const Index s_idx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

    double worst = 0.0;
    for (Index j = 0; j < 12; ++j) {
        double est = m.est_mean[9 + j];  // beta columns follow the 3x3 sigma block
        worst = std::max(worst, std::fabs(est - b_mean[j]) / (3.0 * b_sd[j]));
    }
    for (int t = 0; t < 6; ++t) {
        Index col = s_idx[t][1] * 3 + s_idx[t][0];
        worst = std::max(worst, std::fabs(m.est_mean[col] - s_mean[t]) / (3.0 * s_sd[t]));
    }

    // Draw-level feasibility and SPD.
    Dataset ds = load_dataset(config.data_dir + "/chemical.csv", DatasetFormat::chemical);
    RestrictionSystem sys = chemical_system();
    Partition partition = select_partition(sys, std::vector<Index>{2, 3});
    PriorSpecMV prior = prior_from_ols_mv(ds.X, ds.Y, partition, 3.0);
    ChainOptionsMV opt;
    opt.iters = 10000;
    opt.seed = config.seed;
    opt.inner_sweeps = 1;
    ChainMV chain = run_chain_mv(ds.X, ds.Y, sys, partition, prior, opt);
    bool feasible = true, spd = true;
    for (Index t = 0; t < Index(chain.iterations()); ++t) {
        if (!check_feasible(Matrix(unvec(chain.beta.row(t).transpose(), 4, 3)), sys, 1e-12))
            feasible = false;
        try {
            cholesky(Matrix(unvec(chain.sigma.row(t).transpose(), 3, 3)));
        } catch (const NotPositiveDefinite&) {
            spd = false;
        }
    }

    bool ok = worst < 1.0 && feasible && spd;
    report(8, "chemical data", ok,
           "max |mean - table| / (3 sd) = " + fmt(worst) + " (< 1), draws " +
               (feasible ? "feasible" : "INFEASIBLE") + ", Sigma " +
               (spd ? "SPD" : "NOT SPD"));
}

// ---------------------------------------------------------------- criterion 9
void criterion9_properties(const StudyConfig& base) {
    // Feasibility of every post-burn-in draw on a truncated run.
    RngStream data_rng(901, 1000);
    Matrix X(20, 5);
    X.col(0).setOnes();
    for (Index j = 1; j < 5; ++j)
        for (Index i = 0; i < 20; ++i) X(i, j) = data_rng.normal();
    Vector Y = X * example1_beta_true();
    for (Index i = 0; i < 20; ++i) Y[i] += data_rng.normal();
    RestrictionSystem sys = example1_system(2);
    Partition partition = select_partition(sys, example1_preferred_S(2));
    PriorSpec prior = prior_from_ols(X, Y, partition, 6.0, 2.0);
    ChainOptions opt;
    opt.iters = 20000;
    opt.seed = 901;
    opt.inner_sweeps = base.inner_sweeps;
    Chain chain = run_chain(X, Y, sys, partition, prior, opt);
    bool feasible = true;
    for (Index t = Index(chain.burn_in); t < Index(chain.iterations()); ++t)
        if (!check_feasible(Vector(chain.beta.row(t).transpose()), sys, 1e-12)) feasible = false;

    // Partition round-trip identity.
    RngStream rng(902);
    bool round_trip = true;
    for (int trial = 0; trial < 200; ++trial) {
        Index p = 3 + Index(rng.next_u64() % 4);
        Index q = 1 + Index(rng.next_u64() % std::uint64_t(p));
        Matrix H = random_matrix(q, p, rng);
        RestrictionSystem rs{H, Matrix::Constant(q, 1, -kInf), Matrix::Zero(q, 1)};
        validate(rs);
        Partition part = select_partition(rs);
        Vector beta = random_matrix(p, 1, rng).col(0);
        Vector bs(q), bsp(p - q);
        for (Index i = 0; i < q; ++i) bs[i] = beta[part.S[size_t(i)]];
        for (Index i = 0; i < p - q; ++i) bsp[i] = beta[part.Sprime[size_t(i)]];
        if ((part.assemble(bs, bsp) - beta).cwiseAbs().maxCoeff() != 0.0) round_trip = false;
    }

    // vec/Kronecker identity to 1e-12.
    bool vec_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        Index q = 2 + Index(rng.next_u64() % 5);
        Index k = 1 + Index(rng.next_u64() % 6);
        Matrix r_s = random_matrix(q, q, rng);
        Matrix b_s = random_matrix(q, k, rng);
        Vector lhs = vec(Matrix(r_s * b_s));
        Vector rhs = kron(Matrix::Identity(k, k), r_s) * vec(b_s);
        if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12) vec_ok = false;
    }

    // k = 1 multivariate/univariate consistency at the cache level (exact)
    // plus chain moments within Monte-Carlo error.
    bool k1_ok = true;
    {
        Matrix Xk = random_matrix(20, 3, rng);
        Vector yk = random_matrix(20, 1, rng).col(0);
        RestrictionSystem rsys;
        rsys.H = Matrix::Zero(2, 3);
        rsys.H.leftCols(2) = Matrix::Identity(2, 2);
        rsys.K = Matrix::Constant(2, 1, -kInf);
        rsys.G = Matrix::Zero(2, 1);
        validate(rsys);
        Partition part = select_partition(rsys);
        PriorSpec uni;
        uni.a = 6.0;
        uni.b = 2.0;
        uni.mu_S = Vector::Zero(2);
        uni.mu_Sprime = Vector::Zero(1);
        uni.C_S = Matrix::Identity(2, 2);
        uni.C_Sprime = Matrix::Identity(1, 1);
        PriorSpecMV mv;
        mv.r = uni.a;
        mv.Q = Matrix::Constant(1, 1, uni.b);
        mv.M_S = uni.mu_S;
        mv.M_Sprime = uni.mu_Sprime;
        mv.D_S = uni.C_S;
        mv.D_Sprime = uni.C_Sprime;

        auto [Xk_S, Xk_Sp] = permute_design(Xk, part);
        PosteriorCache cu = compute_posterior_cache(Xk_S, Xk_Sp, yk, uni);
        PosteriorCacheMV cm = compute_posterior_cache_mv(Xk_S, Xk_Sp, Matrix(yk), mv);
        if (std::fabs(cm.V(0, 0) - 2.0 * cu.eta_tilde) > 1e-10 * cu.eta_tilde) k1_ok = false;
        if ((cm.Dtilde_S - cu.Ctilde_S).cwiseAbs().maxCoeff() > 1e-10) k1_ok = false;

        ChainOptions uo;
        uo.iters = 60000;
        uo.seed = 903;
        uo.inner_sweeps = 2;
        Summary su = summarize(run_chain(Xk, yk, rsys, part, uni, uo));
        ChainOptionsMV mo;
        mo.iters = 60000;
        mo.seed = 904;
        mo.inner_sweeps = 2;
        Summary sm = summarize(run_chain_mv(Xk, Matrix(yk), rsys, part, mv, mo));
        for (Index j = 0; j < 4; ++j)
            if (std::fabs(su.mean[j] - sm.mean[j]) > 0.02) k1_ok = false;
    }

    // Deterministic reruns, bit identical.
    ChainOptions opt2 = opt;
    opt2.iters = 2000;
    Chain c1 = run_chain(X, Y, sys, partition, prior, opt2);
    Chain c2 = run_chain(X, Y, sys, partition, prior, opt2);
    bool deterministic = (c1.beta - c2.beta).cwiseAbs().maxCoeff() == 0.0 &&
                         (c1.sigma2 - c2.sigma2).cwiseAbs().maxCoeff() == 0.0;

    bool ok = feasible && round_trip && vec_ok && k1_ok && deterministic;
    report(9, "property suite", ok,
           std::string("feasibility ") + (feasible ? "100%" : "VIOLATED") + ", round-trip " +
               (round_trip ? "exact" : "VIOLATED") + ", vec/kron " +
               (vec_ok ? "<= 1e-12" : "VIOLATED") + ", k=1 consistency " +
               (k1_ok ? "ok" : "VIOLATED") + ", determinism " +
               (deterministic ? "bit-identical" : "VIOLATED"));
}

}  // namespace

int main() {
    StudyConfig desk;
    desk.scale = "desk";
    desk.jobs = 4;
    desk.inner_sweeps = 1;

    criterion1_conjugacy();
    criterion2_tmvn();
    criterion3_example1(desk);  // also reports criterion 4 (timing)
    criterion5_delta_sweep(desk);
    criterion6_example2(desk);
    criterion7_rent();
    criterion8_chemical();
    criterion9_properties(desk);

    std::printf("%s\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT");
    return g_failures == 0 ? 0 : 1;
}
