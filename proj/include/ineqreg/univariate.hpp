#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ineqreg/distributions.hpp"
#include "ineqreg/restrictions.hpp"

namespace ineqreg {

/// Conjugate normal-inverse-gamma hyperparameters, split along the partition:
/// sigma2 ~ IG(a/2, b/2), beta_S' | sigma2 ~ N(mu_Sprime, sigma2 C_Sprime),
/// beta_S | beta_S', sigma2 ~ N(mu_S, sigma2 C_S) truncated to the
/// restriction set.
struct PriorSpec {
    double a = 1.0;
    double b = 1.0;
    Vector mu_S;
    Vector mu_Sprime;
    Matrix C_S;
    Matrix C_Sprime;
};

/// Everything about the posterior that does not depend on the Gibbs state.
/// sigma2's marginal is IG(nu_tilde, eta_tilde); the coefficient blocks are
/// N(mu_tilde_Sprime, sigma2 Ctilde_Sprime) and, given beta_S', a truncated
/// N(Ctilde_S (W - cross beta_S'), sigma2 Ctilde_S).
struct PosteriorCache {
    double nu_tilde = 0.0;
    double eta_tilde = 0.0;
    Matrix Ctilde_S;         // q x q posterior covariance of the S block (sigma2 factored out)
    Matrix Ctilde_Sprime;    // (p-q) x (p-q)
    Vector W;                // X_S' Y + C_S^-1 mu_S
    Vector mu_tilde_Sprime;  // (p-q)
    Matrix cross;            // X_S' X_Sprime
};

PosteriorCache compute_posterior_cache(const Matrix& X_S, const Matrix& X_Sprime,
                                       const Vector& Y, const PriorSpec& prior);

struct ChainState {
    double sigma2 = 1.0;
    Vector beta_S;
    Vector beta_Sprime;
};

struct Chain {
    Matrix beta;    // iters x p, original coefficient order
    Vector sigma2;  // iters
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;
    int inner_sweeps = 1;
    double sampling_seconds = 0.0;  // Gibbs loop only, monotonic clock

    std::size_t iterations() const { return std::size_t(sigma2.size()); }
    double seconds_per_iteration() const {
        return iterations() ? sampling_seconds / double(iterations()) : 0.0;
    }
    std::vector<std::string> parameter_names() const;
    /// Post-burn-in draws, sigma2 first then beta_1..beta_p.
    Matrix draws() const;
};

struct ChainOptions {
    std::size_t iters = 10000;
    /// Discarded by summaries; defaults to 10% of iters when left at npos.
    std::size_t burn_in = std::size_t(-1);
    std::uint64_t seed = 0;
    std::uint64_t rng_stream = 0;
    int inner_sweeps = 5;
    std::optional<double> sigma2_init;

    std::size_t resolved_burn_in() const {
        return burn_in == std::size_t(-1) ? iters / 10 : burn_in;
    }
};

using BoundsFn = std::function<BoxBounds(const Vector& beta_Sprime)>;

/// One collapsed-Gibbs update: sigma2 from its marginal, beta_S' from its
/// unrestricted conditional, then beta_S from the truncated conditional whose
/// support is bounds_fn(beta_S') mapped through H_S.
ChainState gibbs_step(const PosteriorCache& cache, const ChainState& state,
                      const BoundsFn& bounds_fn, const Matrix& H_S, int inner_sweeps,
                      RngStream& rng);

Chain run_chain(const Matrix& X, const Vector& Y, const RestrictionSystem& system,
                const Partition& partition, const PriorSpec& prior, const ChainOptions& opt);

/// Gibbs sampler on theta = H beta for a square invertible restriction
/// matrix, each coordinate drawn from its truncated univariate conditional of
/// the unpartitioned conjugate posterior. The comparison baseline for the
/// partitioned sampler.
struct FullPrior {
    double a = 1.0;
    double b = 1.0;
    Vector mu;
    Matrix C;
};

Chain geweke_baseline_chain(const Matrix& X, const Vector& Y, const RestrictionSystem& system,
                            const FullPrior& prior, const ChainOptions& opt);

/// Ordinary least squares fit (X must have full column rank).
Vector ols_fit(const Matrix& X, const Vector& Y);

/// Opt-in convenience: prior means from the OLS fit, covariance blocks from
/// the inverse Gram matrices of the partitioned design.
PriorSpec prior_from_ols(const Matrix& X, const Vector& Y, const Partition& partition,
                         double a, double b);

}  // namespace ineqreg
