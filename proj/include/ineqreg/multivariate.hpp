#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ineqreg/distributions.hpp"
#include "ineqreg/restrictions.hpp"

namespace ineqreg {

/// Matrix-normal-inverse-Wishart hyperparameters along the partition:
/// Sigma ~ IW_k(r, Q), B_S' | Sigma ~ N(M_Sprime, Sigma (x) D_Sprime),
/// B_S | B_S', Sigma ~ N(M_S, Sigma (x) D_S) truncated to the restriction set.
struct PriorSpecMV {
    double r = 1.0;
    Matrix Q;
    Matrix M_S;
    Matrix M_Sprime;
    Matrix D_S;
    Matrix D_Sprime;
};

struct PosteriorCacheMV {
    double df_post = 0.0;    // n + r
    Matrix V;                // k x k inverse-Wishart scale
    Matrix Dtilde_S;         // q x q (covariance side, Sigma factored out)
    Matrix Dtilde_Sprime;    // (p-q) x (p-q)
    Matrix W;                // q x k
    Matrix Mtilde_Sprime;    // (p-q) x k
    Matrix cross;            // X_S' X_Sprime
};

PosteriorCacheMV compute_posterior_cache_mv(const Matrix& X_S, const Matrix& X_Sprime,
                                            const Matrix& Y, const PriorSpecMV& prior);

struct ChainStateMV {
    Matrix Sigma;
    Matrix B_S;
    Matrix B_Sprime;
};

struct ChainMV {
    Matrix sigma;  // iters x k*k, column-major entries of Sigma
    Matrix beta;   // iters x p*k, column-major entries of B in original row order
    Index p = 0;
    Index k = 0;
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;
    int inner_sweeps = 1;
    double sampling_seconds = 0.0;

    std::size_t iterations() const { return std::size_t(sigma.rows()); }
    double seconds_per_iteration() const {
        return iterations() ? sampling_seconds / double(iterations()) : 0.0;
    }
    std::vector<std::string> parameter_names() const;  // sigma_11.. then beta_11..
    Matrix draws() const;
};

struct ChainOptionsMV {
    std::size_t iters = 10000;
    std::size_t burn_in = std::size_t(-1);
    std::uint64_t seed = 0;
    std::uint64_t rng_stream = 0;
    int inner_sweeps = 5;
    std::optional<Matrix> sigma_init;

    std::size_t resolved_burn_in() const {
        return burn_in == std::size_t(-1) ? iters / 10 : burn_in;
    }
};

/// One update: Sigma from its marginal IW(n+r, V), B_S' matrix-normal, then
/// vec(B_S) from the truncated normal over the vec box through I_k (x) R_S.
ChainStateMV gibbs_step_mv(const PosteriorCacheMV& cache, const ChainStateMV& state,
                           const RestrictionSystem& system, const Partition& partition,
                           int inner_sweeps, RngStream& rng);

ChainMV run_chain_mv(const Matrix& X, const Matrix& Y, const RestrictionSystem& system,
                     const Partition& partition, const PriorSpecMV& prior,
                     const ChainOptionsMV& opt);

Matrix ols_fit_mv(const Matrix& X, const Matrix& Y);

/// Prior row-blocks from the OLS fit, D blocks from inverse Grams,
/// Q = (1/n) residual cross-product (as in the worked examples).
PriorSpecMV prior_from_ols_mv(const Matrix& X, const Matrix& Y, const Partition& partition,
                              double r, std::optional<double> q_divisor = std::nullopt);

}  // namespace ineqreg
