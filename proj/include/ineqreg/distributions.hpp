#pragma once

#include "ineqreg/linalg.hpp"
#include "ineqreg/rng.hpp"

namespace ineqreg {

/// Coordinate-wise truncation box; entries may be -inf/+inf. Each lower bound
/// must be strictly below its upper bound (a degenerate slice has measure zero
/// and would wedge the Gibbs scan).
struct BoxBounds {
    Vector lower;
    Vector upper;

    BoxBounds(Vector lo, Vector hi);
    static BoxBounds unbounded(Index n);

    Index size() const { return lower.size(); }
    bool contains(const Vector& x, double slack = 0.0) const;
};

double sample_inverse_gamma(double shape, double rate, RngStream& rng);

Vector sample_mvn(const Vector& mean, const SpdFactor& cov_factor, RngStream& rng);

/// N(mu, sigma^2) conditioned on (lo, hi). CDF inversion in the bulk; when the
/// whole interval sits beyond 5 sd on one side, Robert's exponential rejection
/// keeps the tail draws exact where inversion runs out of mantissa.
double sample_truncnorm(double mu, double sigma, double lo, double hi, RngStream& rng);

/// One draw of N(mean, cov) restricted to the box, obtained by `sweeps`
/// full coordinate Gibbs scans started at init. Chaining calls (passing the
/// previous draw as init) continues a single ergodic chain.
Vector sample_tmvn_box(const Vector& mean, const Matrix& cov, const BoxBounds& bounds,
                       const Vector& init, int sweeps, RngStream& rng);

/// Draw x ~ N(mean, cov) restricted to { x : lower <= A x <= upper } with A
/// invertible. Works on theta = A x ~ N(A mean, A cov A'), truncated to the
/// box, then maps back.
Vector sample_mvn_under_linear_box(const Vector& mean, const Matrix& cov, const Matrix& A,
                                   const BoxBounds& bounds, const Vector& init, int sweeps,
                                   RngStream& rng);

Matrix sample_inverse_wishart(double df, const Matrix& scale, RngStream& rng);

/// Draw with vec(result) ~ N(vec(M), Sigma (x) D) under column-major vec,
/// realized as M + L_D Z L_Sigma' with Z filled column-major from the stream.
Matrix sample_matrix_normal(const Matrix& M, const Matrix& Sigma, const Matrix& D,
                            RngStream& rng);

namespace detail {
/// One systematic-scan Gibbs sweep for N(mean, precision^-1) truncated to the
/// box. `precision` is the *unscaled* precision and `inv_scale` multiplies it
/// (the engines pass 1/sigma^2 so the factorization is done once per chain).
/// `centered` is caller-provided workspace of the same length as x.
void tmvn_gibbs_sweep(const Matrix& precision, double inv_scale, const Vector& mean,
                      const BoxBounds& bounds, Vector& x, Vector& centered, RngStream& rng);
}  // namespace detail

}  // namespace ineqreg
