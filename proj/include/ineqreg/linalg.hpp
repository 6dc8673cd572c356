#pragma once

#include <Eigen/Dense>

#include "ineqreg/errors.hpp"

namespace ineqreg {

// Dense column-major storage throughout, so vec() is a memory view and the
// Kronecker identities used by the multivariate sampler hold index-for-index.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
///
/// Inputs are symmetrized ((m + mᵀ)/2) before factorization and a pivot is
/// accepted only if it exceeds 1e-12 × max diagonal, so near-singular
/// posterior precisions fail loudly instead of producing garbage draws.
class SpdFactor {
public:
    static SpdFactor cholesky(const Matrix& m);

    Index dim() const { return lower_.rows(); }
    const Matrix& lower() const { return lower_; }

    // Solves (L Lᵀ) x = b.
    Vector solve(const Vector& b) const;
    Matrix solve(const Matrix& b) const;

    // L z for sampling (z ~ iid standard normal gives a draw with this covariance).
    Vector apply_lower(const Vector& z) const;

    Matrix reconstruct() const { return lower_ * lower_.transpose(); }
    Matrix inverse() const;
    double log_det() const;

private:
    explicit SpdFactor(Matrix lower) : lower_(std::move(lower)) {}
    Matrix lower_;
};

inline SpdFactor cholesky(const Matrix& m) { return SpdFactor::cholesky(m); }

Vector solve_spd(const SpdFactor& f, const Vector& b);
Matrix solve_spd(const SpdFactor& f, const Matrix& b);

Matrix kron(const Matrix& a, const Matrix& b);

// Column-major stacking and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Index rows, Index cols);

Matrix symmetrized(const Matrix& m);

}  // namespace ineqreg
