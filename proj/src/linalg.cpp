#include "ineqreg/linalg.hpp"

#include <cmath>
#include <string>

namespace ineqreg {

SpdFactor SpdFactor::cholesky(const Matrix& m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("cholesky: matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected square");
    if (m.rows() < 1) throw DimensionMismatch("cholesky: empty matrix");
    const double scale = m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (scale > 0 ? scale : 1.0))
        throw InvalidParameter("cholesky: input is not symmetric");

    const Index n = m.rows();
    Matrix a = symmetrized(m);
    const double tol = 1e-12 * a.diagonal().maxCoeff();

    Matrix L = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        double d = a(j, j) - L.row(j).head(j).squaredNorm();
        if (!(d > tol))
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) +
                                      " below tolerance (matrix not positive definite)");
        L(j, j) = std::sqrt(d);
        for (Index i = j + 1; i < n; ++i) {
            double s = a(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
            L(i, j) = s / L(j, j);
        }
    }
    return SpdFactor(std::move(L));
}

Vector SpdFactor::solve(const Vector& b) const {
    if (b.size() != dim())
        throw DimensionMismatch("solve_spd: rhs length " + std::to_string(b.size()) +
                                " does not match dimension " + std::to_string(dim()));
    Vector y = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix SpdFactor::solve(const Matrix& b) const {
    if (b.rows() != dim())
        throw DimensionMismatch("solve_spd: rhs has " + std::to_string(b.rows()) +
                                " rows, expected " + std::to_string(dim()));
    Matrix y = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Vector SpdFactor::apply_lower(const Vector& z) const {
    if (z.size() != dim()) throw DimensionMismatch("apply_lower: length mismatch");
    return lower_.triangularView<Eigen::Lower>() * z;
}

Matrix SpdFactor::inverse() const { return solve(Matrix(Matrix::Identity(dim(), dim()))); }

double SpdFactor::log_det() const { return 2.0 * lower_.diagonal().array().log().sum(); }

Vector solve_spd(const SpdFactor& f, const Vector& b) { return f.solve(b); }
Matrix solve_spd(const SpdFactor& f, const Matrix& b) { return f.solve(b); }

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw DimensionMismatch("unvec: length " + std::to_string(v.size()) + " != " +
                                std::to_string(rows) + "*" + std::to_string(cols));
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace ineqreg
