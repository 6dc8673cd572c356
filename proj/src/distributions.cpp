#include "ineqreg/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ineqreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailThreshold = 5.0;

// Robert-style exponential rejection for z ~ N(0,1) | a <= z <= b with a > 0.
double truncnorm_tail(double a, double b, RngStream& rng) {
    const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    if (std::isfinite(b) && (b - a) * lambda < 0.5) {
        // Thin slice: uniform proposal, density decreasing on [a, b].
        for (;;) {
            double z = a + (b - a) * rng.uniform();
            if (std::log(rng.uniform()) <= 0.5 * (a * a - z * z)) return z;
        }
    }
    for (;;) {
        double z = a - std::log(rng.uniform()) / lambda;
        if (z > b) continue;
        double diff = z - lambda;
        if (std::log(rng.uniform()) <= -0.5 * diff * diff) return z;
    }
}

// Standardized truncated normal on [a, b] via CDF inversion, evaluated in
// whichever half keeps the CDF values away from 1.
double truncnorm_inverse_cdf(double a, double b, RngStream& rng) {
    const double u = rng.uniform();
    if (a >= 0.0) {
        double qa = normal_cdf_complement(a);
        double qb = std::isfinite(b) ? normal_cdf_complement(b) : 0.0;
        double q = qa * (1.0 - u) + qb * u;
        return -normal_quantile(q);
    }
    if (b <= 0.0) {
        double pa = std::isfinite(a) ? normal_cdf(a) : 0.0;
        double pb = normal_cdf(b);
        double p = pa * (1.0 - u) + pb * u;
        return normal_quantile(p);
    }
    double pa = std::isfinite(a) ? normal_cdf(a) : 0.0;
    double pb = std::isfinite(b) ? normal_cdf(b) : 1.0;
    return normal_quantile(pa + u * (pb - pa));
}

}  // namespace

BoxBounds::BoxBounds(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
        throw DimensionMismatch("BoxBounds: lower/upper length mismatch");
    for (Index i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw EmptyInterval("BoxBounds: lower[" + std::to_string(i) +
                                "] >= upper[" + std::to_string(i) + "]");
}

BoxBounds BoxBounds::unbounded(Index n) {
    return BoxBounds(Vector::Constant(n, -kInf), Vector::Constant(n, kInf));
}

bool BoxBounds::contains(const Vector& x, double slack) const {
    if (x.size() != size()) throw DimensionMismatch("BoxBounds::contains: length mismatch");
    for (Index i = 0; i < size(); ++i)
        if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
    return true;
}

double sample_inverse_gamma(double shape, double rate, RngStream& rng) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw InvalidParameter("sample_inverse_gamma: shape and rate must be > 0");
    return rate / rng.gamma(shape);
}

Vector sample_mvn(const Vector& mean, const SpdFactor& cov_factor, RngStream& rng) {
    if (mean.size() != cov_factor.dim())
        throw DimensionMismatch("sample_mvn: mean length " + std::to_string(mean.size()) +
                                " != factor dimension " + std::to_string(cov_factor.dim()));
    Vector z(mean.size());
    for (Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return mean + cov_factor.apply_lower(z);
}

double sample_truncnorm(double mu, double sigma, double lo, double hi, RngStream& rng) {
    if (!(sigma > 0.0)) throw InvalidParameter("sample_truncnorm: sigma must be > 0");
    if (!(lo < hi)) throw EmptyInterval("sample_truncnorm: lo >= hi");

    double a = (lo - mu) / sigma;
    double b = (hi - mu) / sigma;

    double z;
    if (a >= kTailThreshold) {
        z = truncnorm_tail(a, b, rng);
    } else if (b <= -kTailThreshold) {
        z = -truncnorm_tail(-b, -a, rng);
    } else {
        z = truncnorm_inverse_cdf(a, b, rng);
    }

    double x = mu + sigma * z;
    // Rounding of mu + sigma*z may land exactly on a finite bound; nudge back in.
    if (x <= lo) x = std::nextafter(lo, kInf);
    if (x >= hi) x = std::nextafter(hi, -kInf);
    return x;
}

namespace detail {

void tmvn_gibbs_sweep(const Matrix& precision, double inv_scale, const Vector& mean,
                      const BoxBounds& bounds, Vector& x, Vector& centered, RngStream& rng) {
    const Index n = x.size();
    centered = x - mean;
    for (Index i = 0; i < n; ++i) {
        const double pii = precision(i, i);
        // Conditional mean shift does not depend on the overall scale.
        const double shift = (precision.col(i).dot(centered) - pii * centered[i]) / pii;
        const double cmean = mean[i] - shift;
        const double csd = std::sqrt(1.0 / (inv_scale * pii));
        x[i] = sample_truncnorm(cmean, csd, bounds.lower[i], bounds.upper[i], rng);
        centered[i] = x[i] - mean[i];
    }
}

}  // namespace detail

Vector sample_tmvn_box(const Vector& mean, const Matrix& cov, const BoxBounds& bounds,
                       const Vector& init, int sweeps, RngStream& rng) {
    if (mean.size() != cov.rows() || mean.size() != bounds.size() || mean.size() != init.size())
        throw DimensionMismatch("sample_tmvn_box: inconsistent dimensions");
    if (sweeps < 1) throw InvalidParameter("sample_tmvn_box: sweeps must be >= 1");
    if (!bounds.contains(init))
        throw InfeasibleStart("sample_tmvn_box: init violates bounds");
    Matrix precision = cholesky(cov).inverse();
    Vector x = init;
    Vector ws(x.size());
    for (int s = 0; s < sweeps; ++s)
        detail::tmvn_gibbs_sweep(precision, 1.0, mean, bounds, x, ws, rng);
    return x;
}

Vector sample_mvn_under_linear_box(const Vector& mean, const Matrix& cov, const Matrix& A,
                                   const BoxBounds& bounds, const Vector& init, int sweeps,
                                   RngStream& rng) {
    const Index n = mean.size();
    if (A.rows() != n || A.cols() != n || cov.rows() != n || bounds.size() != n ||
        init.size() != n)
        throw DimensionMismatch("sample_mvn_under_linear_box: inconsistent dimensions");
    Eigen::FullPivLU<Matrix> lu(A);
    if (!lu.isInvertible())
        throw SingularTransform("sample_mvn_under_linear_box: A is singular");

    Vector theta_mean = A * mean;
    Matrix theta_cov = symmetrized(A * cov * A.transpose());
    Vector theta = A * init;
    if (!bounds.contains(theta))
        throw InfeasibleStart("sample_mvn_under_linear_box: A*init violates bounds");
    if (sweeps < 1) throw InvalidParameter("sample_mvn_under_linear_box: sweeps must be >= 1");

    Matrix precision = cholesky(theta_cov).inverse();
    Vector ws(theta.size());
    for (int s = 0; s < sweeps; ++s)
        detail::tmvn_gibbs_sweep(precision, 1.0, theta_mean, bounds, theta, ws, rng);
    return lu.solve(theta);
}

Matrix sample_inverse_wishart(double df, const Matrix& scale, RngStream& rng) {
    const Index k = scale.rows();
    if (!(df > double(k) - 1.0))
        throw InvalidDegreesOfFreedom("sample_inverse_wishart: need df > dim - 1");
    SpdFactor scale_chol = cholesky(scale);
    Matrix scale_inv = scale_chol.inverse();
    Matrix m = cholesky(symmetrized(scale_inv)).lower();

    // Bartlett: W = (M A)(M A)' ~ Wishart(df, scale^-1); draw column-major.
    Matrix a = Matrix::Zero(k, k);
    for (Index j = 0; j < k; ++j) {
        a(j, j) = std::sqrt(rng.chi_square(df - double(j)));
        for (Index i = j + 1; i < k; ++i) a(i, j) = rng.normal();
    }
    Matrix t = m * a;  // lower-triangular
    Matrix tinv = t.triangularView<Eigen::Lower>().solve(Matrix::Identity(k, k));
    return symmetrized(tinv.transpose() * tinv);
}

Matrix sample_matrix_normal(const Matrix& M, const Matrix& Sigma, const Matrix& D,
                            RngStream& rng) {
    if (Sigma.rows() != M.cols() || D.rows() != M.rows())
        throw DimensionMismatch("sample_matrix_normal: Sigma/D do not conform to M");
    Matrix l_sigma = cholesky(Sigma).lower();
    Matrix l_d = cholesky(D).lower();
    Matrix z(M.rows(), M.cols());
    for (Index j = 0; j < z.cols(); ++j)
        for (Index i = 0; i < z.rows(); ++i) z(i, j) = rng.normal();
    return M + l_d * z * l_sigma.transpose();
}

}  // namespace ineqreg
