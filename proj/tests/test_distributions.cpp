#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ineqreg/distributions.hpp"

using namespace ineqreg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Two-sided Kolmogorov-Smirnov distance against an analytic CDF.
template <typename Cdf>
double ks_distance(std::vector<double> draws, Cdf cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = double(draws.size());
    double d = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        double f = cdf(draws[i]);
        d = std::max(d, std::fabs(double(i + 1) / n - f));
        d = std::max(d, std::fabs(double(i) / n - f));
    }
    return d;
}

double truncnorm_cdf(double x, double mu, double sigma, double lo, double hi) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    double a = (lo - mu) / sigma, b = (hi - mu) / sigma, z = (x - mu) / sigma;
    if (a >= 0.0) {
        // Complementary form keeps far-right tails well-posed in doubles.
        double qa = normal_cdf_complement(a);
        double qb = std::isfinite(b) ? normal_cdf_complement(b) : 0.0;
        return (qa - normal_cdf_complement(z)) / (qa - qb);
    }
    if (b <= 0.0) {
        double pa = std::isfinite(a) ? normal_cdf(a) : 0.0;
        return (normal_cdf(z) - pa) / (normal_cdf(b) - pa);
    }
    double pa = std::isfinite(a) ? normal_cdf(a) : 0.0;
    double pb = std::isfinite(b) ? normal_cdf(b) : 1.0;
    return (normal_cdf(z) - pa) / (pb - pa);
}

}  // namespace

TEST_CASE("identical seeds give identical draw sequences") {
    RngStream a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c(123), d(123);
    for (int i = 0; i < 100; ++i) {
        CHECK(c.normal() == d.normal());
        CHECK(c.gamma(2.5) == d.gamma(2.5));
    }
    RngStream e(123, 1);
    CHECK(RngStream(123).next_u64() != e.next_u64());
}

TEST_CASE("normal quantile inverts the normal CDF") {
    // The lower-tail route is well-posed for x <= 0, the complementary route
    // for x >= 0; these are the directions the samplers use.
    for (double x : {-8.0, -3.0, -0.5, 0.0})
        CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
    for (double x : {0.0, 0.7, 2.0, 6.0, 8.5, 20.0})
        CHECK(-normal_quantile(normal_cdf_complement(x)) == doctest::Approx(x).epsilon(1e-9));
}

TEST_CASE("inverse gamma draws are positive with the analytic mean") {
    RngStream rng(1);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = sample_inverse_gamma(3.0, 1.0, rng);
        REQUIRE(x > 0.0);
        sum += x;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));  // rate/(shape-1), within 0.01 abs
    CHECK(std::fabs(sum / n - 0.5) < 0.01);
}

TEST_CASE("inverse gamma rejects bad parameters") {
    RngStream rng(1);
    CHECK_THROWS_AS(sample_inverse_gamma(0.0, 1.0, rng), InvalidParameter);
    CHECK_THROWS_AS(sample_inverse_gamma(1.0, -2.0, rng), InvalidParameter);
}

TEST_CASE("mvn sample mean and covariance match at a million draws") {
    RngStream rng(2);
    Vector mu(2);
    mu << 1.5, -3.0;
    SpdFactor id = cholesky(Matrix::Identity(2, 2));
    const int n = 1000000;
    Vector sum = Vector::Zero(2);
    Matrix sum_sq = Matrix::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        Vector x = sample_mvn(mu, id, rng);
        sum += x;
        sum_sq += (x - mu) * (x - mu).transpose();
    }
    Vector mean = sum / n;
    for (Index j = 0; j < 2; ++j) CHECK(std::fabs(mean[j] - mu[j]) < 4.0 / 1000.0);
    Matrix cov = sum_sq / n;
    CHECK((cov - Matrix::Identity(2, 2)).norm() < 0.01);
}

TEST_CASE("mvn dimension mismatch") {
    RngStream rng(2);
    CHECK_THROWS_AS(sample_mvn(Vector::Zero(2), cholesky(Matrix::Identity(3, 3)), rng),
                    DimensionMismatch);
}

TEST_CASE("unbounded truncnorm is standard normal by KS distance") {
    RngStream rng(3);
    const int n = 1000000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_truncnorm(0.0, 1.0, -kInf, kInf, rng);
    CHECK(ks_distance(draws, [](double x) { return normal_cdf(x); }) < 0.002);
}

TEST_CASE("one-sided truncnorm KS against the analytic truncated CDF") {
    RngStream rng(4);
    const int n = 1000000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_truncnorm(0.0, 1.0, 0.0, kInf, rng);
    double mean = 0.0;
    for (double x : draws) mean += x;
    mean /= n;
    CHECK(std::fabs(mean - std::sqrt(2.0 / M_PI)) < 0.005);
    CHECK(ks_distance(draws, [](double x) { return truncnorm_cdf(x, 0, 1, 0, kInf); }) < 0.002);
}

TEST_CASE("far-tail truncnorm stays inside (8, 9) without overflow") {
    RngStream rng(5);
    for (int i = 0; i < 20000; ++i) {
        double x = sample_truncnorm(0.0, 1.0, 8.0, 9.0, rng);
        REQUIRE(std::isfinite(x));
        REQUIRE(x > 8.0);
        REQUIRE(x < 9.0);
    }
    // Tail draws still follow the right law.
    const int n = 200000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_truncnorm(0.0, 1.0, 8.0, 9.0, rng);
    CHECK(ks_distance(draws, [](double x) { return truncnorm_cdf(x, 0, 1, 8, 9); }) < 0.005);
}

TEST_CASE("left far-tail mirrors the right one") {
    RngStream rng(6);
    const int n = 200000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_truncnorm(1.0, 2.0, -kInf, -11.0, rng);
    for (double x : draws) REQUIRE(x < -11.0);
    CHECK(ks_distance(draws, [](double x) { return truncnorm_cdf(x, 1, 2, -kInf, -11); }) < 0.005);
}

TEST_CASE("truncnorm rejects an empty interval") {
    RngStream rng(7);
    CHECK_THROWS_AS(sample_truncnorm(0, 1, 2.0, 2.0, rng), EmptyInterval);
    CHECK_THROWS_AS(sample_truncnorm(0, 1, 3.0, -3.0, rng), EmptyInterval);
}

TEST_CASE("tmvn with infinite bounds reduces to the untruncated normal") {
    RngStream rng(8);
    Vector mu(2);
    mu << 0.5, -1.0;
    Matrix cov(2, 2);
    cov << 1.0, 0.6, 0.6, 2.0;
    BoxBounds bounds = BoxBounds::unbounded(2);
    const int n = 200000;
    Vector x = mu;
    Vector sum = Vector::Zero(2);
    Matrix sum_sq = Matrix::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        x = sample_tmvn_box(mu, cov, bounds, x, 5, rng);
        sum += x;
        sum_sq += (x - mu) * (x - mu).transpose();
    }
    CHECK((sum / n - mu).cwiseAbs().maxCoeff() < 0.02);
    CHECK((sum_sq / n - cov).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("tmvn moments match a rejection-sampling oracle on the positive quadrant") {
    Vector mu = Vector::Zero(2);
    Matrix cov(2, 2);
    cov << 1.0, 0.5, 0.5, 1.0;
    Vector lo = Vector::Zero(2);
    Vector hi = Vector::Constant(2, kInf);
    BoxBounds bounds(lo, hi);
    const int n = 1000000;

    // Oracle: exact draws by rejection from the untruncated normal.
    RngStream oracle_rng(9);
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

    RngStream rng(10);
    Vector x = Vector::Constant(2, 0.5);
    Vector g_sum = Vector::Zero(2);
    Matrix g_sq = Matrix::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        x = sample_tmvn_box(mu, cov, bounds, x, 5, rng);
        REQUIRE(x[0] > 0.0);
        REQUIRE(x[1] > 0.0);
        g_sum += x;
        g_sq += x * x.transpose();
    }

    CHECK((g_sum / n - o_sum / n).cwiseAbs().maxCoeff() < 0.01);
    CHECK((g_sq / n - o_sq / n).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("tmvn rejects an infeasible start") {
    RngStream rng(11);
    Vector mu = Vector::Zero(2);
    Matrix cov = Matrix::Identity(2, 2);
    BoxBounds bounds(Vector::Zero(2), Vector::Constant(2, kInf));
    CHECK_THROWS_AS(sample_tmvn_box(mu, cov, bounds, Vector::Constant(2, -1.0), 5, rng),
                    InfeasibleStart);
}

TEST_CASE("linear-box sampler with identity transform matches the box sampler") {
    Vector mu(2);
    mu << 0.2, -0.1;
    Matrix cov(2, 2);
    cov << 1.0, 0.3, 0.3, 1.0;
    BoxBounds bounds(Vector::Constant(2, -1.0), Vector::Constant(2, 2.0));
    Vector init = Vector::Zero(2);
    RngStream r1(12), r2(12);
    for (int i = 0; i < 50; ++i) {
        Vector a = sample_tmvn_box(mu, cov, bounds, init, 3, r1);
        Vector b = sample_mvn_under_linear_box(mu, cov, Matrix::Identity(2, 2), bounds, init, 3, r2);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
        init = a;
    }
}

TEST_CASE("linear-box sampler keeps A x inside the bounds") {
    Matrix A(2, 2);
    A << 1, 1, 0, 1;
    Vector mu(2);
    mu << 0.5, 0.5;
    Matrix cov(2, 2);
    cov << 1.0, 0.2, 0.2, 0.5;
    Vector lo(2), hi(2);
    lo << -kInf, -kInf;
    hi << 1.0, 0.8;
    BoxBounds bounds(lo, hi);
    Vector x(2);
    x << -0.5, 0.0;  // A x = (-0.5, 0) inside
    RngStream rng(13);
    for (int i = 0; i < 5000; ++i) {
        x = sample_mvn_under_linear_box(mu, cov, A, bounds, x, 2, rng);
        Vector ax = A * x;
        REQUIRE(ax[0] <= 1.0);
        REQUIRE(ax[1] <= 0.8);
    }
}

TEST_CASE("linear-box sampler moments match a rejection oracle") {
    Matrix A(2, 2);
    A << 1, 1, 0, 1;
    Vector mu(2);
    mu << 0.3, -0.2;
    Matrix cov(2, 2);
    cov << 1.0, 0.4, 0.4, 1.0;
    Vector lo(2), hi(2);
    lo << -2.0, -1.5;
    hi << 1.0, 1.0;
    BoxBounds bounds(lo, hi);
    const int n = 1000000;

    RngStream oracle_rng(14);
    SpdFactor f = cholesky(cov);
    Vector o_sum = Vector::Zero(2);
    for (int kept = 0; kept < n;) {
        Vector z = sample_mvn(mu, f, oracle_rng);
        Vector az = A * z;
        if (az[0] >= lo[0] && az[0] <= hi[0] && az[1] >= lo[1] && az[1] <= hi[1]) {
            o_sum += z;
            ++kept;
        }
    }

    RngStream rng(15);
    Vector x(2);
    x << 0.0, 0.0;
    Vector g_sum = Vector::Zero(2);
    for (int i = 0; i < n; ++i) {
        x = sample_mvn_under_linear_box(mu, cov, A, bounds, x, 5, rng);
        g_sum += x;
    }
    CHECK((g_sum / n - o_sum / n).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("linear-box sampler rejects a singular transform") {
    RngStream rng(16);
    Matrix A = Matrix::Zero(2, 2);
    BoxBounds bounds = BoxBounds::unbounded(2);
    CHECK_THROWS_AS(sample_mvn_under_linear_box(Vector::Zero(2), Matrix::Identity(2, 2), A,
                                                bounds, Vector::Zero(2), 1, rng),
                    SingularTransform);
}

TEST_CASE("inverse Wishart draws are SPD with the analytic mean") {
    RngStream rng(17);
    Matrix scale = Matrix::Identity(2, 2);
    const int n = 1000000;
    Matrix sum = Matrix::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        Matrix s = sample_inverse_wishart(10.0, scale, rng);
        if (i % 1000 == 0) CHECK_NOTHROW(cholesky(s));
        sum += s;
    }
    Matrix mean = sum / n;
    CHECK((mean - scale / 7.0).cwiseAbs().maxCoeff() < 0.01);  // scale/(df-k-1)
}

TEST_CASE("inverse Wishart rejects low degrees of freedom") {
    RngStream rng(18);
    CHECK_THROWS_AS(sample_inverse_wishart(1.0, Matrix::Identity(2, 2), rng),
                    InvalidDegreesOfFreedom);
}

TEST_CASE("matrix normal entries are iid standard under identity scales") {
    RngStream rng(19);
    Matrix M = Matrix::Constant(2, 3, 5.0);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        Matrix d = sample_matrix_normal(M, Matrix::Identity(3, 3), Matrix::Identity(2, 2), rng);
        sum += (d.array() - 5.0).sum();
        sum_sq += (d.array() - 5.0).square().sum();
    }
    CHECK(std::fabs(sum / (6.0 * n)) < 0.01);
    CHECK(std::fabs(sum_sq / (6.0 * n) - 1.0) < 0.01);
}

TEST_CASE("matrix normal vec covariance converges to the Kronecker product") {
    RngStream rng(20);
    Matrix Sigma(2, 2);
    Sigma << 1.0, 0.4, 0.4, 0.8;
    Matrix D(2, 2);
    D << 0.9, -0.2, -0.2, 0.6;
    Matrix M = Matrix::Zero(2, 2);
    const int n = 100000;
    Matrix sum = Matrix::Zero(4, 4);
    for (int i = 0; i < n; ++i) {
        Vector v = vec(sample_matrix_normal(M, Sigma, D, rng));
        sum += v * v.transpose();
    }
    CHECK((sum / n - kron(Sigma, D)).norm() < 0.02);
}

TEST_CASE("matrix normal agrees with the Kronecker mvn construction at one seed") {
    Matrix Sigma(2, 2);
    Sigma << 1.0, 0.4, 0.4, 0.8;
    Matrix D(3, 3);
    D << 1.0, 0.1, 0.0, 0.1, 0.7, 0.2, 0.0, 0.2, 0.5;
    Matrix M(3, 2);
    M << 1, 2, 3, 4, 5, 6;
    RngStream r1(21), r2(21);
    Matrix draw = sample_matrix_normal(M, Sigma, D, r1);
    Vector via_mvn = sample_mvn(vec(M), cholesky(kron(Sigma, D)), r2);
    CHECK((vec(draw) - via_mvn).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("box bounds reject equal endpoints") {
    Vector lo(1), hi(1);
    lo << 1.0;
    hi << 1.0;
    CHECK_THROWS_AS(BoxBounds(lo, hi), EmptyInterval);
}
