#pragma once

#include <cstdint>

namespace ineqreg {

/// Seedable deterministic generator (PCG64 XSL-RR). Same seed, same call
/// sequence, same platform => bit-identical draws. Replication workers get
/// independent streams by constructing RngStream(seed + replication_index);
/// never share one stream across threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1); never returns an endpoint.
    double uniform();

    /// Standard normal via inverse-CDF (one uniform per draw).
    double normal();

    /// Gamma(shape, scale 1), Marsaglia-Tsang.
    double gamma(double shape);

    double chi_square(double df) { return 2.0 * gamma(0.5 * df); }

    std::uint64_t seed() const { return seed_; }

private:
    using u128 = unsigned __int128;
    u128 state_;
    u128 inc_;
    std::uint64_t seed_;
};

/// Standard normal CDF, complement, and quantile. The quantile is Wichura's
/// AS 241 double-precision rational approximation; the CDF pair is expressed
/// through erfc so the complementary form stays accurate deep in the tail.
double normal_cdf(double x);
double normal_cdf_complement(double x);
double normal_quantile(double p);

}  // namespace ineqreg
