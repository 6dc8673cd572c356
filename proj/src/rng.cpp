#include "ineqreg/rng.hpp"

#include <cmath>
#include <limits>

#include "ineqreg/errors.hpp"

namespace ineqreg {

namespace {

constexpr std::uint64_t kPcgMultHi = 2549297995355413924ULL;
constexpr std::uint64_t kPcgMultLo = 4865540595714422341ULL;

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotr64(std::uint64_t v, unsigned rot) {
    return (v >> rot) | (v << ((-rot) & 63u));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed) {
    const u128 mult = (u128(kPcgMultHi) << 64) | kPcgMultLo;
    std::uint64_t s = seed;
    std::uint64_t t = stream ^ 0xda3e39cb94b95bdbULL;
    u128 init_state = (u128(splitmix64(s)) << 64) | splitmix64(s);
    u128 init_seq = (u128(splitmix64(t)) << 64) | splitmix64(t);
    inc_ = (init_seq << 1) | 1u;
    state_ = 0u;
    state_ = state_ * mult + inc_;
    state_ += init_state;
    state_ = state_ * mult + inc_;
}

std::uint64_t RngStream::next_u64() {
    const u128 mult = (u128(kPcgMultHi) << 64) | kPcgMultLo;
    state_ = state_ * mult + inc_;
    std::uint64_t xored = std::uint64_t(state_ >> 64) ^ std::uint64_t(state_);
    unsigned rot = unsigned(state_ >> 122);
    return rotr64(xored, rot);
}

double RngStream::uniform() {
    // 53-bit mantissa, offset by half an ulp so 0 and 1 are unreachable.
    return (double(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double RngStream::normal() { return normal_quantile(uniform()); }

double RngStream::gamma(double shape) {
    if (!(shape > 0.0)) throw InvalidParameter("gamma: shape must be > 0");
    if (shape < 1.0) {
        // Boost to shape+1 and scale back.
        double u = uniform();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double normal_cdf_complement(double x) { return 0.5 * std::erfc(x * 0.7071067811865475244); }

// Wichura (1988), algorithm AS 241, PPND16.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw InvalidParameter("normal_quantile: p outside [0,1]");
    }
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

}  // namespace ineqreg
