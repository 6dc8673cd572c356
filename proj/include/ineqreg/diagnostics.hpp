#pragma once

#include <string>
#include <vector>

#include "ineqreg/multivariate.hpp"
#include "ineqreg/univariate.hpp"

namespace ineqreg {

struct Summary {
    std::vector<std::string> names;
    Vector mean;
    Vector sd;
    Vector ess;   // clamped to the number of draws
    Vector acf1;  // lag-1 autocorrelation

    Index size() const { return mean.size(); }
};

/// Sample autocorrelation at lags 0..max_lag (lag 0 is exactly 1). A constant
/// series gets rho_k = 0 for k >= 1 rather than NaN.
Vector acf(const Vector& series, Index max_lag);

/// N / (1 + 2 sum rho_k) with Geyer initial-positive-sequence truncation.
/// Needs at least 100 points; a constant series is defined as ESS = N.
double ess(const Vector& series);

Summary summarize(const Matrix& draws, std::vector<std::string> names);
Summary summarize(const Chain& chain);
Summary summarize(const ChainMV& chain);

/// Chain CSV round-trips bit-for-bit (values printed with max precision).
struct LoadedChain {
    std::vector<std::string> names;  // column names after "iter"
    Matrix draws;
};

void write_chain_csv(const std::string& path, const Chain& chain);
void write_chain_csv(const std::string& path, const ChainMV& chain);
LoadedChain read_chain_csv(const std::string& path);

void write_summary_json(const std::string& path, const Summary& summary);
void write_acf_csv(const std::string& path, const Vector& rho);

}  // namespace ineqreg
