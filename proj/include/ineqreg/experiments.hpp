#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ineqreg/multivariate.hpp"
#include "ineqreg/univariate.hpp"

namespace ineqreg {

struct MethodResult {
    std::string method;  // partitioned | geweke | unrestricted
    Matrix estimates;    // replications x parameters
    Vector est_mean;
    Vector est_se;       // sd of the estimates across replications
    Vector post_sd;      // posterior sds (single-dataset studies)
    double mse_beta = std::numeric_limits<double>::quiet_NaN();
    double mse_sigma = std::numeric_limits<double>::quiet_NaN();
    double seconds_per_iteration = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentReport {
    std::string study;
    std::string scale;
    std::vector<std::string> names;
    Vector truth;  // empty for real-data studies
    std::vector<MethodResult> methods;
    double relative_eff = std::numeric_limits<double>::quiet_NaN();
    std::size_t replications = 0;
    std::size_t iterations = 0;
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;

    const MethodResult& method(const std::string& name) const;
};

struct StudyConfig {
    std::string scale = "desk";  // desk | paper
    std::uint64_t seed = 1;
    int jobs = 1;
    /// Experiments default to a single inner sweep: one coordinate scan per
    /// outer iteration is a valid Gibbs composition and reproduces the cost
    /// ordering against the baseline.
    int inner_sweeps = 1;
    bool fixed_design = false;  // reuse one simulated design across replications
    std::string data_dir = "data";
    std::optional<std::size_t> replications;
    std::optional<std::size_t> iterations;
};

/// (1/m) sum over replications and parameters of squared estimation error.
double mse(const Matrix& estimates, const Vector& truth);

/// MSE(unrestricted) / MSE(restricted); > 1 means the restrictions helped.
double relative_efficiency(double mse_unrestricted, double mse_restricted);

ExperimentReport run_example1(int restriction, const StudyConfig& config);
std::vector<std::pair<double, double>> run_delta_sweep(const Vector& deltas,
                                                       const StudyConfig& config);
ExperimentReport run_example2(const StudyConfig& config);
ExperimentReport run_rent_analysis(const StudyConfig& config);
ExperimentReport run_chemical_analysis(const StudyConfig& config);

void write_report_json(const std::string& path, const ExperimentReport& report);
void write_report_csv(const std::string& path, const ExperimentReport& report);
void write_delta_sweep_csv(const std::string& path,
                           const std::vector<std::pair<double, double>>& sweep);

// Study building blocks, exposed for tests.
RestrictionSystem example1_system(int restriction, double delta = 0.0);
std::vector<Index> example1_preferred_S(int restriction);
RestrictionSystem example1_geweke_system();
Vector example1_beta_true();
RestrictionSystem example2_system();
Matrix example2_B_true();
Matrix example2_Sigma_true();
RestrictionSystem rent_system();
RestrictionSystem rent_geweke_system();
Vector rent_prior_mean();  // published ML fit used as the prior mean
RestrictionSystem chemical_system();

}  // namespace ineqreg
