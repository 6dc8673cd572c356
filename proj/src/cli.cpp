#include "ineqreg/cli.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ineqreg/datasets.hpp"
#include "ineqreg/diagnostics.hpp"
#include "ineqreg/experiments.hpp"
#include "ineqreg/version.hpp"

namespace ineqreg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv64_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Matrix json_to_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError("config field '" + field + "': expected rows");
    if (j[0].is_array()) {
        Matrix m(Index(j.size()), Index(j[0].size()));
        for (Index i = 0; i < m.rows(); ++i) {
            if (Index(j[size_t(i)].size()) != m.cols())
                throw ConfigError("config field '" + field + "': ragged matrix");
            for (Index c = 0; c < m.cols(); ++c) m(i, c) = j[size_t(i)][size_t(c)].get<double>();
        }
        return m;
    }
    Matrix m(Index(j.size()), 1);
    for (Index i = 0; i < m.rows(); ++i) m(i, 0) = j[size_t(i)].get<double>();
    return m;
}

struct ResolvedData {
    Matrix X;
    Matrix Y;
    std::vector<std::string> input_paths;
};

ResolvedData resolve_data(const json& cfg, bool multivariate) {
    if (!cfg.contains("data")) throw ConfigError("config: missing field 'data'");
    const json& d = cfg["data"];
    ResolvedData out;

    if (d.is_object() && d.contains("path")) {
        std::string path = d["path"].get<std::string>();
        if (!fs::exists(path)) throw ConfigError("config field 'data.path': file not found: " + path);
        out.input_paths.push_back(path);
        std::string format = d.value("format", "csv");
        if (format == "rent") {
            Dataset ds = load_dataset(path, DatasetFormat::rent);
            out.X = ds.X;
            out.Y = ds.Y;
        } else if (format == "chemical") {
            Dataset ds = load_dataset(path, DatasetFormat::chemical);
            out.X = ds.X;
            out.Y = ds.Y;
        } else if (format == "csv") {
            Matrix raw = load_csv(path);
            Index ky = multivariate ? Index(d.value("responses", 1)) : 1;
            if (ky < 1 || ky >= raw.cols())
                throw ConfigError("config field 'data.responses': must be in [1, columns)");
            out.Y = raw.leftCols(ky);
            Matrix rest = raw.rightCols(raw.cols() - ky);
            if (d.value("add_intercept", true)) {
                out.X.resize(raw.rows(), rest.cols() + 1);
                out.X.col(0).setOnes();
                out.X.rightCols(rest.cols()) = rest;
            } else {
                out.X = rest;
            }
        } else {
            throw ConfigError("config field 'data.format': unknown format '" + format + "'");
        }
        return out;
    }
    if (d.is_object() && d.contains("X") && d.contains("Y")) {
        out.X = json_to_matrix(d["X"], "data.X");
        out.Y = json_to_matrix(d["Y"], "data.Y");
        return out;
    }
    throw ConfigError("config field 'data': expected {path, format} or inline {X, Y}");
}

RestrictionSystem resolve_restrictions(const json& cfg,
                                       std::optional<std::vector<Index>>& preferred,
                                       std::vector<std::string>& input_paths) {
    if (!cfg.contains("restrictions")) throw ConfigError("config: missing field 'restrictions'");
    const json& r = cfg["restrictions"];
    std::string text;
    if (r.is_object() && r.contains("path")) {
        std::string path = r["path"].get<std::string>();
        if (!fs::exists(path))
            throw ConfigError("config field 'restrictions.path': file not found: " + path);
        input_paths.push_back(path);
        text = read_file(path);
    } else {
        text = r.dump();
    }
    RestrictionSystem sys = parse_restriction_system(text, &preferred);
    validate(sys);
    return sys;
}

PriorSpec resolve_prior_uni(const json& cfg, const Matrix& X, const Vector& Y,
                            const Partition& partition) {
    if (!cfg.contains("prior")) throw ConfigError("config: missing field 'prior'");
    const json& p = cfg["prior"];
    double a = p.value("a", 1.0);
    double b = p.value("b", 1.0);

    PriorSpec prior = prior_from_ols(X, Y, partition, a, b);
    if (p.contains("mu") && p["mu"].is_array()) {
        Vector mu = json_to_matrix(p["mu"], "prior.mu").col(0);
        if (mu.size() != partition.p())
            throw ConfigError("config field 'prior.mu': expected p entries");
        for (Index i = 0; i < partition.q(); ++i) prior.mu_S[i] = mu[partition.S[size_t(i)]];
        for (Index i = 0; i < partition.p() - partition.q(); ++i)
            prior.mu_Sprime[i] = mu[partition.Sprime[size_t(i)]];
    } else if (p.contains("mu") && p["mu"] != "ols") {
        throw ConfigError("config field 'prior.mu': expected \"ols\" or an array");
    }
    if (p.contains("C")) {
        if (p["C"].is_object() && p["C"].contains("identity")) {
            double tau = p["C"]["identity"].get<double>();
            if (!(tau > 0)) throw ConfigError("config field 'prior.C.identity': must be > 0");
            prior.C_S = tau * Matrix::Identity(partition.q(), partition.q());
            prior.C_Sprime = tau * Matrix::Identity(partition.p() - partition.q(),
                                                    partition.p() - partition.q());
        } else if (p["C"] != "gram_inverse") {
            throw ConfigError("config field 'prior.C': expected \"gram_inverse\" or {identity: tau}");
        }
    }
    return prior;
}

PriorSpecMV resolve_prior_mv(const json& cfg, const Matrix& X, const Matrix& Y,
                             const Partition& partition) {
    if (!cfg.contains("prior")) throw ConfigError("config: missing field 'prior'");
    const json& p = cfg["prior"];
    double r = p.value("r", double(Y.cols()));
    std::optional<double> q_divisor;
    if (p.contains("q_divisor")) q_divisor = p["q_divisor"].get<double>();
    PriorSpecMV prior = prior_from_ols_mv(X, Y, partition, r, q_divisor);
    if (p.contains("Q")) prior.Q = json_to_matrix(p["Q"], "prior.Q");
    if (p.contains("M") && p["M"].is_array()) {
        Matrix m = json_to_matrix(p["M"], "prior.M");
        if (m.rows() != partition.p() || m.cols() != Y.cols())
            throw ConfigError("config field 'prior.M': expected p x k");
        for (Index i = 0; i < partition.q(); ++i)
            prior.M_S.row(i) = m.row(partition.S[size_t(i)]);
        for (Index i = 0; i < partition.p() - partition.q(); ++i)
            prior.M_Sprime.row(i) = m.row(partition.Sprime[size_t(i)]);
    }
    return prior;
}

struct CommonFlags {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> iters;
    std::optional<std::size_t> burn_in;
    std::optional<int> inner_sweeps;
    std::string from_manifest;
};

json load_config_or_manifest(const std::string& config_path, const CommonFlags& flags,
                             const char* command) {
    json cfg;
    if (!flags.from_manifest.empty()) {
        json manifest = json::parse(read_file(flags.from_manifest));
        if (manifest.value("command", "") != command)
            throw ConfigError("manifest was produced by a different command");
        cfg = manifest["config"];
    } else {
        if (config_path.empty()) throw ConfigError("missing config file argument");
        if (!fs::exists(config_path)) throw ConfigError("config file 'config': not found: " + config_path);
        try {
            cfg = json::parse(read_file(config_path));
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
    }
    return cfg;
}

void apply_overrides(json& cfg, const CommonFlags& flags) {
    if (flags.seed) cfg["seed"] = *flags.seed;
    if (flags.iters) cfg["iters"] = *flags.iters;
    if (flags.burn_in) cfg["burn_in"] = *flags.burn_in;
    if (flags.inner_sweeps) cfg["inner_sweeps"] = *flags.inner_sweeps;
}

void write_manifest(const std::string& path, const char* command, const json& resolved_config,
                    std::uint64_t seed, const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& outputs, const json& timings) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["seed"] = seed;
    manifest["config"] = resolved_config;
    json inputs = json::object();
    for (const auto& p : input_paths) inputs[p] = fnv64_digest(read_file(p));
    manifest["inputs"] = std::move(inputs);
    manifest["outputs"] = outputs;
    manifest["timings"] = timings;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << manifest.dump(2) << "\n";
}

int map_exception_to_exit(const std::exception& e, const char* command) {
    std::cerr << command << ": " << e.what() << "\n";
    if (dynamic_cast<const EmptyInterval*>(&e)) {
        std::cerr << command << ": empty restriction interval\n";
        return 3;
    }
    if (dynamic_cast<const InfeasibleStart*>(&e) || dynamic_cast<const RankDeficient*>(&e) ||
        dynamic_cast<const NotPositiveDefinite*>(&e) || dynamic_cast<const NonPositiveEta*>(&e) ||
        dynamic_cast<const PreferredSingular*>(&e) || dynamic_cast<const Singular*>(&e) ||
        dynamic_cast<const NotSquare*>(&e) || dynamic_cast<const InvalidDegreesOfFreedom*>(&e) ||
        dynamic_cast<const SingularTransform*>(&e))
        return 3;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
        dynamic_cast<const MissingValue*>(&e) || dynamic_cast<const ShapeMismatch*>(&e) ||
        dynamic_cast<const InsufficientData*>(&e) || dynamic_cast<const CLI::ParseError*>(&e))
        return 2;
    return 1;
}

int cmd_fit_uni(const std::string& config_path, const CommonFlags& flags) {
    json cfg = load_config_or_manifest(config_path, flags, "fit-uni");
    apply_overrides(cfg, flags);

    ResolvedData data = resolve_data(cfg, false);
    if (data.Y.cols() != 1) throw ConfigError("fit-uni: response must be a single column");
    std::optional<std::vector<Index>> preferred;
    RestrictionSystem sys = resolve_restrictions(cfg, preferred, data.input_paths);
    if (sys.p() != data.X.cols())
        throw ConfigError("config: restriction columns do not match design columns");
    Partition partition = select_partition(sys, preferred);
    Vector y = data.Y.col(0);
    PriorSpec prior = resolve_prior_uni(cfg, data.X, y, partition);

    ChainOptions opt;
    opt.iters = cfg.value("iters", std::size_t(10000));
    if (cfg.contains("burn_in")) opt.burn_in = cfg["burn_in"].get<std::size_t>();
    opt.seed = cfg.value("seed", std::uint64_t(0));
    opt.inner_sweeps = cfg.value("inner_sweeps", 5);

    Chain chain = run_chain(data.X, y, sys, partition, prior, opt);
    Summary summary = summarize(chain);

    fs::create_directories(flags.out_dir);
    std::string chain_path = flags.out_dir + "/chain.csv";
    std::string summary_path = flags.out_dir + "/summary.json";
    write_chain_csv(chain_path, chain);
    write_summary_json(summary_path, summary);
    write_manifest(flags.out_dir + "/manifest.json", "fit-uni", cfg, opt.seed, data.input_paths,
                   {chain_path, summary_path},
                   json{{"sampling_seconds", chain.sampling_seconds}});
    return 0;
}

int cmd_fit_multi(const std::string& config_path, const CommonFlags& flags) {
    json cfg = load_config_or_manifest(config_path, flags, "fit-multi");
    apply_overrides(cfg, flags);

    ResolvedData data = resolve_data(cfg, true);
    std::optional<std::vector<Index>> preferred;
    RestrictionSystem sys = resolve_restrictions(cfg, preferred, data.input_paths);
    if (sys.p() != data.X.cols())
        throw ConfigError("config: restriction columns do not match design columns");
    if (sys.k() != data.Y.cols())
        throw ConfigError("config: restriction bound columns do not match response count");
    Partition partition = select_partition(sys, preferred);
    PriorSpecMV prior = resolve_prior_mv(cfg, data.X, data.Y, partition);

    ChainOptionsMV opt;
    opt.iters = cfg.value("iters", std::size_t(10000));
    if (cfg.contains("burn_in")) opt.burn_in = cfg["burn_in"].get<std::size_t>();
    opt.seed = cfg.value("seed", std::uint64_t(0));
    opt.inner_sweeps = cfg.value("inner_sweeps", 5);

    ChainMV chain = run_chain_mv(data.X, data.Y, sys, partition, prior, opt);
    Summary summary = summarize(chain);

    fs::create_directories(flags.out_dir);
    std::string chain_path = flags.out_dir + "/chain.csv";
    std::string summary_path = flags.out_dir + "/summary.json";
    write_chain_csv(chain_path, chain);
    write_summary_json(summary_path, summary);
    write_manifest(flags.out_dir + "/manifest.json", "fit-multi", cfg, opt.seed, data.input_paths,
                   {chain_path, summary_path},
                   json{{"sampling_seconds", chain.sampling_seconds}});
    return 0;
}

int cmd_replicate(const std::string& study, const std::string& scale, std::uint64_t seed,
                  int jobs, int inner_sweeps, const CommonFlags& flags,
                  const std::string& data_dir) {
    StudyConfig config;
    config.scale = scale;
    config.seed = seed;
    config.jobs = jobs;
    config.inner_sweeps = inner_sweeps;
    config.data_dir = data_dir;
    config.replications = std::nullopt;
    config.iterations = flags.iters;

    fs::create_directories(flags.out_dir);
    json resolved{{"study", study},     {"scale", scale},
                  {"seed", seed},       {"jobs", jobs},
                  {"inner_sweeps", inner_sweeps}, {"data_dir", data_dir}};
    std::vector<std::string> outputs;
    json timings = json::object();
    const auto t0 = std::chrono::steady_clock::now();

    if (study == "delta-sweep") {
        Vector deltas(11);
        for (Index j = 0; j < 11; ++j) deltas[j] = -1.0 + 0.2 * double(j);
        auto sweep = run_delta_sweep(deltas, config);
        std::string sweep_path = flags.out_dir + "/delta_sweep.csv";
        write_delta_sweep_csv(sweep_path, sweep);
        outputs.push_back(sweep_path);
    } else {
        ExperimentReport report;
        if (study == "example1-r1") report = run_example1(1, config);
        else if (study == "example1-r2") report = run_example1(2, config);
        else if (study == "example2") report = run_example2(config);
        else if (study == "rent") report = run_rent_analysis(config);
        else if (study == "chemical") report = run_chemical_analysis(config);
        else throw ConfigError("unknown study '" + study + "'");
        std::string json_path = flags.out_dir + "/report.json";
        std::string csv_path = flags.out_dir + "/report.csv";
        write_report_json(json_path, report);
        write_report_csv(csv_path, report);
        outputs.push_back(json_path);
        outputs.push_back(csv_path);
    }
    timings["total_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(flags.out_dir + "/manifest.json", "replicate", resolved, seed, {}, outputs,
                   timings);
    return 0;
}

int cmd_diagnose(const std::string& chain_path, Index max_lag, const CommonFlags& flags) {
    LoadedChain chain = read_chain_csv(chain_path);
    if (max_lag >= chain.draws.rows())
        throw ConfigError("diagnose: max_lag must be below the chain length (" +
                          std::to_string(chain.draws.rows()) + ")");
    Summary summary = summarize(chain.draws, chain.names);
    fs::create_directories(flags.out_dir);
    write_summary_json(flags.out_dir + "/summary.json", summary);
    for (Index j = 0; j < chain.draws.cols(); ++j) {
        Vector rho = acf(chain.draws.col(j), max_lag);
        write_acf_csv(flags.out_dir + "/" + chain.names[size_t(j)] + "_acf.csv", rho);
    }
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Bayesian linear regression under linear inequality restrictions"};
    app.set_version_flag("--version", std::string("ineqreg ") + kVersion);
    app.require_subcommand(1);

    CommonFlags flags;

    auto* fit_uni = app.add_subcommand("fit-uni", "Fit a univariate restricted model");
    std::string fit_uni_config;
    fit_uni->add_option("config", fit_uni_config, "JSON config");
    fit_uni->add_option("--out-dir", flags.out_dir, "Output directory");
    fit_uni->add_option("--from-manifest", flags.from_manifest, "Re-run from a manifest");

    auto* fit_multi = app.add_subcommand("fit-multi", "Fit a multivariate restricted model");
    std::string fit_multi_config;
    fit_multi->add_option("config", fit_multi_config, "JSON config");
    fit_multi->add_option("--out-dir", flags.out_dir, "Output directory");
    fit_multi->add_option("--from-manifest", flags.from_manifest, "Re-run from a manifest");

    std::uint64_t seed_flag = 1;
    std::size_t iters_flag = 0, burn_flag = std::size_t(-1);
    int sweeps_flag = 0;
    for (auto* cmd : {fit_uni, fit_multi}) {
        cmd->add_option("--seed", seed_flag, "Override config seed")
            ->each([&](const std::string&) { flags.seed = seed_flag; });
        cmd->add_option("--iters", iters_flag, "Override iteration count")
            ->each([&](const std::string&) { flags.iters = iters_flag; });
        cmd->add_option("--burn-in", burn_flag, "Override burn-in")
            ->each([&](const std::string&) { flags.burn_in = burn_flag; });
        cmd->add_option("--inner-sweeps", sweeps_flag, "Override inner Gibbs sweeps")
            ->each([&](const std::string&) { flags.inner_sweeps = sweeps_flag; });
    }

    auto* replicate = app.add_subcommand("replicate", "Reproduce a bundled study");
    std::string study, scale = "desk", data_dir = "data";
    std::uint64_t rep_seed = 1;
    int jobs = 1, rep_sweeps = 1;
    replicate->add_option("study", study,
                          "example1-r1|example1-r2|delta-sweep|example2|rent|chemical")
        ->required();
    replicate->add_option("--scale", scale, "desk or paper");
    replicate->add_option("--seed", rep_seed, "Master seed");
    replicate->add_option("--jobs", jobs, "Parallel replication workers");
    replicate->add_option("--inner-sweeps", rep_sweeps, "Inner Gibbs sweeps");
    replicate->add_option("--iters", iters_flag, "Override iteration count")
        ->each([&](const std::string&) { flags.iters = iters_flag; });
    replicate->add_option("--out-dir", flags.out_dir, "Output directory");
    replicate->add_option("--data-dir", data_dir, "Directory holding the bundled datasets");

    auto* diagnose = app.add_subcommand("diagnose", "Summaries and ACF exports for a chain CSV");
    std::string chain_path;
    Index max_lag = 50;
    diagnose->add_option("chain", chain_path, "Chain CSV")->required();
    diagnose->add_option("--max-lag", max_lag, "Highest autocorrelation lag");
    diagnose->add_option("--out-dir", flags.out_dir, "Output directory");

    const char* active = "ineqreg";
    try {
        app.parse(argc, argv);
        if (fit_uni->parsed()) {
            active = "fit-uni";
            return cmd_fit_uni(fit_uni_config, flags);
        }
        if (fit_multi->parsed()) {
            active = "fit-multi";
            return cmd_fit_multi(fit_multi_config, flags);
        }
        if (replicate->parsed()) {
            active = "replicate";
            return cmd_replicate(study, scale, rep_seed, jobs, rep_sweeps, flags, data_dir);
        }
        if (diagnose->parsed()) {
            active = "diagnose";
            return cmd_diagnose(chain_path, max_lag, flags);
        }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        return map_exception_to_exit(e, active);
    }
}

}  // namespace ineqreg
