#include "ineqreg/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ineqreg {

namespace {

constexpr double kVarFloor = 1e-300;

std::string fmt_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Vector acf(const Vector& series, Index max_lag) {
    const Index n = series.size();
    if (n < 2) throw InsufficientData("acf: need at least 2 points");
    if (max_lag >= n) throw InsufficientData("acf: max_lag must be < length");
    const double mean = series.mean();
    Vector centered = series.array() - mean;
    const double denom = centered.squaredNorm();
    Vector rho = Vector::Zero(max_lag + 1);
    rho[0] = 1.0;
    if (denom < kVarFloor) return rho;  // constant series convention
    for (Index k = 1; k <= max_lag; ++k)
        rho[k] = centered.head(n - k).dot(centered.tail(n - k)) / denom;
    return rho;
}

double ess(const Vector& series) {
    const Index n = series.size();
    if (n < 100) throw InsufficientData("ess: need at least 100 points");
    const double mean = series.mean();
    Vector centered = series.array() - mean;
    const double denom = centered.squaredNorm();
    if (denom < kVarFloor) return double(n);

    auto rho_at = [&](Index k) {
        return centered.head(n - k).dot(centered.tail(n - k)) / denom;
    };

    // Geyer: add lag pairs while their sum stays positive.
    double tau = 1.0;
    const Index max_lag = n - 2;
    for (Index k = 1; k + 1 <= max_lag; k += 2) {
        double pair = rho_at(k) + rho_at(k + 1);
        if (pair <= 0.0) break;
        tau += 2.0 * pair;
    }
    return double(n) / tau;
}

Summary summarize(const Matrix& draws, std::vector<std::string> names) {
    const Index n = draws.rows();
    const Index d = draws.cols();
    if (n < 1) throw EmptyChain("summarize: no post-burn-in draws");
    if (Index(names.size()) != d) throw ShapeMismatch("summarize: name count mismatch");

    Summary s;
    s.names = std::move(names);
    s.mean.resize(d);
    s.sd.resize(d);
    s.ess.resize(d);
    s.acf1.resize(d);
    for (Index j = 0; j < d; ++j) {
        Vector col = draws.col(j);
        double m = col.mean();
        s.mean[j] = m;
        s.sd[j] = n > 1 ? std::sqrt((col.array() - m).square().sum() / double(n - 1)) : 0.0;
        if (n >= 100) {
            s.ess[j] = std::min(ess(col), double(n));
        } else {
            s.ess[j] = double(n);
        }
        s.acf1[j] = n > 2 ? acf(col, 1)[1] : 0.0;
    }
    return s;
}

Summary summarize(const Chain& chain) {
    return summarize(chain.draws(), chain.parameter_names());
}

Summary summarize(const ChainMV& chain) {
    return summarize(chain.draws(), chain.parameter_names());
}

namespace {

void write_csv(const std::string& path, const std::vector<std::string>& names,
               const Matrix& rows) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "iter";
    for (const auto& n : names) out << "," << n;
    out << "\n";
    for (Index i = 0; i < rows.rows(); ++i) {
        out << (i + 1);
        for (Index j = 0; j < rows.cols(); ++j) out << "," << fmt_full(rows(i, j));
        out << "\n";
    }
}

}  // namespace

void write_chain_csv(const std::string& path, const Chain& chain) {
    Matrix rows(chain.sigma2.size(), 1 + chain.beta.cols());
    rows.col(0) = chain.sigma2;
    rows.rightCols(chain.beta.cols()) = chain.beta;
    write_csv(path, chain.parameter_names(), rows);
}

void write_chain_csv(const std::string& path, const ChainMV& chain) {
    Matrix rows(chain.sigma.rows(), chain.sigma.cols() + chain.beta.cols());
    rows.leftCols(chain.sigma.cols()) = chain.sigma;
    rows.rightCols(chain.beta.cols()) = chain.beta;
    write_csv(path, chain.parameter_names(), rows);
}

LoadedChain read_chain_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open chain CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty chain CSV: " + path);

    LoadedChain chain;
    {
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) {
                if (cell != "iter") throw ParseError("chain CSV: first column must be iter");
                first = false;
            } else {
                chain.names.push_back(cell);
            }
        }
        if (chain.names.empty()) throw ParseError("chain CSV: no parameter columns");
    }

    std::vector<std::vector<double>> values;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            if (col == 1) continue;  // iter
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError("chain CSV row " + std::to_string(row_no) + ", column " +
                                 std::to_string(col) + ": not a number: '" + cell + "'");
            }
        }
        if (row.size() != chain.names.size())
            throw ParseError("chain CSV row " + std::to_string(row_no) + ": expected " +
                             std::to_string(chain.names.size() + 1) + " columns");
        values.push_back(std::move(row));
    }
    if (values.empty()) throw ParseError("chain CSV has no data rows: " + path);
    chain.draws.resize(Index(values.size()), Index(chain.names.size()));
    for (Index i = 0; i < chain.draws.rows(); ++i)
        for (Index j = 0; j < chain.draws.cols(); ++j)
            chain.draws(i, j) = values[size_t(i)][size_t(j)];
    return chain;
}

void write_summary_json(const std::string& path, const Summary& summary) {
    nlohmann::json arr = nlohmann::json::array();
    for (Index j = 0; j < summary.size(); ++j) {
        arr.push_back({{"name", summary.names[size_t(j)]},
                       {"mean", summary.mean[j]},
                       {"sd", summary.sd[j]},
                       {"ess", summary.ess[j]},
                       {"acf1", summary.acf1[j]}});
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << arr.dump(2) << "\n";
}

void write_acf_csv(const std::string& path, const Vector& rho) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "lag,rho\n";
    for (Index k = 0; k < rho.size(); ++k) out << k << "," << fmt_full(rho[k]) << "\n";
}

}  // namespace ineqreg
