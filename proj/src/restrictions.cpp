#include "ineqreg/restrictions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace ineqreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rank_of(const Matrix& m) {
    Eigen::FullPivLU<Matrix> lu(m);
    return double(lu.rank());
}

bool invertible(const Matrix& m) {
    Eigen::FullPivLU<Matrix> lu(m);
    return lu.isInvertible();
}

}  // namespace

void validate(const RestrictionSystem& system) {
    const Index q = system.q(), p = system.p(), k = system.k();
    if (q < 1 || p < 1) throw ShapeMismatch("restriction system: H must be non-empty");
    if (system.K.rows() != q || system.G.rows() != q || system.K.cols() != k)
        throw ShapeMismatch("restriction system: K/G shapes do not match H");
    if (q > p)
        throw ShapeMismatch("restriction system: more restrictions (" + std::to_string(q) +
                            ") than coefficients (" + std::to_string(p) + ")");
    for (Index i = 0; i < q; ++i) {
        if (!system.H.row(i).allFinite())
            throw ShapeMismatch("restriction system: H row " + std::to_string(i + 1) +
                                " has non-finite entries");
        for (Index j = 0; j < k; ++j) {
            double lo = system.K(i, j), hi = system.G(i, j);
            if (std::isnan(lo) || std::isnan(hi))
                throw ShapeMismatch("restriction system: NaN bound in row " + std::to_string(i + 1));
            if (!(lo < hi))
                throw EmptyInterval("restriction system: empty restriction interval in row " +
                                    std::to_string(i + 1));
        }
    }
    if (rank_of(system.H) < double(q))
        throw RankDeficient("restriction system: restrictions are not independent (rank < q)");
}

Vector Partition::assemble(const Vector& beta_S, const Vector& beta_Sprime) const {
    if (beta_S.size() != q() || beta_Sprime.size() != p() - q())
        throw ShapeMismatch("Partition::assemble: block sizes do not match partition");
    Vector out(p());
    for (Index i = 0; i < q(); ++i) out[S[size_t(i)]] = beta_S[i];
    for (Index i = 0; i < p() - q(); ++i) out[Sprime[size_t(i)]] = beta_Sprime[i];
    return out;
}

Matrix Partition::assemble(const Matrix& B_S, const Matrix& B_Sprime) const {
    if (B_S.rows() != q() || B_Sprime.rows() != p() - q() || B_S.cols() != B_Sprime.cols())
        throw ShapeMismatch("Partition::assemble: block shapes do not match partition");
    Matrix out(p(), B_S.cols());
    for (Index i = 0; i < q(); ++i) out.row(S[size_t(i)]) = B_S.row(i);
    for (Index i = 0; i < p() - q(); ++i) out.row(Sprime[size_t(i)]) = B_Sprime.row(i);
    return out;
}

Partition select_partition(const RestrictionSystem& system,
                           const std::optional<std::vector<Index>>& preferred) {
    const Index q = system.q(), p = system.p();
    std::vector<Index> s;

    if (preferred) {
        if (Index(preferred->size()) != q)
            throw ShapeMismatch("select_partition: preferred S must have q indices");
        for (Index j : *preferred)
            if (j < 0 || j >= p)
                throw ShapeMismatch("select_partition: preferred index out of range");
        Matrix hs(q, q);
        for (Index c = 0; c < q; ++c) hs.col(c) = system.H.col((*preferred)[size_t(c)]);
        if (!invertible(hs))
            throw PreferredSingular("select_partition: preferred H_S block is singular");
        s = *preferred;
    } else {
        // Row-wise elimination, picking for each row the unused column with the
        // largest pivot; with rank(H) = q every row finds one.
        Matrix work = system.H;
        std::vector<bool> used(size_t(p), false);
        for (Index r = 0; r < q; ++r) {
            Index best = -1;
            double best_abs = 0.0;
            for (Index j = 0; j < p; ++j) {
                if (used[size_t(j)]) continue;
                double v = std::fabs(work(r, j));
                if (v > best_abs + 1e-15 * best_abs) {
                    if (v > best_abs) { best = j; best_abs = v; }
                }
            }
            if (best < 0 || best_abs < 1e-12)
                throw NoFullRankBlock("select_partition: no usable pivot (rank deficient?)");
            used[size_t(best)] = true;
            s.push_back(best);
            for (Index i = r + 1; i < q; ++i) {
                double f = work(i, best) / work(r, best);
                if (f != 0.0) work.row(i) -= f * work.row(r);
            }
        }
    }

    Partition out;
    out.S = s;
    for (Index j = 0; j < p; ++j)
        if (std::find(s.begin(), s.end(), j) == s.end()) out.Sprime.push_back(j);
    out.H_S.resize(q, q);
    for (Index c = 0; c < q; ++c) out.H_S.col(c) = system.H.col(out.S[size_t(c)]);
    out.H_Sprime.resize(q, p - q);
    for (Index c = 0; c < p - q; ++c) out.H_Sprime.col(c) = system.H.col(out.Sprime[size_t(c)]);
    return out;
}

BoxBounds conditional_box(const Partition& partition, const RestrictionSystem& system,
                          const Vector& beta_Sprime) {
    if (system.k() != 1) throw ShapeMismatch("conditional_box: system is multivariate");
    if (beta_Sprime.size() != partition.p() - partition.q())
        throw ShapeMismatch("conditional_box: beta_Sprime length mismatch");
    Vector shift = partition.H_Sprime * beta_Sprime;
    return BoxBounds(system.K.col(0) - shift, system.G.col(0) - shift);
}

BoxBounds conditional_box_mv(const Partition& partition, const RestrictionSystem& system,
                             const Matrix& B_Sprime) {
    if (B_Sprime.rows() != partition.p() - partition.q() || B_Sprime.cols() != system.k())
        throw ShapeMismatch("conditional_box_mv: B_Sprime shape mismatch");
    Matrix shift = partition.H_Sprime * B_Sprime;  // q x k
    return BoxBounds(vec(system.K - shift), vec(system.G - shift));
}

namespace {

double interior_point(double lo, double hi) {
    const bool lo_fin = std::isfinite(lo), hi_fin = std::isfinite(hi);
    if (lo_fin && hi_fin) return 0.5 * (lo + hi);
    if (lo_fin) return lo + 1.0;
    if (hi_fin) return hi - 1.0;
    return 0.0;
}

}  // namespace

Vector feasible_point(const RestrictionSystem& system, const Partition& partition,
                      const std::optional<Vector>& anchor) {
    const Index q = partition.q(), p = partition.p();
    Vector beta_Sprime = anchor ? *anchor : Vector::Zero(p - q);
    if (beta_Sprime.size() != p - q)
        throw ShapeMismatch("feasible_point: anchor length mismatch");
    BoxBounds box = conditional_box(partition, system, beta_Sprime);
    Vector theta(q);
    for (Index i = 0; i < q; ++i) theta[i] = interior_point(box.lower[i], box.upper[i]);
    Vector beta_S = partition.H_S.partialPivLu().solve(theta);
    return partition.assemble(beta_S, beta_Sprime);
}

Matrix feasible_point_mv(const RestrictionSystem& system, const Partition& partition,
                         const std::optional<Matrix>& anchor) {
    const Index q = partition.q(), p = partition.p(), k = system.k();
    Matrix B_Sprime = anchor ? *anchor : Matrix::Zero(p - q, k);
    if (B_Sprime.rows() != p - q || B_Sprime.cols() != k)
        throw ShapeMismatch("feasible_point_mv: anchor shape mismatch");
    BoxBounds box = conditional_box_mv(partition, system, B_Sprime);
    Matrix theta(q, k);
    for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < q; ++i)
            theta(i, j) = interior_point(box.lower[j * q + i], box.upper[j * q + i]);
    Matrix B_S = partition.H_S.partialPivLu().solve(theta);
    return partition.assemble(B_S, B_Sprime);
}

bool check_feasible(const Vector& beta, const RestrictionSystem& system, double slack) {
    if (beta.size() != system.p()) throw ShapeMismatch("check_feasible: beta length mismatch");
    if (system.k() != 1) throw ShapeMismatch("check_feasible: system is multivariate");
    Vector h = system.H * beta;
    for (Index i = 0; i < system.q(); ++i)
        if (h[i] < system.K(i, 0) - slack || h[i] > system.G(i, 0) + slack) return false;
    return true;
}

bool check_feasible(const Matrix& B, const RestrictionSystem& system, double slack) {
    if (B.rows() != system.p() || B.cols() != system.k())
        throw ShapeMismatch("check_feasible: B shape mismatch");
    Matrix h = system.H * B;
    for (Index j = 0; j < system.k(); ++j)
        for (Index i = 0; i < system.q(); ++i)
            if (h(i, j) < system.K(i, j) - slack || h(i, j) > system.G(i, j) + slack) return false;
    return true;
}

std::pair<Matrix, Matrix> permute_design(const Matrix& X, const Partition& partition) {
    if (X.cols() != partition.p())
        throw ShapeMismatch("permute_design: X has " + std::to_string(X.cols()) +
                            " columns, partition expects " + std::to_string(partition.p()));
    Matrix xs(X.rows(), partition.q());
    Matrix xsp(X.rows(), partition.p() - partition.q());
    for (Index c = 0; c < partition.q(); ++c) xs.col(c) = X.col(partition.S[size_t(c)]);
    for (Index c = 0; c < partition.p() - partition.q(); ++c)
        xsp.col(c) = X.col(partition.Sprime[size_t(c)]);
    return {std::move(xs), std::move(xsp)};
}

namespace {

double bound_entry(const nlohmann::json& v, const char* which) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "-inf") return -kInf;
        if (s == "+inf" || s == "inf") return kInf;
    }
    throw ParseError(std::string("restriction JSON: bad ") + which +
                     " entry (number or \"-inf\"/\"+inf\" expected)");
}

Matrix bound_matrix(const nlohmann::json& j, Index q, const char* which) {
    if (!j.is_array() || Index(j.size()) != q)
        throw ParseError(std::string("restriction JSON: ") + which + " must have q rows");
    // Rows are scalars (univariate) or arrays (multivariate).
    Index k = j[0].is_array() ? Index(j[0].size()) : 1;
    Matrix out(q, k);
    for (Index i = 0; i < q; ++i) {
        const auto& row = j[size_t(i)];
        if (k == 1 && !row.is_array()) {
            out(i, 0) = bound_entry(row, which);
        } else {
            if (!row.is_array() || Index(row.size()) != k)
                throw ParseError(std::string("restriction JSON: ragged ") + which);
            for (Index c = 0; c < k; ++c) out(i, c) = bound_entry(row[size_t(c)], which);
        }
    }
    return out;
}

}  // namespace

RestrictionSystem parse_restriction_system(const std::string& json_text,
                                           std::optional<std::vector<Index>>* preferred_S) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("restriction JSON: ") + e.what());
    }
    const char* hkey = j.contains("H") ? "H" : (j.contains("R") ? "R" : nullptr);
    if (!hkey) throw ParseError("restriction JSON: missing \"H\" (or \"R\") matrix");
    const auto& hj = j[hkey];
    if (!hj.is_array() || hj.empty() || !hj[0].is_array())
        throw ParseError("restriction JSON: H must be an array of rows");
    const Index q = Index(hj.size());
    const Index p = Index(hj[0].size());
    RestrictionSystem sys;
    sys.H.resize(q, p);
    for (Index i = 0; i < q; ++i) {
        if (Index(hj[size_t(i)].size()) != p)
            throw ParseError("restriction JSON: ragged H row " + std::to_string(i + 1));
        for (Index c = 0; c < p; ++c) sys.H(i, c) = hj[size_t(i)][size_t(c)].get<double>();
    }
    Index k = 1;
    if (j.contains("G")) {
        sys.G = bound_matrix(j["G"], q, "G");
        k = sys.G.cols();
    } else {
        throw ParseError("restriction JSON: missing \"G\"");
    }
    if (j.contains("K")) {
        sys.K = bound_matrix(j["K"], q, "K");
        if (sys.K.cols() != k) throw ParseError("restriction JSON: K/G column mismatch");
    } else {
        sys.K = Matrix::Constant(q, k, -kInf);
    }
    if (preferred_S) {
        *preferred_S = std::nullopt;
        if (j.contains("S")) {
            std::vector<Index> s;
            for (const auto& v : j["S"]) {
                Index one_based = v.get<Index>();
                if (one_based < 1 || one_based > p)
                    throw ParseError("restriction JSON: S index out of range (1-based)");
                s.push_back(one_based - 1);
            }
            *preferred_S = std::move(s);
        }
    }
    return sys;
}

RestrictionSystem load_restriction_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open restriction file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_restriction_system(ss.str());
}

}  // namespace ineqreg
