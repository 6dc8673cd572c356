#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ineqreg/distributions.hpp"
#include "ineqreg/linalg.hpp"

namespace ineqreg {

/// q independent two-sided restrictions K <= H beta <= G. For the multivariate
/// model H plays the role of the restriction matrix applied to B, and K, G are
/// q x k matrices; the univariate case is k = 1. Entries of K may be -inf and
/// entries of G +inf (one-sided rows).
struct RestrictionSystem {
    Matrix H;  // q x p
    Matrix K;  // q x k
    Matrix G;  // q x k

    Index q() const { return H.rows(); }
    Index p() const { return H.cols(); }
    Index k() const { return G.cols(); }
};

void validate(const RestrictionSystem& system);

/// Split of {0..p-1} into S (|S| = q, H_S invertible) and S' (the rest), with
/// the column permutation taking original coefficient order to (S; S') order.
struct Partition {
    std::vector<Index> S;
    std::vector<Index> Sprime;
    Matrix H_S;       // q x q, invertible
    Matrix H_Sprime;  // q x (p-q)

    Index p() const { return Index(S.size() + Sprime.size()); }
    Index q() const { return Index(S.size()); }

    /// Reassemble a coefficient vector given its (S; S') blocks.
    Vector assemble(const Vector& beta_S, const Vector& beta_Sprime) const;
    Matrix assemble(const Matrix& B_S, const Matrix& B_Sprime) const;
};

/// Picks S by Gaussian elimination with column pivoting on H (largest pivot
/// first, ties to the smallest column index), or uses `preferred` verbatim
/// after checking invertibility. Deterministic for a fixed system.
Partition select_partition(const RestrictionSystem& system,
                           const std::optional<std::vector<Index>>& preferred = std::nullopt);

/// Bounds of the conditional support of H_S beta_S given beta_Sprime:
/// [K - H_S' beta_S', G - H_S' beta_S'].
BoxBounds conditional_box(const Partition& partition, const RestrictionSystem& system,
                          const Vector& beta_Sprime);

/// Multivariate form: bounds on vec(R_S B_S), stacked column-major to match
/// the transform I_k (x) R_S.
BoxBounds conditional_box_mv(const Partition& partition, const RestrictionSystem& system,
                             const Matrix& B_Sprime);

/// A strictly feasible starting point: the free block is `anchor` (zero when
/// omitted), the constrained block solves H_S beta_S = theta with theta the
/// midpoint of each finite interval (one-sided: finite bound -/+ 1; doubly
/// infinite: 0). Always succeeds on a validated system.
Vector feasible_point(const RestrictionSystem& system, const Partition& partition,
                      const std::optional<Vector>& anchor = std::nullopt);
Matrix feasible_point_mv(const RestrictionSystem& system, const Partition& partition,
                         const std::optional<Matrix>& anchor = std::nullopt);

/// Closed inequalities with per-row slack (default 1e-12) so boundary draws
/// are not rejected for round-off.
bool check_feasible(const Vector& beta, const RestrictionSystem& system, double slack = 1e-12);
bool check_feasible(const Matrix& B, const RestrictionSystem& system, double slack = 1e-12);

/// Gathers the design columns whose coefficients sit in S (in S order) and the
/// rest (in S' order).
std::pair<Matrix, Matrix> permute_design(const Matrix& X, const Partition& partition);

/// JSON document {"H": [[..]], "K": [..], "G": [..], "S": optional [..]};
/// "R" is accepted as an alias for "H", K/G rows may be scalars (univariate)
/// or arrays (multivariate), infinities are the strings "-inf"/"+inf", and S
/// uses 1-based column indices.
RestrictionSystem load_restriction_system(const std::string& path);
RestrictionSystem parse_restriction_system(const std::string& json_text,
                                           std::optional<std::vector<Index>>* preferred_S = nullptr);

}  // namespace ineqreg
