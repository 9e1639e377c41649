#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcp/pairs.hpp"

namespace pcp {

/// Reconstruction tolerance every constructor must meet before reporting success.
inline constexpr double kCertificateTolerance = 1e-8;

/// Largest n for which decompose_recursive searches all n! orderings.
inline constexpr Eigen::Index kMaxPermutationSearch = 7;

enum class ConstructorStatus { Decomposed, NotApplicable, ConditionsViolated };

std::string_view to_string(ConstructorStatus status);

/// Where the recursive construction stopped: a radicand y_kj - d_kj below
/// tolerance (negative) or a zero denominator. Indices are 0-based.
struct RadicandWitness {
    Eigen::Index term;
    Eigen::Index entry;
    double radicand;
    bool zero_denominator = false;
};

struct ConstructorOutcome {
    ConstructorStatus status = ConstructorStatus::NotApplicable;
    std::optional<PcpDecomposition> decomposition;
    std::string method;
    std::vector<int> permutation;  // identity when no reordering was applied
    std::string reason;
    std::optional<RadicandWitness> stuck_at;
    std::vector<std::string> attempts;  // decompose_auto: one line per method tried

    bool decomposed() const { return status == ConstructorStatus::Decomposed; }
};

/// X diagonal: v_{ij} = e_i, w_{ij} = sqrt(y_ij) e_j (n^2 terms).
ConstructorOutcome decompose_diagonal_x(const PairXY& pair);

/// Complete for n = 2: succeeds iff conditions (a)–(d) hold.
ConstructorOutcome decompose_2x2(const PairXY& pair);

/// Row-by-row construction; with search_permutations every ordering of the
/// indices is tried (lexicographically, n <= kMaxPermutationSearch).
ConstructorOutcome decompose_recursive(const PairXY& pair, bool search_permutations);

/// M(A): diagonal |a_ii|, off-diagonal -|a_ij|.
template <typename Derived>
RealMatrix comparison_matrix(const Eigen::MatrixBase<Derived>& a) {
    require_square(a, "matrix");
    RealMatrix m = -a.cwiseAbs();
    m.diagonal() = -m.diagonal();
    return m;
}

/// Positive d with diag(d) X diag(d) row diagonally dominant. Requires M(X) PSD.
/// Each connected component of the off-diagonal support uses its own Perron
/// vector, normalized to a largest entry of 1.
RealVector perron_scaling(const ComplexMatrix& x);

/// Minimum over rows of |x_ii| - sum_{j != i} |x_ij|.
double dominance_margin(const ComplexMatrix& x);

/// Pieces of the comparison-matrix construction, before unscaling.
struct ComparisonFactorization {
    RealVector scaling;                  // d, so that (DXD, DYD) is diagonally dominant
    std::optional<PcpDecomposition> core;  // pair-indexed columns {k, l}, k < l, of the scaled pair
    std::optional<PcpDecomposition> slack; // diagonal-X decomposition of the leftover (diag P, P)
    std::vector<std::pair<int, int>> core_columns;  // the {k, l} label of each core column
};

/// Throws ConditionsViolated if (a)–(d) fail and ComparisonNotPsd if M(X) is not PSD.
ComparisonFactorization comparison_factorization(const PairXY& pair);

/// Decomposition of (X, Y) assembled from comparison_factorization.
PcpDecomposition assemble(const ComparisonFactorization& parts);

ConstructorOutcome decompose_comparison(const PairXY& pair);

/// X = aI + bJ, Y = bI + aJ.
PairXY isotropic_pair(Eigen::Index n, double a, double b);

struct IsotropicConstants {
    double c_plus;
    double c_minus;
};

/// c_± = sqrt((n^2 - n + 2 ± sqrt(n^4 - 2n^3 + n^2 + 4n)) / 2).
IsotropicConstants isotropic_constants(Eigen::Index n);

/// Valid for a >= 0 and -a/n <= b <= a; a convex mix of the b = -a/n and b = a
/// endpoint decompositions.
ConstructorOutcome decompose_isotropic(Eigen::Index n, double a, double b);

/// Diagonal X, then 2x2, then comparison matrix, then recursive with
/// permutation search. First verified success wins.
ConstructorOutcome decompose_auto(const PairXY& pair);

} // namespace pcp
