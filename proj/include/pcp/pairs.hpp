#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcp/linalg.hpp"

namespace pcp {

/// Candidate pair (X, Y) of n x n complex matrices.
class PairXY {
public:
    PairXY() = default;
    PairXY(ComplexMatrix x, ComplexMatrix y);

    Eigen::Index n() const { return x_.rows(); }
    const ComplexMatrix& x() const { return x_; }
    const ComplexMatrix& y() const { return y_; }

private:
    ComplexMatrix x_;
    ComplexMatrix y_;
};

/// Vector families {v_k}, {w_k} stored as the columns of V and W (n x m).
class PcpDecomposition {
public:
    PcpDecomposition() = default;
    PcpDecomposition(ComplexMatrix v, ComplexMatrix w);

    Eigen::Index n() const { return v_.rows(); }
    Eigen::Index terms() const { return v_.cols(); }
    const ComplexMatrix& v() const { return v_; }
    const ComplexMatrix& w() const { return w_; }

    /// Columns of both families concatenated: (X1 + X2, Y1 + Y2).
    PcpDecomposition concatenated(const PcpDecomposition& other) const;
    /// Drops terms whose v ⊙ w and |v|^2 |w|^2 contributions are both exactly zero.
    PcpDecomposition without_zero_terms() const;
    /// v_k -> D^{1/2} v_k and w_k -> D^{1/2} w_k, so the pair maps to (DXD, DYD).
    PcpDecomposition scaled(const RealVector& d) const;
    /// Row i of the result is row perm[i] of this; maps a decomposition of (X, Y)
    /// to one of (PXP*, PYP*) with (PXP*)_{ij} = X_{perm[i], perm[j]}.
    PcpDecomposition permuted(const std::vector<int>& perm) const;
    /// Inverse of permuted().
    PcpDecomposition unpermuted(const std::vector<int>& perm) const;

private:
    ComplexMatrix v_;
    ComplexMatrix w_;
};

PairXY reconstruct(const PcpDecomposition& dec);

struct ReconstructionResidual {
    double x_error;  // ||X_rec - X||_F
    double y_error;  // ||Y_rec - Y||_F
    double scale;    // max(1, ||X||_F, ||Y||_F)
};

ReconstructionResidual reconstruction_residual(const PcpDecomposition& dec, const PairXY& pair);

/// True iff both reconstructed matrices are within tol * max(1, ||X||_F, ||Y||_F)
/// of the pair in Frobenius norm.
bool verify_decomposition(const PcpDecomposition& dec, const PairXY& pair, double tol);

/// Location and size of a violated entry-level condition.
struct EntryWitness {
    Eigen::Index row;
    Eigen::Index col;
    double value;
};

enum class Condition { Psd = 0, NonNegative = 1, SameDiagonal = 2, EntryBound = 3, NormGap = 4 };

std::string_view condition_label(Condition c);

struct NecessaryReport {
    std::array<bool, 5> holds{};
    // (a): an asymmetric entry (value = |x_ij - conj x_ji|), or row = col = -1
    //      with value = smallest eigenvalue.
    // (b): offending y_ij with value = its imaginary part or negative real part.
    // (c): diagonal index with value = x_ii - y_ii.
    // (d): (i, j) with value = |x_ij|^2 - y_ij y_ji.
    std::array<std::optional<EntryWitness>, 4> witness{};
    // (e): always populated.
    double coherence_x = 0.0;  // ||X||_1 - ||X||_tr
    double coherence_y = 0.0;  // ||Y||_1 - ||Y||_tr

    bool holds_all() const;
    bool holds_through(Condition last) const;
    bool holds_condition(Condition c) const { return holds[static_cast<int>(c)]; }
    std::optional<Condition> first_failure() const;
};

NecessaryReport check_necessary(const PairXY& pair);

/// Conditions (a)–(c) only, i.e. the pair describes a PSD CLDUI operator.
bool satisfies_state_conditions(const PairXY& pair);

/// Both sides of the strengthened Cauchy–Schwarz inequality:
///   lhs = ||v ⊙ v̄|| ||w ⊙ w̄|| - <v ⊙ v̄, w ⊙ w̄>
///   rhs = ||v||^2 ||w||^2 - |<v, w>|^2
/// with 0 <= lhs <= rhs for every v, w.
std::pair<double, double> strong_cs_gap(const ComplexVector& v, const ComplexVector& w);

/// rank(X), a lower bound on the length of any PCP decomposition of the pair.
Eigen::Index length_lower_bound(const PairXY& pair);

} // namespace pcp
