#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcp/construct.hpp"
#include "pcp/pairs.hpp"

namespace pcp {

/// Flat index of e_i ⊗ e_k in C^n ⊗ C^n (0-based, row-major over the factors).
inline Eigen::Index tensor_index(Eigen::Index n, Eigen::Index i, Eigen::Index k) { return i * n + k; }

/// CLDUI operator: coefficient pair plus its n^2 x n^2 realization.
/// The dense matrix is built eagerly, so a constructed value is immutable.
struct CLDUIState {
    PairXY pair;
    ComplexMatrix dense;

    Eigen::Index n() const { return pair.n(); }
};

/// rho_{X,Y} without any validation of the pair:
/// rho((i,i),(j,j)) = x_ij and rho((i,j),(i,j)) = y_ij for i != j.
ComplexMatrix dense_state(const PairXY& pair);

/// Throws ConditionsViolated unless (a)-(c) hold, i.e. rho is PSD.
CLDUIState build_state(const PairXY& pair);

/// Reads (X, Y) from the CLDUI positions of rho. Any other entry larger than
/// 1e-10 times the largest entry raises NotCLDUI with its coordinates.
PairXY extract_pair(const ComplexMatrix& rho, Eigen::Index n);

/// Probabilistic: checks (U ⊗ conj U) rho (U ⊗ conj U)* = rho for `samples`
/// random diagonal unitaries with uniform phases, to 1e-9 relative Frobenius error.
bool is_diagonal_unitary_invariant(const ComplexMatrix& rho, Eigen::Index n, int samples, std::uint64_t seed);

/// (id ⊗ T): entry ((i,k),(j,l)) moves to ((i,l),(j,k)).
ComplexMatrix partial_transpose(const ComplexMatrix& rho, Eigen::Index n);

/// R(e_i e_j* ⊗ e_k e_l*) = e_i e_k* ⊗ e_j e_l*.
ComplexMatrix realign_map(const ComplexMatrix& rho, Eigen::Index n);

/// Coefficient-level PPT test: |x_ij|^2 <= y_ij y_ji for all i < j.
/// Throws ConditionsViolated unless (a)-(c) hold.
bool ppt_check(const PairXY& pair);

struct RealignmentReport {
    double lhs;  // ||X||_1 - ||X||_tr
    double rhs;  // ||Y||_1 - ||Y||_tr
    bool passes;
};

/// Coefficient-level realignment criterion. Throws ConditionsViolated unless (a)-(c) hold.
RealignmentReport realignment_check(const PairXY& pair);

enum class Separability { Separable, Entangled, Inconclusive };

std::string_view to_string(Separability s);

struct SeparabilityVerdict {
    Separability kind = Separability::Inconclusive;
    /// Separable: the PCP certificate, and vectors (a_k, b_k) = (v_k, conj w_k)
    /// whose separable sum_k a_k a_k* ⊗ b_k b_k* twirls to rho over diagonal unitaries.
    std::optional<ConstructorOutcome> certificate;
    std::optional<PcpDecomposition> separable_vectors;
    /// Entangled: which criterion fired.
    std::string criterion;
    bool ppt = false;
    RealignmentReport realignment{};
    /// Inconclusive: one line per constructor attempted.
    std::vector<std::string> attempts;
};

/// Throws ConditionsViolated unless (a)-(c) hold (the pair is not a state).
SeparabilityVerdict separability_verdict(const PairXY& pair);

} // namespace pcp
