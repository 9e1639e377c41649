#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcp/construct.hpp"

namespace pcp {

inline constexpr int kDefaultOrderingSamples = 100000;
inline constexpr std::uint64_t kDefaultOrderingSeed = 0x9e3779b97f4a7c15ULL;

enum class SlotKind { Square, Plus, Minus };

/// One of alpha_k^2 (Square, l == k), +alpha_k alpha_l or -alpha_k alpha_l (k < l). 0-based.
struct Slot {
    SlotKind kind;
    int k;
    int l;

    friend auto operator<=>(const Slot&, const Slot&) = default;
};

std::string to_string(const Slot& slot);

/// Descending order of the n^2 products induced by some alpha_1 > ... > alpha_n > 0.
struct OrderingTable {
    int n = 0;
    std::vector<Slot> slots;
    RealVector witness;  // an alpha realizing this ordering
};

/// Sampling-based enumeration. Each sample draws sorted |N(0,1)| values; samples
/// whose products come within 1e-6 alpha_1^2 of a tie are skipped. The result is
/// deduplicated and sorted by slot sequence (Square < Plus < Minus, then indices).
/// Throws UnsupportedDimension outside 2 <= n <= 5.
std::vector<OrderingTable> enumerate_orderings(int n, int samples = kDefaultOrderingSamples,
                                               std::uint64_t seed = kDefaultOrderingSeed);

/// enumerate_orderings(n) with default budget and seed, computed once per n.
/// Safe to call from several threads.
const std::vector<OrderingTable>& known_orderings(int n);

/// Throws InvalidOrdering unless the slots contain each product exactly once.
void validate_ordering(const OrderingTable& ordering);

/// Condition matrix of an ordering: slot s receives lambda_{n^2 + 1 - s}; the
/// (k,k) entry is twice the Square(k) value and (k,l) is Plus(k,l) minus Minus(k,l).
/// Throws LengthMismatch or NotSorted (lambdas must be non-increasing).
RealMatrix l_map_matrix(const OrderingTable& ordering, const std::vector<double>& lambdas);

struct AbsPptResult {
    bool passes = true;
    std::optional<std::size_t> failing_ordering;
    std::vector<double> min_eigenvalues;  // smallest eigenvalue of each condition matrix
};

/// Sorts the spectrum descending (entries above -1e-12 are clamped to 0, lower
/// ones raise NegativeEigenvalue) and tests every known ordering.
AbsPptResult abs_ppt_check(int n, std::vector<double> lambdas);

/// Same test against an explicit list of orderings of one dimension.
AbsPptResult abs_ppt_check(const std::vector<OrderingTable>& orderings, std::vector<double> lambdas);

/// Clamps entries above -1e-12 to 0 (NegativeEigenvalue otherwise) and sorts descending.
std::vector<double> normalized_spectrum(std::vector<double> lambdas);

/// Column m (m-th largest eigenvalue) is the basis vector of slot n^2 + 1 - m:
/// e_k ⊗ e_k, (e_k ⊗ e_l + e_l ⊗ e_k)/sqrt 2 or (e_k ⊗ e_l - e_l ⊗ e_k)/sqrt 2.
ComplexMatrix special_unitary(const OrderingTable& ordering);

/// sigma = (id ⊗ T)(U Lambda U*) is CLDUI with non-positive off-diagonal X, so the
/// comparison route certifies it. NotApplicable when the condition matrix is not PSD.
ConstructorOutcome certify_special_separable(const OrderingTable& ordering, const std::vector<double>& lambdas);

/// The sigma above, as a dense n^2 x n^2 matrix.
ComplexMatrix special_state_partial_transpose(const OrderingTable& ordering, const std::vector<double>& lambdas);

} // namespace pcp
