#include <gtest/gtest.h>

#include <numeric>

#include "pcp/pairs.hpp"
#include "support.hpp"

using namespace pcp;
using pcp::testing::Rng;

namespace {

PairXY cyclic_pair(double a) {
    ComplexMatrix y(3, 3);
    y << 1.0, a, 1.0 / a, 1.0 / a, 1.0, a, a, 1.0 / a, 1.0;
    return {all_ones(3), y};
}

// Entry-by-entry sums over the terms, written without Hadamard products.
PairXY reconstruct_by_loops(const PcpDecomposition& d) {
    const Eigen::Index n = d.n();
    ComplexMatrix x = ComplexMatrix::Zero(n, n);
    ComplexMatrix y = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < d.terms(); ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                x(i, j) += d.v()(i, k) * d.w()(i, k) * std::conj(d.v()(j, k) * d.w()(j, k));
                y(i, j) += std::norm(d.v()(i, k)) * std::norm(d.w()(j, k));
            }
    return {x, y};
}

} // namespace

TEST(CyclicPair, NormsMatchClosedForms) {
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
        const auto r = check_necessary(cyclic_pair(a));
        const double s = 1.0 + a + a * a;
        const double y1 = 3.0 * s / a;
        const double ytr = (s + 2.0 * std::abs(a - 1.0) * std::sqrt(s)) / a;
        EXPECT_NEAR(r.coherence_x, 6.0, 1e-10);
        EXPECT_NEAR(r.coherence_y, y1 - ytr, 1e-9) << "a = " << a;
        EXPECT_NEAR(entrywise_one_norm(cyclic_pair(a).y()), y1, 1e-9);
        EXPECT_NEAR(trace_norm(cyclic_pair(a).y()), ytr, 1e-9);
        EXPECT_TRUE(r.holds_through(Condition::EntryBound)) << "a = " << a;
        EXPECT_EQ(r.holds_condition(Condition::NormGap), a == 1.0) << "a = " << a;
    }
    EXPECT_NEAR(entrywise_one_norm(all_ones(3)), 9.0, 1e-12);
    EXPECT_NEAR(trace_norm(all_ones(3)), 3.0, 1e-12);
}

TEST(CyclicPair, TrivialDecompositionAtOne) {
    const PcpDecomposition d(ComplexMatrix::Ones(3, 1), ComplexMatrix::Ones(3, 1));
    EXPECT_TRUE(verify_decomposition(d, cyclic_pair(1.0), 1e-14));
    EXPECT_FALSE(verify_decomposition(d, cyclic_pair(2.0), 1e-8));
}

TEST(Reconstruct, MatchesEntrywiseSums) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = pcp::testing::random_decomposition(rng, rng.integer(1, 6), rng.integer(1, 8));
        const PairXY a = reconstruct(d);
        const PairXY b = reconstruct_by_loops(d);
        EXPECT_LT(pcp::testing::max_abs_difference(a.x(), b.x()), 1e-10 * std::max(1.0, max_abs_entry(b.x())));
        EXPECT_LT(pcp::testing::max_abs_difference(a.y(), b.y()), 1e-10 * std::max(1.0, max_abs_entry(b.y())));
    }
}

TEST(Reconstruct, SoundnessSweep) {
    Rng rng(22);
    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = pcp::testing::random_decomposition(rng, rng.integer(1, 6), rng.integer(1, 10));
        const auto report = check_necessary(reconstruct(d));
        if (!report.holds_all()) ++failures;
    }
    EXPECT_EQ(failures, 0);
}

TEST(Reconstruct, ResidualOfExactDecompositionIsTiny) {
    Rng rng(23);
    const auto d = pcp::testing::random_decomposition(rng, 4, 5);
    const PairXY p = reconstruct(d);
    const auto r = reconstruction_residual(d, p);
    EXPECT_LT(r.x_error, 1e-12 * r.scale);
    EXPECT_LT(r.y_error, 1e-12 * r.scale);
    EXPECT_TRUE(verify_decomposition(d, p, 1e-12));
}

TEST(Decomposition, ConcatenationAddsPairs) {
    Rng rng(24);
    const auto a = pcp::testing::random_decomposition(rng, 3, 2);
    const auto b = pcp::testing::random_decomposition(rng, 3, 4);
    const PairXY pa = reconstruct(a), pb = reconstruct(b);
    const PairXY sum(pa.x() + pb.x(), pa.y() + pb.y());
    EXPECT_TRUE(verify_decomposition(a.concatenated(b), sum, 1e-12));
}

TEST(Decomposition, ScalingConjugatesByDiagonal) {
    Rng rng(25);
    const auto d = pcp::testing::random_decomposition(rng, 4, 3);
    RealVector s(4);
    s << 0.5, 2.0, 1.0, 3.0;
    const PairXY p = reconstruct(d);
    const ComplexMatrix dm = s.cast<Complex>().asDiagonal();
    const PairXY target(dm * p.x() * dm, dm * p.y() * dm);
    EXPECT_TRUE(verify_decomposition(d.scaled(s), target, 1e-12));
}

TEST(Decomposition, PermutationRoundTrip) {
    Rng rng(26);
    const auto d = pcp::testing::random_decomposition(rng, 4, 3);
    std::vector<int> perm{2, 0, 3, 1};
    const PairXY p = reconstruct(d);
    ComplexMatrix px(4, 4), py(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            px(i, j) = p.x()(perm[i], perm[j]);
            py(i, j) = p.y()(perm[i], perm[j]);
        }
    EXPECT_TRUE(verify_decomposition(d.permuted(perm), PairXY(px, py), 1e-12));
    EXPECT_EQ(pcp::testing::max_abs_difference(d.permuted(perm).unpermuted(perm).v(), d.v()), 0.0);
}

TEST(Decomposition, DropsOnlyZeroTerms) {
    ComplexMatrix v(2, 3), w(2, 3);
    v << 1.0, 0.0, 1.0, 0.0, 0.0, 0.0;
    w << 1.0, 1.0, 0.0, 1.0, 1.0, 1.0;
    // Column 2 has v ⊙ w = 0 but |v|^2 |w|^2 contributes to Y, so it stays.
    const auto d = PcpDecomposition(v, w).without_zero_terms();
    EXPECT_EQ(d.terms(), 2);
    EXPECT_TRUE(verify_decomposition(d, reconstruct(PcpDecomposition(v, w)), 0.0));
}

TEST(Decomposition, RejectsMismatchedShapes) {
    EXPECT_THROW(PcpDecomposition(ComplexMatrix::Ones(3, 2), ComplexMatrix::Ones(3, 1)), Error);
    EXPECT_THROW(PairXY(ComplexMatrix::Ones(2, 2), ComplexMatrix::Ones(3, 3)), Error);
}

TEST(Necessary, Witnesses) {
    ComplexMatrix x(2, 2), y(2, 2);
    x << 2.0, 3.0, 3.0, 5.0;
    y << 2.0, 1.0, 2.0, 5.0;
    auto r = check_necessary({x, y});
    EXPECT_TRUE(r.holds_through(Condition::SameDiagonal));
    EXPECT_FALSE(r.holds_condition(Condition::EntryBound));
    ASSERT_TRUE(r.witness[3].has_value());
    EXPECT_EQ(r.witness[3]->row, 0);
    EXPECT_EQ(r.witness[3]->col, 1);
    EXPECT_NEAR(r.witness[3]->value, 7.0, 1e-12);
    EXPECT_EQ(r.first_failure(), Condition::EntryBound);

    y(0, 1) = -1.0;
    r = check_necessary({x, y});
    EXPECT_FALSE(r.holds_condition(Condition::NonNegative));
    EXPECT_NEAR(r.witness[1]->value, -1.0, 0.0);

    y(0, 1) = 1.0;
    y(1, 1) = 4.0;
    r = check_necessary({x, y});
    EXPECT_FALSE(r.holds_condition(Condition::SameDiagonal));
    EXPECT_EQ(r.witness[2]->row, 1);

    x(0, 0) = -1.0;
    r = check_necessary({x, y});
    EXPECT_FALSE(r.holds_condition(Condition::Psd));
    EXPECT_EQ(r.witness[0]->row, -1);
    EXPECT_LT(r.witness[0]->value, 0.0);
}

TEST(Necessary, StateConditionsAndLengthBound) {
    Rng rng(27);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = pcp::testing::random_decomposition(rng, rng.integer(2, 5), rng.integer(1, 6), 0.0);
        const PairXY p = reconstruct(d);
        EXPECT_TRUE(satisfies_state_conditions(p));
        EXPECT_LE(length_lower_bound(p), d.terms());
    }
    EXPECT_THROW(length_lower_bound(PairXY(-ComplexMatrix::Identity(2, 2), -ComplexMatrix::Identity(2, 2))), Error);
}

TEST(StrongCauchySchwarz, OrderedAndPhaseInvariant) {
    Rng rng(28);
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::Index n = rng.integer(1, 10);
        const ComplexVector v = pcp::testing::random_complex(rng, n, 1);
        const ComplexVector w = pcp::testing::random_complex(rng, n, 1);
        const auto [lhs, rhs] = strong_cs_gap(v, w);
        const double scale = std::max(1.0, v.squaredNorm() * w.squaredNorm());
        EXPECT_GE(lhs, -1e-10 * scale);
        EXPECT_LE(lhs, rhs + 1e-10 * scale);

        // lhs sees only moduli; rhs survives a common diagonal unitary and global phases.
        ComplexVector d(n);
        for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.phase();
        const ComplexVector v2 = rng.phase() * d.cwiseProduct(v);
        const ComplexVector w2 = rng.phase() * d.cwiseProduct(w);
        const auto [lhs2, rhs2] = strong_cs_gap(v2, w2);
        EXPECT_NEAR(lhs2, lhs, 1e-10 * scale);
        EXPECT_NEAR(rhs2, rhs, 1e-10 * scale);
        ComplexVector e(n);
        for (Eigen::Index i = 0; i < n; ++i) e(i) = rng.phase();
        EXPECT_NEAR(strong_cs_gap(v, e.cwiseProduct(w)).first, lhs, 1e-10 * scale);
    }
}

TEST(StrongCauchySchwarz, Degenerate) {
    ComplexVector v(3);
    v << 1.0, 2.0, 3.0;
    const auto [lhs, rhs] = strong_cs_gap(v, v);
    EXPECT_NEAR(lhs, 0.0, 1e-12);
    EXPECT_NEAR(rhs, 0.0, 1e-10);
    EXPECT_THROW(strong_cs_gap(v, ComplexVector::Ones(2)), Error);
}
