#include <gtest/gtest.h>

#include "pcp/construct.hpp"
#include "pcp/io.hpp"
#include "support.hpp"

using namespace pcp;
using pcp::testing::Rng;

namespace {

PairXY load_pair(const std::string& name) {
    return io::pair_from_json(io::load_json_file(pcp::testing::data_path(name))).pair;
}

PairXY needs_permutation() {
    ComplexMatrix x(3, 3), y(3, 3);
    x << 2, 1, -1, 1, 8, 1, -1, 1, 4;
    y << 2, 1, 3, 2, 8, 1, 1, 2, 4;
    return {x, y};
}

PairXY complex_dominant() {
    const Complex i(0, 1);
    ComplexMatrix x(3, 3), y(3, 3);
    x << 2.0, 1.0, -1.0, 1.0, 3.0, 2.0 * i, -1.0, -2.0 * i, 3.0;
    y << 2, 1, 2, 1, 3, 4, 0.5, 1, 3;
    return {x, y};
}

// Divides every column by the unit phase of its first non-zero entry.
ComplexMatrix phase_normalized(const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (std::abs(a(r, c)) > 1e-12) {
                out.col(c) /= unit_sign(a(r, c));
                break;
            }
        }
    }
    return out;
}

// Hermitian, diagonally dominant after a random positive rescaling, so M(X) is PSD.
PairXY random_comparison_pair(Rng& rng, Eigen::Index n) {
    ComplexMatrix x = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (!rng.coin(0.2)) {
                x(i, j) = rng.complex_normal();
                x(j, i) = std::conj(x(i, j));
            }
    for (Eigen::Index i = 0; i < n; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) off += std::abs(x(i, j));
        x(i, i) = off * (rng.coin(0.3) ? 1.0 : 1.0 + rng.uniform());
    }
    RealVector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(rng.uniform(-1.0, 1.0));
    const ComplexMatrix dm = d.cast<Complex>().asDiagonal();
    x = dm * x * dm;
    RealMatrix y(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, i) = x(i, i).real();
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double b = std::abs(x(i, j));
            const double r = std::exp(rng.uniform(-1.5, 1.5));
            const double s = rng.coin(0.3) ? 1.0 : 1.0 + rng.uniform();
            y(i, j) = b * r * s;
            y(j, i) = b / r * s;
        }
    }
    return {x, y.cast<Complex>()};
}

} // namespace

TEST(NeedsPermutation, RecursiveGetsStuckAtSecondTermThirdEntry) {
    const auto out = decompose_recursive(needs_permutation(), false);
    EXPECT_EQ(out.status, ConstructorStatus::NotApplicable);
    ASSERT_TRUE(out.stuck_at.has_value());
    EXPECT_EQ(out.stuck_at->term, 1);
    EXPECT_EQ(out.stuck_at->entry, 2);
    EXPECT_FALSE(out.stuck_at->zero_denominator);
    // First term: v_1 = x_{:,1}/sqrt(y_{1,:}), w_1 = sqrt(y_{1,:})/v_{1,1}; then y_23 - |v_12|^2 |w_13|^2.
    EXPECT_NEAR(out.stuck_at->radicand, 1.0 - 1.0 * 1.5, 1e-12);
    EXPECT_NE(out.reason.find("v_{2,3}"), std::string::npos);
}

TEST(NeedsPermutation, PermutationSearchSucceeds) {
    const auto out = decompose_recursive(needs_permutation(), true);
    ASSERT_TRUE(out.decomposed()) << out.reason;
    EXPECT_EQ(out.decomposition->terms(), 3);
    EXPECT_TRUE(verify_decomposition(*out.decomposition, needs_permutation(), 1e-8));
    EXPECT_NE(out.permutation, (std::vector<int>{0, 1, 2}));
}

TEST(NeedsPermutation, CyclicPermutationReproducesReferenceVectors) {
    // (PXP*)_{ij} = X_{perm i, perm j} with P sending e_1 -> e_3, e_2 -> e_1, e_3 -> e_2.
    const std::vector<int> perm{1, 2, 0};
    ComplexMatrix px(3, 3), py(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            px(a, b) = needs_permutation().x()(perm[a], perm[b]);
            py(a, b) = needs_permutation().y()(perm[a], perm[b]);
        }
    const auto out = decompose_recursive(PairXY(px, py), false);
    ASSERT_TRUE(out.decomposed()) << out.reason;
    ComplexMatrix v(3, 3), w(3, 3);
    v << std::sqrt(8.0), 0.0, 0.0, 1.0, std::sqrt(31.0 / 8.0), 0.0, 1.0 / std::sqrt(2.0), -3.0 * std::sqrt(3.0) / 4.0,
        4.0 * std::sqrt(3.0 / 31.0);
    w << 1.0, std::sqrt(8.0 / 31.0), 1.0 / (2.0 * std::sqrt(6.0)), 1.0 / std::sqrt(8.0), 1.0,
        std::sqrt(155.0 / 192.0), 0.5, std::sqrt(6.0 / 31.0), 1.0;
    EXPECT_LT(pcp::testing::max_abs_difference(out.decomposition->v(), v), 1e-12);
    EXPECT_LT(pcp::testing::max_abs_difference(out.decomposition->w(), w), 1e-12);
}

TEST(NeedsPermutation, ReferenceDecompositionNeedsEntryCorrection) {
    const auto doc = io::certificate_from_json(io::load_json_file(pcp::testing::data_path("needs_permutation_certificate.json")));
    EXPECT_TRUE(verify_decomposition(doc.decomposition, needs_permutation(), 1e-8));
    // With 1/sqrt(6/31) as the first entry of w_2 the certificate is far off.
    ComplexMatrix w = doc.decomposition.w();
    w(0, 1) = 1.0 / std::sqrt(6.0 / 31.0);
    EXPECT_FALSE(verify_decomposition(PcpDecomposition(doc.decomposition.v(), w), needs_permutation(), 1e-3));
    EXPECT_TRUE(verify_decomposition(doc.decomposition, load_pair("needs_permutation.json"), 1e-8));
}

TEST(ComplexDominant, ComparisonCoreMatchesReference) {
    const PairXY p = complex_dominant();
    EXPECT_GE(dominance_margin(p.x()), 0.0);
    const auto parts = comparison_factorization(p);
    EXPECT_TRUE(parts.scaling.isApprox(RealVector::Ones(3)));
    ASSERT_TRUE(parts.core.has_value());
    const double r4 = std::pow(2.0, 0.25);
    const Complex i(0, 1);
    ComplexMatrix v(3, 3), w(3, 3);
    v << 1.0, -r4, 0.0, 1.0, 0.0, i * std::sqrt(2.0), 0.0, 1.0 / r4, 1.0;
    w << 1.0, 1.0 / r4, 0.0, 1.0, 0.0, 1.0, 0.0, r4, std::sqrt(2.0);
    EXPECT_LT(pcp::testing::max_abs_difference(phase_normalized(parts.core->v()), phase_normalized(v)), 1e-9);
    EXPECT_LT(pcp::testing::max_abs_difference(phase_normalized(parts.core->w()), phase_normalized(w)), 1e-9);
    EXPECT_EQ(parts.core_columns, (std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}));

    const auto out = decompose_comparison(p);
    ASSERT_TRUE(out.decomposed()) << out.reason;
    EXPECT_TRUE(verify_decomposition(*out.decomposition, p, 1e-8));
    EXPECT_TRUE(verify_decomposition(*out.decomposition, load_pair("complex_dominant.json"), 1e-8));
}

TEST(Comparison, SweepOfScaledDominantPairs) {
    Rng rng(31);
    int failures = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const PairXY p = random_comparison_pair(rng, rng.integer(2, 6));
        const auto out = decompose_comparison(p);
        if (!out.decomposed() || !verify_decomposition(*out.decomposition, p, 1e-8)) {
            ++failures;
            ADD_FAILURE() << "trial " << trial << ": " << out.reason;
        }
    }
    EXPECT_EQ(failures, 0);
}

TEST(Comparison, PerronScalingMakesDominant) {
    Rng rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const PairXY p = random_comparison_pair(rng, rng.integer(2, 7));
        const RealVector d = perron_scaling(p.x());
        EXPECT_TRUE((d.array() > 0.0).all());
        EXPECT_NEAR(d.maxCoeff(), 1.0, 1e-12);
        const ComplexMatrix dm = d.cast<Complex>().asDiagonal();
        EXPECT_GE(dominance_margin(dm * p.x() * dm), -1e-9 * std::max(1.0, max_abs_entry(p.x())));
    }
}

TEST(Comparison, RejectsNonMMatrix) {
    try {
        perron_scaling(all_ones(3));
        FAIL() << "expected ComparisonNotPsd";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ComparisonNotPsd);
    }
    EXPECT_EQ(decompose_comparison(PairXY(all_ones(3), all_ones(3))).status, ConstructorStatus::NotApplicable);
}

TEST(TwoByTwo, CompleteOnConditionsAThroughD) {
    Rng rng(33);
    for (int trial = 0; trial < 500; ++trial) {
        const PairXY p = pcp::testing::random_2x2_pair(rng);
        ASSERT_TRUE(check_necessary(p).holds_through(Condition::EntryBound));
        const auto out = decompose_2x2(p);
        ASSERT_TRUE(out.decomposed()) << "trial " << trial << ": " << out.reason;
        EXPECT_TRUE(verify_decomposition(*out.decomposition, p, 1e-8));
    }
}

TEST(TwoByTwo, ViolationAndDimension) {
    ComplexMatrix x(2, 2), y(2, 2);
    x << 1, 1, 1, 1;
    y << 1, 0.5, 0.5, 1;
    EXPECT_EQ(decompose_2x2({x, y}).status, ConstructorStatus::ConditionsViolated);
    EXPECT_THROW(decompose_2x2(needs_permutation()), Error);
}

TEST(Diagonal, SquareRootTerms) {
    ComplexMatrix x = ComplexMatrix::Zero(3, 3);
    x.diagonal() << 1.0, 2.0, 0.0;
    RealMatrix y(3, 3);
    y << 1.0, 4.0, 0.0, 0.25, 2.0, 9.0, 1.0, 0.0, 0.0;
    const auto out = decompose_diagonal_x({x, y.cast<Complex>()});
    ASSERT_TRUE(out.decomposed()) << out.reason;
    EXPECT_TRUE(verify_decomposition(*out.decomposition, {x, y.cast<Complex>()}, 1e-12));
    EXPECT_EQ(decompose_diagonal_x(needs_permutation()).status, ConstructorStatus::NotApplicable);
}

TEST(Recursive, SuccessAlwaysVerifies) {
    Rng rng(34);
    int decomposed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = pcp::testing::random_decomposition(rng, 3, rng.integer(1, 3), 0.0);
        const PairXY p = reconstruct(d);
        const auto out = decompose_recursive(p, true);
        if (out.decomposed()) {
            ++decomposed;
            EXPECT_TRUE(verify_decomposition(*out.decomposition, p, 1e-8));
            EXPECT_LE(out.decomposition->terms(), 3);
        }
    }
    EXPECT_GT(decomposed, 0);
}

TEST(Recursive, ReportsViolatedConditions) {
    PairXY p(-ComplexMatrix::Identity(2, 2), -ComplexMatrix::Identity(2, 2));
    EXPECT_EQ(decompose_recursive(p, false).status, ConstructorStatus::ConditionsViolated);
}

TEST(Isotropic, ConstantIdentities) {
    for (int n = 1; n <= 12; ++n) {
        const auto c = isotropic_constants(n);
        EXPECT_NEAR(c.c_plus * c.c_minus, n - 1.0, 1e-10);
        EXPECT_NEAR(c.c_plus * c.c_plus + c.c_minus * c.c_minus, n * n - n + 2.0, 1e-10);
    }
}

TEST(Isotropic, GridVerifies) {
    for (int n = 2; n <= 6; ++n) {
        for (double a : {1.0, 2.5}) {
            for (double b : {-a / n, -a / (2.0 * n), 0.0, a / 2.0, a}) {
                const auto out = decompose_isotropic(n, a, b);
                ASSERT_TRUE(out.decomposed()) << n << " " << a << " " << b << ": " << out.reason;
                EXPECT_TRUE(verify_decomposition(*out.decomposition, isotropic_pair(n, a, b), 1e-8));
            }
        }
    }
}

TEST(Isotropic, EndpointUsesClosedFormVectors) {
    // a = n, b = -1: v_k = ((c+ - 1) e_k + 1)/sqrt n, w_k = (c- + 1) e_k - 1.
    const int n = 4;
    const auto c = isotropic_constants(n);
    ComplexMatrix v = ComplexMatrix::Ones(n, n), w = -ComplexMatrix::Ones(n, n);
    v.diagonal().array() += c.c_plus - 1.0;
    v /= std::sqrt(static_cast<double>(n));
    w.diagonal().array() += c.c_minus + 1.0;
    EXPECT_TRUE(verify_decomposition(PcpDecomposition(v, w), isotropic_pair(n, n, -1.0), 1e-12));
}

TEST(Isotropic, OutsideRangeIsViolated) {
    for (int n = 2; n <= 5; ++n) {
        EXPECT_EQ(decompose_isotropic(n, 1.0, 1.01).status, ConstructorStatus::ConditionsViolated);
        EXPECT_EQ(decompose_isotropic(n, 1.0, -1.0 / n - 0.01).status, ConstructorStatus::ConditionsViolated);
        // The pair itself fails a necessary condition there.
        EXPECT_FALSE(check_necessary(isotropic_pair(n, 1.0, 1.01)).holds_all());
        EXPECT_FALSE(check_necessary(isotropic_pair(n, 1.0, -1.0 / n - 0.01)).holds_all());
    }
}

TEST(Auto, DispatchesAndCollectsAttempts) {
    auto out = decompose_auto(needs_permutation());
    EXPECT_TRUE(out.decomposed());
    EXPECT_FALSE(out.attempts.empty());

    ComplexMatrix y(3, 3);
    y << 1, 2, 0.5, 0.5, 1, 2, 2, 0.5, 1;
    out = decompose_auto({all_ones(3), y});
    EXPECT_EQ(out.status, ConstructorStatus::NotApplicable);
    EXPECT_NE(out.reason.find("(e)"), std::string::npos);

    out = decompose_auto(load_pair("inconclusive_n3.json"));
    EXPECT_EQ(out.status, ConstructorStatus::NotApplicable);
    EXPECT_EQ(out.attempts.size(), 2u);
}
