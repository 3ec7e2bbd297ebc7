#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cycle4/region_algebra.hpp"

using namespace cycle4;

TEST(EvalG, Examples) {
    EXPECT_EQ(eval_G(0.0, 1.0), 0.0);
    EXPECT_EQ(eval_G(0.0, 0.0), 0.0);
    EXPECT_NEAR(eval_G(0.2, 0.4), 0.08, 1e-15);
}

TEST(EvalN, Examples) {
    EXPECT_EQ(eval_N(0.0, 0.0), 0.0);
    EXPECT_NEAR(eval_N(0.5, 0.5), -0.5, 1e-15);
    EXPECT_NEAR(eval_N(0.1, 0.3), 0.028, 1e-15);
}

TEST(EvalN, AffineInBSquaredWithSlopeOneMinusFourA) {
    for (double a : {-0.3, 0.0, 0.1, 0.25, 0.7}) {
        const double n0 = eval_N(a, 0.0);
        for (double b : {0.1, 0.5, 1.3}) {
            EXPECT_NEAR(eval_N(a, b), n0 + (1.0 - 4.0 * a) * b * b, 1e-14);
        }
    }
}

TEST(Discriminant, Examples) {
    EXPECT_NEAR(discriminant(1.0 / 6.0), 0.0, 1e-15);
    EXPECT_EQ(discriminant(-0.5), 0.0);
    EXPECT_EQ(discriminant(0.0), 1.0);
}

TEST(SMinus, Examples) {
    EXPECT_EQ(s_minus(0.0), 0.0);
    // mpmath: 0.04358983848622454129...
    EXPECT_NEAR(s_minus(0.1), 0.04358983848622454, 1e-16);
    EXPECT_THROW(s_minus(0.2), DomainError);
}

TEST(SMinus, IsARootOfG) {
    for (double a : {0.01, 0.05, 0.1, 0.15}) {
        EXPECT_NEAR(eval_G(a, std::sqrt(s_minus(a))), 0.0, 1e-15);
        EXPECT_NEAR(eval_G(a, std::sqrt(s_plus(a))), 0.0, 1e-14);
    }
}

TEST(SZero, Examples) {
    EXPECT_EQ(s_zero(0.0), 0.0);
    EXPECT_NEAR(s_zero(0.1), 0.043333333333333333, 1e-16);
    EXPECT_LT(s_zero(0.1), s_minus(0.1));
    EXPECT_THROW(s_zero(0.25), DomainError);
    EXPECT_NEAR(eval_N(0.1, std::sqrt(s_zero(0.1))), 0.0, 1e-16);
}

TEST(FactorizationResidual, Examples) {
    EXPECT_EQ(factorization_residual(0.0, 1.0), 0.0);
    EXPECT_NEAR(factorization_residual(0.5, 0.5), 0.0, 1e-16);
    EXPECT_EQ(factorization_residual(0.0, 0.0), 0.0);
}

TEST(RegionAlgebraProperty, FactorizationVanishesOnBox) {
    std::mt19937_64 gen(20261015);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int i = 0; i < 20000; ++i) {
        const double a = box(gen);
        const double b = box(gen);
        const double r = a * a + b * b;
        EXPECT_LE(std::fabs(factorization_residual(a, b)), 1e-12 * std::max(1.0, r * r * r)) << a << ", " << b;
    }
}

TEST(RegionAlgebraProperty, SMinusDominatesOnOpenRange) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> range(1e-4, 1.0 / 6.0);
    for (int i = 0; i < 5000; ++i) {
        const double a = range(gen);
        EXPECT_GT(s_minus(a), s_zero(a)) << a;
        EXPECT_GT(s_minus(a), 3.0 * a * a) << a;
    }
}

TEST(RegionAlgebraProperty, SixthPowerIdentity) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> range(0.0, 1.0 / 6.0);
    for (int i = 0; i < 5000; ++i) {
        const double a = range(gen);
        const double p = 1.0 - 6.0 * a + 16.0 * a * a * a;
        const double lhs = p * p - (1.0 - 4.0 * a) * (1.0 - 4.0 * a) * discriminant(a);
        // Terms are O(1); the difference is compared on that scale.
        EXPECT_NEAR(lhs, 256.0 * std::pow(a, 6), 1e-12 * std::max(1.0, p * p)) << a;
    }
}

TEST(RegionAlgebraProperty, GRFormAgrees) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int i = 0; i < 20000; ++i) {
        const double a = box(gen);
        const double b = box(gen);
        const double r = a * a + b * b;
        const double scale = std::max({1.0, r * r, std::fabs((2 * a - 1) * r), 4 * a * a});
        EXPECT_LE(std::fabs(eval_G(a, b) - eval_G_rform(a, b)), 1e-12 * scale);
    }
}

TEST(Classify, Examples) {
    EXPECT_EQ(classify({0.5, 0.5}).kind, RegionKind::RightEdge);
    EXPECT_EQ(classify({0.2, 0.4}).kind, RegionKind::Interior);

    const RegionVerdict out = classify({0.0, 0.5});
    EXPECT_EQ(out.kind, RegionKind::Exterior);
    ASSERT_EQ(out.violated.size(), 1u);
    EXPECT_EQ(out.violated[0], Constraint::GSign);
    EXPECT_NEAR(out.margins.g_value, -0.1875, 1e-16);
}

TEST(Classify, CornerPrefersRightEdge) {
    EXPECT_EQ(classify({0.0, 1.0}).kind, RegionKind::RightEdge);
    EXPECT_EQ(classify({1e-12, 1.0}).kind, RegionKind::RightEdge);
}

TEST(Classify, LeftCurveBand) {
    // Nonreal eigenvalue of A(0.5, 0, 0, 0) to 16 digits (mpmath).
    const SpectralPoint p(0.1194918107522531, 0.8138345589017524);
    EXPECT_EQ(classify(p).kind, RegionKind::LeftCurve);
}

TEST(Classify, RealAxisAndRanges) {
    EXPECT_EQ(classify({0.3, 0.0}).kind, RegionKind::RealAxis);
    EXPECT_EQ(classify({0.3, 5e-11}).kind, RegionKind::RealAxis);

    const RegionVerdict near_one = classify({1.0 - 1e-10, 1e-3});
    EXPECT_EQ(near_one.kind, RegionKind::Exterior);
    EXPECT_EQ(near_one.violated.front(), Constraint::ARange);

    const RegionVerdict all = classify({-0.5, 1.8});
    EXPECT_EQ(all.kind, RegionKind::Exterior);
    EXPECT_EQ(all.violated.size(), 2u);  // ARange and RightEdge; G(-0.5, 1.8) > 0

    const RegionVerdict far = classify({0.9, 0.5});
    ASSERT_EQ(far.violated.size(), 1u);
    EXPECT_EQ(far.violated[0], Constraint::RightEdge);
}

TEST(Classify, RejectsNonPositiveTolerances) {
    EXPECT_THROW(classify({0.2, 0.4}, {0.0, 1e-10}), DomainError);
}

TEST(ClassifyProperty, ConjugationInvariantAndConsistent) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> box(-0.5, 1.5);
    for (int i = 0; i < 20000; ++i) {
        const double a = box(gen);
        const double b = box(gen);
        const RegionVerdict up = classify({a, b});
        const RegionVerdict down = classify({a, -b});
        EXPECT_EQ(up.kind, down.kind);
        EXPECT_EQ(up.violated, down.violated);
        EXPECT_EQ(up.kind == RegionKind::Exterior, !up.violated.empty());
        if (up.kind == RegionKind::Interior) {
            EXPECT_GT(up.margins.g_value, 1e-9);
            EXPECT_GT(up.margins.right_slack, 1e-9);
            EXPECT_GE(a, 0.0);
            EXPECT_LE(a, 1.0);
        }
    }
}

TEST(SpectralPoint, DerivedFields) {
    const SpectralPoint p(0.3, -0.4);
    EXPECT_EQ(p.b_plus, 0.4);
    EXPECT_NEAR(p.r, 0.25, 1e-16);
    EXPECT_EQ(p.conjugate().b, 0.4);
}
