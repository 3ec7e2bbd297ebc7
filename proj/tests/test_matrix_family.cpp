#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "cycle4/matrix_family.hpp"
#include "cycle4/region_algebra.hpp"

using namespace cycle4;

namespace {

Eigen::Matrix4d matrix_of(const MatrixParams& p) {
    const auto d = p.as_array();
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 4; ++k) {
        m(k, k) = d[k];
        m(k, (k + 1) % 4) = 1.0 - d[k];
    }
    return m;
}

/// Max over oracle eigenvalues of the distance to the closest computed root.
double spectrum_distance(const Spectrum& s, const MatrixParams& p) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(matrix_of(p));
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
        worst = std::max(worst, nearest_eigenvalue_distance(s, es.eigenvalues()[k]));
    }
    return worst;
}

bool contains(const Spectrum& s, Complex z, double tol) { return nearest_eigenvalue_distance(s, z) <= tol; }

int nonreal_count(const Spectrum& s) {
    return static_cast<int>(std::count_if(s.roots.begin(), s.roots.end(),
                                          [](const Complex& r) { return std::fabs(r.imag()) > 1e-10; }));
}

} // namespace

TEST(Gaps, Examples) {
    EXPECT_EQ(gaps_of({0, 0, 0, 0}).as_array(), (std::array<double, 4>{1, 1, 1, 1}));
    EXPECT_EQ(gaps_of({0.5, 0.5, 0.5, 0.5}).as_array(), (std::array<double, 4>{0.5, 0.5, 0.5, 0.5}));
    EXPECT_EQ(gaps_of({0.25, 0.5, 0.75, 0}).as_array(), (std::array<double, 4>{0.75, 0.5, 0.25, 1}));
}

TEST(Gaps, RoundTripIsBitExact) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0 - 1e-12);
    for (int i = 0; i < 10000; ++i) {
        const MatrixParams p(u(gen), u(gen), u(gen), u(gen));
        EXPECT_EQ(params_of(gaps_of(p)), p);
    }
}

TEST(Gaps, DomainErrors) {
    EXPECT_THROW(MatrixParams(1.0, 0, 0, 0), DomainError);
    EXPECT_THROW(MatrixParams(-0.1, 0, 0, 0), DomainError);
    EXPECT_THROW(MatrixParams(0, 0, 0, 1.0 - 1e-13), DomainError);
    EXPECT_THROW(MatrixParams(0, std::nan(""), 0, 0), DomainError);
    EXPECT_THROW(GapParams(0.0, 1, 1, 1), DomainError);
    EXPECT_THROW(GapParams(1.5, 1, 1, 1), DomainError);
    EXPECT_NO_THROW(GapParams(1e-12, 1, 1, 1));
}

TEST(CharPoly, Examples) {
    EXPECT_EQ(char_poly({0, 0, 0, 0}), (std::array<double, 5>{1, 0, 0, 0, -1}));
    const auto half = char_poly({0.5, 0.5, 0.5, 0.5});
    const std::array<double, 5> half_expected{1, -2, 1.5, -0.5, 0};
    for (int k = 0; k < 5; ++k) {
        EXPECT_NEAR(half[k], half_expected[k], 1e-15);
    }
    const auto al = char_poly({0.5, 0, 0, 0});
    const std::array<double, 5> al_expected{1, -0.5, 0, 0, -0.5};
    for (int k = 0; k < 5; ++k) {
        EXPECT_NEAR(al[k], al_expected[k], 1e-15);
    }
}

TEST(CharPoly, OneIsARoot) {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.0, 0.999);
    for (int i = 0; i < 5000; ++i) {
        const auto c = char_poly({u(gen), u(gen), u(gen), u(gen)});
        EXPECT_LE(std::fabs(c[0] + c[1] + c[2] + c[3] + c[4]), 1e-14);
    }
}

TEST(SolveCubic, BothBranches) {
    // (w - 1)(w - 2)(w - 3)
    auto r = solve_cubic(-6.0, 11.0, -6.0);
    std::array<double, 3> re{r[0].real(), r[1].real(), r[2].real()};
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], 1.0, 1e-12);
    EXPECT_NEAR(re[1], 2.0, 1e-12);
    EXPECT_NEAR(re[2], 3.0, 1e-12);
    // (w + 2)(w^2 + 2w + 2)
    r = solve_cubic(4.0, 6.0, 4.0);
    EXPECT_NEAR(r[0].real(), -2.0, 1e-12);
    EXPECT_NEAR(std::abs(r[1] - Complex(-1, 1)), 0.0, 1e-12);
    EXPECT_EQ(r[2], std::conj(r[1]));
    // Triple root.
    r = solve_cubic(-3.0, 3.0, -1.0);
    EXPECT_NEAR(r[0].real(), 1.0, 1e-12);
}

TEST(Eigenvalues, FourthRootsOfUnity) {
    const Spectrum s = eigenvalues({0, 0, 0, 0});
    EXPECT_EQ(s.roots[0], Complex(1.0, 0.0));
    for (Complex z : {Complex(0, 1), Complex(-1, 0), Complex(0, -1)}) {
        EXPECT_TRUE(contains(s, z, 1e-14)) << z;
    }
}

TEST(Eigenvalues, AllHalf) {
    const Spectrum s = eigenvalues({0.5, 0.5, 0.5, 0.5});
    for (Complex z : {Complex(1, 0), Complex(0.5, 0.5), Complex(0, 0), Complex(0.5, -0.5)}) {
        EXPECT_TRUE(contains(s, z, 1e-14)) << z;
    }
}

TEST(Eigenvalues, LeftFamilyPairSitsOnGZero) {
    const Spectrum s = eigenvalues({0.5, 0, 0, 0});
    // mpmath roots of lambda^3 + 0.5(lambda^2 + lambda + 1).
    EXPECT_TRUE(contains(s, Complex(-0.7389836215045062, 0), 1e-14));
    EXPECT_TRUE(contains(s, Complex(0.1194918107522531, 0.8138345589017524), 1e-14));
    for (const Complex& r : s.roots) {
        if (std::fabs(r.imag()) > 1e-10) {
            EXPECT_LE(std::fabs(eval_G(r.real(), std::fabs(r.imag()))), 1e-9);
        }
    }
}

TEST(EigenvaluesProperty, AgreesWithGeneralEigensolver) {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0 - 1e-6);
    for (int i = 0; i < 20000; ++i) {
        const MatrixParams p(u(gen), u(gen), u(gen), u(gen));
        const Spectrum s = eigenvalues(p);
        EXPECT_EQ(s.roots[0], Complex(1.0, 0.0));
        for (double res : s.residuals) {
            EXPECT_LE(res, kResidualTol);
        }
        // Eigenvalues of clustered (near-identity) matrices are ill-conditioned
        // for the dense solver as well; compare at its own accuracy.
        EXPECT_LE(spectrum_distance(s, p), 1e-7) << i;
    }
}

TEST(EigenvaluesProperty, ConjugatePairsAndRegionNecessity) {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(0.0, 1.0 - 1e-6);
    for (int i = 0; i < 20000; ++i) {
        const MatrixParams p(u(gen), u(gen), u(gen), u(gen));
        const Spectrum s = eigenvalues(p);
        for (const Complex& r : s.roots) {
            if (std::fabs(r.imag()) > 1e-10) {
                EXPECT_TRUE(contains(s, std::conj(r), 0.0));
                EXPECT_NE(classify({r.real(), r.imag()}).kind, RegionKind::Exterior) << r;
                const Eigvec e = eigenvector(p, r);
                EXPECT_LE(e.closure_residual, 1e-8);
            }
        }
    }
}

TEST(EigenvaluesProperty, LeftFamilyHasExactlyOnePair) {
    for (int k = 0; k < 1000; ++k) {
        const double alpha = 0.999 * k / 999.0;
        EXPECT_EQ(nonreal_count(eigenvalues({alpha, 0, 0, 0})), 2) << alpha;
    }
}

TEST(Eigenvector, Examples) {
    const Eigvec e = eigenvector({0, 0, 0, 0}, Complex(0, 1));
    const std::array<Complex, 4> want{Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(e.v[k] - want[k]), 0.0, 1e-15);
    }
    EXPECT_EQ(e.closure_residual, 0.0);

    const Eigvec c = eigenvector({0, 0, 0, 0}, Complex(0, -1));
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(c.v[k] - std::conj(want[k])), 0.0, 1e-15);
    }
    EXPECT_THROW(eigenvector({0.5, 0.5, 0.5, 0.5}, Complex(0.7, 0.7)), NotAnEigenvalue);
    EXPECT_THROW(eigenvector({0.5, 0.5, 0.5, 0.5}, Complex(0.5, 0.0)), DomainError);
}

TEST(Eigenvector, NoZeroEntriesForNonrealEigenvalue) {
    const MatrixParams p(0.3, 0.6, 0.1, 0.8);
    for (const Complex& r : eigenvalues(p).roots) {
        if (std::fabs(r.imag()) > 1e-10) {
            const Eigvec e = eigenvector(p, r);
            EXPECT_EQ(e.v[0], Complex(1.0, 0.0));
            for (const Complex& v : e.v) {
                EXPECT_GT(std::abs(v), 0.0);
            }
        }
    }
}

TEST(AlAlpha, Examples) {
    EXPECT_NEAR(std::abs(al_alpha_of(Complex(0, 1))), 0.0, 1e-15);

    const Spectrum s = eigenvalues({0.5, 0, 0, 0});
    for (const Complex& r : s.roots) {
        if (std::fabs(r.imag()) > 1e-10) {
            const Complex alpha = al_alpha_of(r);
            EXPECT_NEAR(alpha.real(), 0.5, 1e-12);
            EXPECT_LE(std::fabs(alpha.imag()), 1e-12);
        }
    }

    // mpmath: (0.92972972972972972973, 0.021621621621621621622)
    const Complex v = al_alpha_of(Complex(0.2, 0.4));
    EXPECT_NEAR(v.real(), 0.92972972972972973, 1e-15);
    EXPECT_NEAR(v.imag(), 0.021621621621621622, 1e-15);
    const Complex l(0.2, 0.4);
    EXPECT_NEAR(v.imag() * std::norm(l * l * l - 1.0), 0.4 * std::norm(l - 1.0) * eval_G(0.2, 0.4), 1e-15);

    EXPECT_THROW(al_alpha_of(Complex(1.0, 0.0)), DomainError);
}

TEST(AlAlphaProperty, ImaginaryPartTracksG) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        const Complex l(u(gen), 1e-3 + (1.0 - 1e-3) * u(gen));
        const double den = std::norm(l * l * l - 1.0);
        const double lhs = al_alpha_of(l).imag() * den;
        const double rhs = l.imag() * std::norm(l - 1.0) * eval_G(l.real(), l.imag());
        const double scale = std::max(1.0, std::abs(l * l * l * l - 1.0) * std::sqrt(den));
        EXPECT_LE(std::fabs(lhs - rhs), 1e-10 * scale) << l;
    }
}
