#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

/**
 * @file region_algebra.hpp
 * @brief Closed-form predicates for the nonreal spectral region of the
 *        4-cycle row-stochastic family, plus the polynomial algebra behind them.
 *
 * A nonreal eigenvalue lambda = a + ib of
 *
 *     [ alpha  1-alpha  0        0       ]
 *     [ 0      beta     1-beta   0       ]
 *     [ 0      0        gamma    1-gamma ]
 *     [ 1-delta 0       0        delta   ]
 *
 * satisfies 0 <= a <= 1, a + |b| <= 1 and G(a, |b|) >= 0, where
 *
 *     G(a, b) = (b^2 + a^2 + a)^2 + 2a^2 - b^2.
 *
 * Every point strictly inside those constraints is attained.
 */

namespace cycle4 {

/// Candidate eigenvalue lambda = a + ib together with |b| and |lambda|^2.
struct SpectralPoint {
    double a{};
    double b{};
    double b_plus{};
    double r{};

    SpectralPoint() = default;
    SpectralPoint(double re, double im) : a(re), b(im), b_plus(std::fabs(im)), r(re * re + im * im) {}

    [[nodiscard]] SpectralPoint conjugate() const { return {a, -b}; }
};

inline double eval_G(double a, double b) {
    const double s = b * b + a * a + a;
    return s * s + 2.0 * a * a - b * b;
}

/// G written in r = a^2 + b^2: r^2 + (2a - 1) r + 4a^2.
inline double eval_G_rform(double a, double b) {
    const double r = a * a + b * b;
    return r * r + (2.0 * a - 1.0) * r + 4.0 * a * a;
}

inline double eval_N(double a, double b) {
    return 4.0 * a * a * a - 3.0 * a * a - 4.0 * a * b * b + b * b;
}

/// Discriminant of G as a quadratic in s = b^2; positive iff -1/2 < a < 1/6.
inline double discriminant(double a) {
    return 1.0 - 4.0 * a - 12.0 * a * a;
}

/// Smaller root in s = b^2 of G(a, sqrt(s)) = 0.
inline double s_minus(double a) {
    if (!(discriminant(a) >= 0.0)) {
        throw DomainError("s_minus: discriminant negative for a = " + std::to_string(a));
    }
    // Product of the roots is (a^2 + a)^2 + 2a^2; dividing by the larger root
    // avoids the cancellation in 1 - sqrt(...) for small a.
    const double half_sum = 0.5 * (1.0 - 2.0 * a - 2.0 * a * a);
    const double half_sqrt = 0.5 * std::sqrt((2.0 * a + 1.0) * (1.0 - 6.0 * a));
    const double s_plus = half_sum + half_sqrt;
    const double product = (a * a + a) * (a * a + a) + 2.0 * a * a;
    if (s_plus <= 0.0) {
        return half_sum - half_sqrt;
    }
    return product / s_plus;
}

/// Larger root in s = b^2 of G(a, sqrt(s)) = 0.
inline double s_plus(double a) {
    if (!(discriminant(a) >= 0.0)) {
        throw DomainError("s_plus: discriminant negative for a = " + std::to_string(a));
    }
    return 0.5 * (1.0 - 2.0 * a - 2.0 * a * a) + 0.5 * std::sqrt((2.0 * a + 1.0) * (1.0 - 6.0 * a));
}

/// Root in s = b^2 of N(a, sqrt(s)), valid while the slope 1 - 4a is positive.
inline double s_zero(double a) {
    if (!(a >= 0.0 && a < 0.25)) {
        throw DomainError("s_zero: requires 0 <= a < 1/4, got a = " + std::to_string(a));
    }
    return a * a * (3.0 - 4.0 * a) / (1.0 - 4.0 * a);
}

/// |lambda|^6 - N - |lambda - 1|^2 G, identically zero.
inline double factorization_residual(double a, double b) {
    const double r = a * a + b * b;
    const double dist_one = (a - 1.0) * (a - 1.0) + b * b;
    return r * r * r - eval_N(a, b) - dist_one * eval_G(a, b);
}

enum class RegionKind { Interior, RightEdge, LeftCurve, RealAxis, Exterior };
enum class Constraint { ARange, RightEdge, GSign };

struct RegionMargins {
    double g_value{};
    double right_slack{};
    double a{};
};

struct RegionVerdict {
    RegionKind kind{RegionKind::Exterior};
    std::vector<Constraint> violated;
    RegionMargins margins;
};

struct Tolerances {
    double eps_band = 1e-9;
    double eps_real = 1e-10;
};

inline RegionVerdict classify(const SpectralPoint& p, const Tolerances& tol = {}) {
    if (!(tol.eps_band > 0.0) || !(tol.eps_real > 0.0)) {
        throw DomainError("classify: tolerances must be positive");
    }
    RegionVerdict v;
    v.margins = {eval_G(p.a, p.b_plus), 1.0 - p.a - p.b_plus, p.a};

    if (p.b_plus <= tol.eps_real) {
        v.kind = RegionKind::RealAxis;
        return v;
    }

    // a < 1 holds strictly for nonreal eigenvalues and nothing realizes a in
    // [1 - eps_band, 1]; slightly negative a is root-finder noise near i.
    if (p.a < -tol.eps_band || p.a >= 1.0 - tol.eps_band) {
        v.violated.push_back(Constraint::ARange);
    }
    if (v.margins.right_slack < -tol.eps_band) {
        v.violated.push_back(Constraint::RightEdge);
    }
    if (v.margins.g_value < -tol.eps_band) {
        v.violated.push_back(Constraint::GSign);
    }
    if (!v.violated.empty()) {
        v.kind = RegionKind::Exterior;
    } else if (std::fabs(v.margins.right_slack) <= tol.eps_band) {
        v.kind = RegionKind::RightEdge;
    } else if (std::fabs(v.margins.g_value) <= tol.eps_band || p.a < 0.0) {
        v.kind = RegionKind::LeftCurve;
    } else {
        v.kind = RegionKind::Interior;
    }
    return v;
}

inline const char* to_string(RegionKind k) {
    switch (k) {
        case RegionKind::Interior: return "Interior";
        case RegionKind::RightEdge: return "RightEdge";
        case RegionKind::LeftCurve: return "LeftCurve";
        case RegionKind::RealAxis: return "RealAxis";
        case RegionKind::Exterior: return "Exterior";
    }
    return "?";
}

inline const char* to_string(Constraint c) {
    switch (c) {
        case Constraint::ARange: return "ARange";
        case Constraint::RightEdge: return "RightEdge";
        case Constraint::GSign: return "GSign";
    }
    return "?";
}

} // namespace cycle4
