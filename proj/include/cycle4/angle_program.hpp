#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "region_algebra.hpp"

/**
 * @file angle_program.hpp
 * @brief Trigonometric reformulation of the eigenvalue condition.
 *
 * With z = lambda - 1 = x + iy (y > 0) the eigenvalue equation is
 * prod(z + t_k) = prod(t_k) for gaps t_k in (0, 1]. Each gap maps to the
 * angle u = Arg(z + t) in [m, M), m = Arg(lambda), M = Arg(lambda - 1), with
 * inverse t(u) = y cot(u) - x. The condition becomes
 *
 *     u1 + u2 + u3 + u4 = 2*pi,    sum F(u_k) = 0,
 *     F(u) = log(y csc u) - log(y cot u - x),
 *
 * and F is strictly convex on [m, M).
 */

namespace cycle4 {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Regime { Tight, Unbounded };

/// Per-lambda geometry for the angle program. Only valid for b > 0, 0 <= a < 1.
struct AngleFrame {
    SpectralPoint lambda;
    double x{};
    double y{};
    double m{};
    double M{};
    Regime regime{Regime::Unbounded};
    double U{std::numeric_limits<double>::quiet_NaN()};

    [[nodiscard]] bool tight() const { return regime == Regime::Tight; }
};

inline AngleFrame build_frame(const SpectralPoint& p) {
    if (!(p.b > 0.0)) {
        throw DomainError("build_frame: requires b > 0");
    }
    if (!(p.a >= 0.0 && p.a < 1.0)) {
        throw DomainError("build_frame: requires 0 <= a < 1");
    }
    AngleFrame f;
    f.lambda = p;
    f.x = p.a - 1.0;
    f.y = p.b;
    f.m = std::atan2(p.b, p.a);
    f.M = std::atan2(p.b, p.a - 1.0);
    // 3m + M = 2*pi counts as unbounded.
    const double U = kTwoPi - 3.0 * f.m;
    if (U < f.M) {
        f.regime = Regime::Tight;
        f.U = U;
    }
    return f;
}

namespace detail {

inline void require_half_open(const AngleFrame& f, double u, const char* who) {
    if (!(u >= f.m && u < f.M)) {
        throw DomainError(std::string(who) + ": angle outside [m, M)");
    }
}

} // namespace detail

/// Gap whose angle is u: y cot(u) - x. Decreases from 1 at u = m toward 0 as u -> M.
inline double t_of_u(const AngleFrame& f, double u) {
    detail::require_half_open(f, u, "t_of_u");
    return f.y / std::tan(u) - f.x;
}

/// Angle of z + t, inverse of t_of_u.
inline double u_of_t(const AngleFrame& f, double t) {
    if (!(t > 0.0)) {
        throw DomainError("u_of_t: requires t > 0");
    }
    return std::atan2(f.y, f.x + t);
}

/// F saturates to +inf once t(u) drops below this.
inline constexpr double kTinyGap = 1e-300;

inline double F(const AngleFrame& f, double u) {
    detail::require_half_open(f, u, "F");
    const double t = f.y / std::tan(u) - f.x;
    if (!(t >= kTinyGap)) {
        return std::numeric_limits<double>::infinity();
    }
    return std::log(f.y / std::sin(u)) - std::log(t);
}

inline double F_second(const AngleFrame& f, double u) {
    // u = m is allowed: for lambda = i the natural test point pi/2 is m.
    detail::require_half_open(f, u, "F_second");
    const double t = f.y / std::tan(u) - f.x;
    const double s = std::sin(u);
    return (f.x * f.x + f.y * f.y) / (t * t * s * s);
}

/// Four angles in [m, M) summing to 2*pi.
struct AngleVector {
    std::array<double, 4> u{};
};

inline constexpr double kAngleSumTol = 1e-12;

inline bool feasible(const AngleFrame& f, const AngleVector& v) {
    double sum = 0.0;
    for (double u : v.u) {
        if (!(u >= f.m && u < f.M)) {
            return false;
        }
        sum += u;
    }
    return std::fabs(sum - kTwoPi) <= kAngleSumTol;
}

inline double psi(const AngleFrame& f, const AngleVector& v) {
    double sum = 0.0;
    for (double u : v.u) {
        sum += u;
    }
    if (!(std::fabs(sum - kTwoPi) <= kAngleSumTol)) {
        throw DomainError("psi: angles do not sum to 2*pi");
    }
    double total = 0.0;
    for (double u : v.u) {
        total += F(f, u);
    }
    return total;
}

/// max over the feasible set of psi, attained at (U, m, m, m).
inline double max_psi_tight(const AngleFrame& f) {
    if (!f.tight()) {
        throw RegimeError("max_psi_tight: frame is in the unbounded regime");
    }
    return 3.0 * F(f, f.m) + F(f, f.U);
}

/// Same maximum through the algebraic route log(|lambda|^6 / N(a, b)).
inline double max_psi_closed_form(const SpectralPoint& p) {
    const double n = eval_N(p.a, p.b_plus);
    if (!(n > 0.0)) {
        throw DomainError("max_psi_closed_form: N(a, b) must be positive");
    }
    return std::log(p.r * p.r * p.r / n);
}

/// tan(3m) - b / (1 - a) from the triple-angle closed form; positive iff tight.
/// Valid for a > 0 and b^2 > 3a^2.
inline double regime_witness(const AngleFrame& f) {
    const double a = f.lambda.a;
    const double b = f.lambda.b;
    if (!(a > 0.0) || !(b * b > 3.0 * a * a)) {
        throw DomainError("regime_witness: requires a > 0 and b^2 > 3a^2");
    }
    const double tan3m = b * (b * b - 3.0 * a * a) / (a * (3.0 * b * b - a * a));
    return tan3m - b / (1.0 - a);
}

} // namespace cycle4
