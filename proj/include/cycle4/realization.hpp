#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "angle_program.hpp"
#include "errors.hpp"
#include "matrix_family.hpp"
#include "region_algebra.hpp"

/**
 * @file realization.hpp
 * @brief Inverse eigenvalue solver: parameters (alpha, beta, gamma, delta)
 *        that place a given admissible lambda in the spectrum.
 *
 * Boundary points use closed forms: the right edge lambda = (1 - x) + ix is
 * the eigenvalue of the all-equal matrix with parameter 1 - x, and the left
 * curve G = 0 is traced by A(alpha, 0, 0, 0). Strict interior points are
 * found by bisection on psi along a segment in the feasible angle set from a
 * point where psi < 0 to a point where psi > 0.
 */

namespace cycle4 {

enum class Method { InteriorIVT, RightEdge, LeftCurve };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::InteriorIVT: return "InteriorIVT";
        case Method::RightEdge: return "RightEdge";
        case Method::LeftCurve: return "LeftCurve";
    }
    return "?";
}

struct RealizationCertificate {
    SpectralPoint target;
    MatrixParams params;
    GapParams gaps;
    std::optional<AngleVector> angles;
    Method method{Method::InteriorIVT};
    double eig_residual{};
    double psi_residual{};
};

/// Thrown by realize() for points outside the closed region or on the real axis.
struct OutsideRegion : Error {
    OutsideRegion(const std::string& what, std::vector<Constraint> v) : Error(what), violated(std::move(v)) {}
    std::vector<Constraint> violated;
};

struct RealizeOptions {
    Tolerances tol{};
    double eig_tol = 1e-8;
    double psi_tol = 1e-10;
    int max_bisections = 200;
    /// Smallest gap the unbounded-regime push toward M may produce.
    double min_gap = 1e-12;
};

namespace detail {

inline void verify_eigenvalue(RealizationCertificate& c, const RealizeOptions& opt) {
    const Spectrum s = eigenvalues(c.params);
    c.eig_residual = nearest_eigenvalue_distance(s, Complex(c.target.a, c.target.b));
    if (!(c.eig_residual <= opt.eig_tol)) {
        throw VerificationError("realize: target is " + std::to_string(c.eig_residual) +
                                " away from the nearest eigenvalue");
    }
}

} // namespace detail

/// All-equal parameters 1 - x realize lambda = (1 - x) + ix.
inline RealizationCertificate realize_right_edge(double x, const RealizeOptions& opt = {}) {
    if (!(x > 0.0 && x <= 1.0)) {
        throw DomainError("realize_right_edge: requires x in (0, 1]");
    }
    RealizationCertificate c;
    c.target = SpectralPoint(1.0 - x, x);
    c.gaps = GapParams(x, x, x, x);
    c.params = params_of(c.gaps);
    c.method = Method::RightEdge;
    detail::verify_eigenvalue(c, opt);
    return c;
}

inline RealizationCertificate realize_left_curve(const SpectralPoint& p, const RealizeOptions& opt = {}) {
    if (!(p.b > 0.0) || !(p.a >= 0.0 && p.a < 1.0) || p.a + p.b > 1.0 + opt.tol.eps_band) {
        throw DomainError("realize_left_curve: requires b > 0, 0 <= a < 1, a + b <= 1");
    }
    if (!(std::fabs(eval_G(p.a, p.b)) <= opt.tol.eps_band)) {
        throw NotOnCurve("realize_left_curve: |G(a, b)| exceeds the boundary band");
    }
    const Complex alpha = al_alpha_of(Complex(p.a, p.b));
    if (!(std::fabs(alpha.imag()) <= 1e-8)) {
        throw NotOnCurve("realize_left_curve: recovered alpha is not real");
    }
    double a0 = alpha.real();
    // alpha = 0 exactly at lambda = i; clip round-off below zero.
    if (a0 < 0.0 && a0 > -1e-12) {
        a0 = 0.0;
    }
    if (!(a0 >= 0.0 && a0 <= kMaxParam)) {
        throw DomainError("realize_left_curve: recovered alpha outside [0, 1)");
    }
    RealizationCertificate c;
    c.target = p;
    c.params = MatrixParams(a0, 0.0, 0.0, 0.0);
    c.gaps = gaps_of(c.params);
    c.method = Method::LeftCurve;
    detail::verify_eigenvalue(c, opt);
    return c;
}

namespace detail {

/// Point on the segment from `from` (psi < 0) to `to` (psi > 0); each
/// coordinate stays between its endpoints so the result remains in [m, M).
inline AngleVector lerp(const AngleVector& from, const AngleVector& to, double tau) {
    AngleVector v;
    for (int k = 0; k < 4; ++k) {
        const double lo = std::min(from.u[k], to.u[k]);
        const double hi = std::max(from.u[k], to.u[k]);
        v.u[k] = std::clamp(from.u[k] + tau * (to.u[k] - from.u[k]), lo, hi);
    }
    return v;
}

inline double psi_unchecked(const AngleFrame& f, const AngleVector& v) {
    double total = 0.0;
    for (double u : v.u) {
        total += F(f, u);
    }
    return total;
}

/// Best vertex of P with every coordinate capped at `cap`: j coordinates
/// at the cap, the rest at m, one coordinate absorbing the remainder.
inline std::optional<AngleVector> capped_vertex(const AngleFrame& f, double cap) {
    std::optional<AngleVector> best;
    double best_psi = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 3; ++j) {
        const double free = kTwoPi - j * cap - (3 - j) * f.m;
        if (!(free >= f.m && free <= cap)) {
            continue;
        }
        AngleVector v;
        for (int k = 0; k < 3; ++k) {
            v.u[k] = k < j ? cap : f.m;
        }
        v.u[3] = free;
        const double val = psi_unchecked(f, v);
        if (val > best_psi) {
            best_psi = val;
            best = v;
        }
    }
    return best;
}

/// Endpoint with psi > 0 for the unbounded regime: push u4 toward M. When
/// the gap floor is hit first (targets very close to the real axis), fall
/// back to the best capped vertex, which puts several coordinates near M.
inline AngleVector unbounded_upper(const AngleFrame& f, const RealizeOptions& opt) {
    for (double eps = 1e-2;; eps *= 0.5) {
        double u4 = f.M - eps;
        const bool at_floor = !(u4 < f.M) || t_of_u(f, u4) < opt.min_gap;
        if (at_floor) {
            // Angles this close to M may round onto M itself.
            u4 = std::min(u_of_t(f, opt.min_gap), std::nextafter(f.M, 0.0));
        }
        const double rest = (kTwoPi - u4) / 3.0;
        AngleVector v{{rest, rest, rest, u4}};
        if (psi_unchecked(f, v) > 0.0) {
            return v;
        }
        if (at_floor) {
            const auto vertex = capped_vertex(f, u4);
            if (vertex && psi_unchecked(f, *vertex) > 0.0) {
                return *vertex;
            }
            throw ConvergenceError("realize_interior: psi stays negative at the gap floor");
        }
    }
}

inline double F_prime(const AngleFrame& f, double u) {
    return -1.0 / std::tan(u) + f.y / (std::sin(u) * std::sin(u) * t_of_u(f, u));
}

/// Psi with coordinate k carried by its gap instead of its angle. Angles
/// close to M resolve t poorly, so the final solve works in log t.
struct GapSlice {
    const AngleFrame& f;
    AngleVector base;
    int k;    // coordinate carried by its gap
    int comp; // coordinate absorbing the angle change

    AngleVector at(double t) const {
        AngleVector v = base;
        v.u[k] = u_of_t(f, t);
        v.u[comp] = base.u[comp] + (base.u[k] - v.u[k]);
        return v;
    }
    double psi(double t) const {
        const AngleVector v = at(t);
        double total = std::log(std::hypot(f.x + t, f.y)) - std::log(t);
        for (int j = 0; j < 4; ++j) {
            if (j != k) {
                total += F(f, v.u[j]);
            }
        }
        return total;
    }
};

struct Refined {
    AngleVector angles;
    std::array<double, 4> gaps;
    double psi;
    int k;
    int comp;
};

/// Polish a bisection that ran out of resolution in angle space.
inline std::optional<Refined> refine_in_gap(const AngleFrame& f, const AngleVector& v, const RealizeOptions& opt) {
    int k = 0;
    int comp = 0;
    for (int j = 1; j < 4; ++j) {
        if (t_of_u(f, v.u[j]) < t_of_u(f, v.u[k])) {
            k = j;
        }
    }
    comp = k == 0 ? 1 : 0;
    for (int j = 0; j < 4; ++j) {
        if (j != k && std::fabs(F_prime(f, v.u[j])) < std::fabs(F_prime(f, v.u[comp]))) {
            comp = j;
        }
    }
    const GapSlice slice{f, v, k, comp};
    const double t0 = t_of_u(f, v.u[k]);
    const double lo_bound = opt.min_gap;
    const double hi_bound = std::min(1.0, t_of_u(f, f.m));
    // Psi decreases in t; widen a bracket around t0 geometrically.
    double t_lo = t0;
    double t_hi = t0;
    auto usable = [&](double t) {
        const AngleVector w = slice.at(t);
        return w.u[comp] >= f.m && w.u[comp] < f.M;
    };
    for (int i = 0; i < 60 && !(slice.psi(t_lo) > 0.0); ++i) {
        t_lo = std::max(lo_bound, t_lo * 0.5);
        if (!usable(t_lo)) {
            return std::nullopt;
        }
    }
    for (int i = 0; i < 60 && !(slice.psi(t_hi) < 0.0); ++i) {
        t_hi = std::min(hi_bound, t_hi * 2.0);
        if (!usable(t_hi)) {
            return std::nullopt;
        }
    }
    if (!(slice.psi(t_lo) > 0.0) || !(slice.psi(t_hi) < 0.0)) {
        return std::nullopt;
    }
    // Run to exhaustion: near the real axis the eigenvalue reacts strongly
    // to residual psi, so stopping at psi_tol is not enough.
    double best_t = t_lo;
    double best_val = slice.psi(t_lo);
    for (int i = 0; i < opt.max_bisections; ++i) {
        const double mid = std::sqrt(t_lo * t_hi);
        if (mid == t_lo || mid == t_hi) {
            break;
        }
        const double val = slice.psi(mid);
        if (std::fabs(val) < std::fabs(best_val)) {
            best_t = mid;
            best_val = val;
        }
        if (val == 0.0) {
            break;
        }
        (val > 0.0 ? t_lo : t_hi) = mid;
    }
    if (!(std::fabs(best_val) <= opt.psi_tol)) {
        return std::nullopt;
    }
    const AngleVector w = slice.at(best_t);
    std::array<double, 4> t{};
    for (int j = 0; j < 4; ++j) {
        t[j] = j == k ? best_t : std::min(t_of_u(f, w.u[j]), 1.0);
    }
    return Refined{w, t, best_val, k, comp};
}


/// Psi evaluated from gaps alone.
inline double psi_of_gaps(const AngleFrame& f, const std::array<double, 4>& t) {
    double total = 0.0;
    for (double tk : t) {
        total += std::log(std::hypot(f.x + tk, f.y)) - std::log(tk);
    }
    return total;
}

/// Newton on two gaps so that the characteristic polynomial vanishes at the
/// target. Gaps recovered from angles near m or M carry errors of order
/// ulp/b, which moves the eigenvalue far more than the psi residual suggests.
inline std::array<double, 4> polish_gaps(const AngleFrame& f, std::array<double, 4> t, int k, int comp,
                                         const RealizeOptions& opt) {
    const Complex z(f.x, f.y);
    auto residual = [&](const std::array<double, 4>& g) {
        Complex lhs(1.0, 0.0);
        double rhs = 1.0;
        for (double gk : g) {
            lhs *= z + gk;
            rhs *= gk;
        }
        return lhs - rhs;
    };
    auto partial = [&](const std::array<double, 4>& g, int i) {
        Complex lhs(1.0, 0.0);
        double rhs = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j != i) {
                lhs *= z + g[j];
                rhs *= g[j];
            }
        }
        return lhs - rhs;
    };
    Complex r = residual(t);
    for (int it = 0; it < 8 && std::abs(r) > 0.0; ++it) {
        const Complex dk = partial(t, k);
        const Complex dc = partial(t, comp);
        const double det = dk.real() * dc.imag() - dc.real() * dk.imag();
        if (!(std::fabs(det) > 0.0)) {
            break;
        }
        std::array<double, 4> next = t;
        next[k] -= (r.real() * dc.imag() - dc.real() * r.imag()) / det;
        next[comp] -= (dk.real() * r.imag() - r.real() * dk.imag()) / det;
        if (!(next[k] >= opt.min_gap && next[k] <= 1.0 && next[comp] >= opt.min_gap && next[comp] <= 1.0)) {
            break;
        }
        const Complex rn = residual(next);
        if (!(std::abs(rn) < std::abs(r))) {
            break;
        }
        t = next;
        r = rn;
    }
    return t;
}

} // namespace detail

inline RealizationCertificate realize_interior(const SpectralPoint& p, const RealizeOptions& opt = {}) {
    if (!(p.b > 0.0) || !(p.a >= 0.0 && p.a < 1.0) || !(p.a + p.b < 1.0 - opt.tol.eps_band) ||
        !(eval_G(p.a, p.b) > opt.tol.eps_band)) {
        throw NotStrictInterior("realize_interior: point is not strictly inside the region");
    }
    const AngleFrame f = build_frame(p);
    constexpr double kHalfPi = std::numbers::pi / 2.0;

    const AngleVector lower{{kHalfPi, kHalfPi, kHalfPi, kHalfPi}};
    const AngleVector upper = f.tight() ? AngleVector{{f.U, f.m, f.m, f.m}} : detail::unbounded_upper(f, opt);

    double psi_lo = detail::psi_unchecked(f, lower);
    const double psi_hi = detail::psi_unchecked(f, upper);
    if (!(psi_lo < 0.0) || !(psi_hi > 0.0)) {
        throw ConvergenceError("realize_interior: psi does not change sign on the segment");
    }

    double lo = 0.0;
    double hi = 1.0;
    AngleVector best = lower;
    double best_psi = psi_lo;
    int iter = 0;
    for (; iter < opt.max_bisections; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const AngleVector v = detail::lerp(lower, upper, mid);
        const double val = detail::psi_unchecked(f, v);
        if (std::fabs(val) < std::fabs(best_psi)) {
            best = v;
            best_psi = val;
        }
        if (val == 0.0 || mid == lo || mid == hi) {
            break;
        }
        if (val < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    std::array<double, 4> t{};
    for (int k = 0; k < 4; ++k) {
        t[k] = std::min(t_of_u(f, best.u[k]), 1.0);
    }
    // Angle space cannot resolve gaps near M; finish the solve in log t.
    if (best_psi != 0.0) {
        const auto refined = detail::refine_in_gap(f, best, opt);
        if (refined && std::fabs(refined->psi) < std::fabs(best_psi)) {
            t = detail::polish_gaps(f, refined->gaps, refined->k, refined->comp, opt);
            for (int k = 0; k < 4; ++k) {
                best.u[k] = u_of_t(f, t[k]);
            }
            best_psi = detail::psi_of_gaps(f, t);
        }
    }
    if (!(std::fabs(best_psi) <= opt.psi_tol)) {
        throw ConvergenceError("realize_interior: bisection stalled at |psi| = " + std::to_string(std::fabs(best_psi)));
    }
    RealizationCertificate c;
    c.target = p;
    c.gaps = GapParams(t[0], t[1], t[2], t[3]);
    c.params = params_of(c.gaps);
    c.angles = best;
    c.method = Method::InteriorIVT;
    c.psi_residual = std::fabs(best_psi);
    detail::verify_eigenvalue(c, opt);
    return c;
}

/// Dispatch on the region verdict. Lower half-plane targets reuse the
/// parameters of their conjugate.
inline RealizationCertificate realize(const SpectralPoint& p, const RealizeOptions& opt = {}) {
    const SpectralPoint upper(p.a, p.b_plus);
    const RegionVerdict v = classify(upper, opt.tol);
    RealizationCertificate c;
    switch (v.kind) {
        case RegionKind::Interior: c = realize_interior(upper, opt); break;
        case RegionKind::RightEdge: c = realize_right_edge(upper.b_plus, opt); break;
        case RegionKind::LeftCurve: c = realize_left_curve(upper, opt); break;
        case RegionKind::RealAxis:
            throw OutsideRegion("realize: target is on the real axis", {});
        case RegionKind::Exterior:
            throw OutsideRegion("realize: target violates the region constraints", v.violated);
    }
    c.target = p;
    detail::verify_eigenvalue(c, opt);
    return c;
}

} // namespace cycle4
