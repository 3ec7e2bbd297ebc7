#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "errors.hpp"

/**
 * @file matrix_family.hpp
 * @brief The 4-cycle row-stochastic family A(alpha, beta, gamma, delta).
 *
 * Row k keeps weight p_k on the diagonal and sends 1 - p_k to state k + 1
 * (mod 4). The characteristic polynomial is
 *
 *     p(lambda) = (lambda - alpha)(lambda - beta)(lambda - gamma)(lambda - delta)
 *                 - t1 t2 t3 t4,          t_k = 1 - p_k,
 *
 * and lambda = 1 is always a root.
 */

namespace cycle4 {

using Complex = std::complex<double>;

/// Largest parameter accepted; closer to 1 the deflated cubic is ill-conditioned.
inline constexpr double kMaxParam = 1.0 - 1e-12;

struct GapParams;

struct MatrixParams {
    double alpha{};
    double beta{};
    double gamma{};
    double delta{};

    MatrixParams() = default;
    MatrixParams(double a, double b, double c, double d) : alpha(a), beta(b), gamma(c), delta(d) {
        for (double p : as_array()) {
            if (!(p >= 0.0 && p <= kMaxParam)) {
                throw DomainError("MatrixParams: parameter " + std::to_string(p) + " outside [0, 1)");
            }
        }
    }

    [[nodiscard]] std::array<double, 4> as_array() const { return {alpha, beta, gamma, delta}; }

    friend bool operator==(const MatrixParams&, const MatrixParams&) = default;
};

/// Off-diagonal weights t_k = 1 - p_k. The complements 1 - t_k are carried
/// alongside so that params_of(gaps_of(p)) reproduces p bit-for-bit.
struct GapParams {
    double t1{1.0};
    double t2{1.0};
    double t3{1.0};
    double t4{1.0};

    GapParams() = default;
    GapParams(double a, double b, double c, double d)
        : t1(a), t2(b), t3(c), t4(d), complement_{1.0 - a, 1.0 - b, 1.0 - c, 1.0 - d} {
        for (double t : as_array()) {
            if (!(t > 0.0 && t <= 1.0 && 1.0 - t <= kMaxParam)) {
                throw DomainError("GapParams: gap " + std::to_string(t) + " outside (0, 1]");
            }
        }
    }

    [[nodiscard]] std::array<double, 4> as_array() const { return {t1, t2, t3, t4}; }
    [[nodiscard]] const std::array<double, 4>& complements() const { return complement_; }

    friend bool operator==(const GapParams& l, const GapParams& r) { return l.as_array() == r.as_array(); }

private:
    friend GapParams gaps_of(const MatrixParams& p);
    std::array<double, 4> complement_{0.0, 0.0, 0.0, 0.0};
};

inline GapParams gaps_of(const MatrixParams& p) {
    GapParams g(1.0 - p.alpha, 1.0 - p.beta, 1.0 - p.gamma, 1.0 - p.delta);
    g.complement_ = p.as_array();
    return g;
}

inline MatrixParams params_of(const GapParams& g) {
    const auto& c = g.complements();
    return {c[0], c[1], c[2], c[3]};
}

/// Monic characteristic quartic, degree-descending coefficients.
inline std::array<double, 5> char_poly(const MatrixParams& p) {
    const auto [a, b, c, d] = p.as_array();
    const GapParams g = gaps_of(p);
    const double e1 = a + b + c + d;
    const double e2 = a * b + a * c + a * d + b * c + b * d + c * d;
    const double e3 = a * b * c + a * b * d + a * c * d + b * c * d;
    const double e4 = a * b * c * d;
    return {1.0, -e1, e2, -e3, e4 - g.t1 * g.t2 * g.t3 * g.t4};
}

/// p(lambda) in product form, which keeps full relative accuracy near clustered roots.
inline Complex char_poly_eval(const MatrixParams& p, Complex lambda) {
    const GapParams g = gaps_of(p);
    return (lambda - p.alpha) * (lambda - p.beta) * (lambda - p.gamma) * (lambda - p.delta) -
           g.t1 * g.t2 * g.t3 * g.t4;
}

inline Complex char_poly_derivative(const MatrixParams& p, Complex lambda) {
    const Complex f0 = lambda - p.alpha;
    const Complex f1 = lambda - p.beta;
    const Complex f2 = lambda - p.gamma;
    const Complex f3 = lambda - p.delta;
    return f1 * f2 * f3 + f0 * f2 * f3 + f0 * f1 * f3 + f0 * f1 * f2;
}

/// Roots of the monic cubic w^3 + c2 w^2 + c1 w + c0 with real coefficients.
/// Either three real roots or one real root and a conjugate pair (pair last,
/// upper member first).
inline std::array<Complex, 3> solve_cubic(double c2, double c1, double c0) {
    constexpr double kPi = 3.14159265358979323846;
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;

    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        // Pick the sign that avoids cancellation in -q/2 +- sqrt(disc).
        const double big = -0.5 * q + (q <= 0.0 ? sq : -sq);
        const double u = std::cbrt(big);
        const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
        const double real_root = u + v - shift;
        const double re = -0.5 * (u + v) - shift;
        const double im = 0.5 * std::sqrt(3.0) * std::fabs(u - v);
        return {Complex(real_root, 0.0), Complex(re, im), Complex(re, -im)};
    }
    if (p == 0.0) {
        const double r = std::cbrt(-q) - shift;
        return {Complex(r, 0.0), Complex(r, 0.0), Complex(r, 0.0)};
    }
    const double rho = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * rho), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::array<Complex, 3> out;
    for (int k = 0; k < 3; ++k) {
        out[k] = Complex(rho * std::cos(theta - 2.0 * kPi * k / 3.0) - shift, 0.0);
    }
    return out;
}

struct Spectrum {
    std::array<Complex, 4> roots{};
    std::array<double, 4> residuals{};
};

inline constexpr double kResidualTol = 1e-10;

namespace detail {

inline Complex newton_polish(const MatrixParams& p, Complex root, int steps = 3) {
    double best = std::abs(char_poly_eval(p, root));
    for (int i = 0; i < steps && best > 0.0; ++i) {
        const Complex d = char_poly_derivative(p, root);
        if (d == Complex(0.0, 0.0)) {
            break;
        }
        const Complex next = root - char_poly_eval(p, root) / d;
        const double res = std::abs(char_poly_eval(p, next));
        if (!(res < best)) {
            break;
        }
        root = next;
        best = res;
    }
    return root;
}

} // namespace detail

/**
 * Eigenvalues of A(params). Root 0 is the forced eigenvalue 1.
 *
 * In z = lambda - 1 the quartic reads prod(z + t_k) - prod(t_k), so z = 0
 * deflates exactly to z^3 + e1 z^2 + e2 z + e3 with e_k the elementary
 * symmetric polynomials of the gaps. The cubic is solved in closed form and
 * every root is Newton-polished on the product form of p. Nonreal roots are
 * returned as exact conjugate pairs.
 */
inline Spectrum eigenvalues(const MatrixParams& params) {
    const auto t = gaps_of(params).as_array();
    const double e1 = t[0] + t[1] + t[2] + t[3];
    const double e2 = t[0] * t[1] + t[0] * t[2] + t[0] * t[3] + t[1] * t[2] + t[1] * t[3] + t[2] * t[3];
    const double e3 = t[0] * t[1] * t[2] + t[0] * t[1] * t[3] + t[0] * t[2] * t[3] + t[1] * t[2] * t[3];

    const auto z = solve_cubic(e1, e2, e3);

    Spectrum s;
    s.roots[0] = Complex(1.0, 0.0);
    s.residuals[0] = std::abs(char_poly_eval(params, s.roots[0]));
    for (int k = 0; k < 3; ++k) {
        s.roots[k + 1] = Complex(1.0, 0.0) + z[k];
    }

    const bool has_pair = z[1].imag() != 0.0;
    if (has_pair) {
        s.roots[1] = detail::newton_polish(params, s.roots[1]);
        s.roots[1] = Complex(s.roots[1].real(), 0.0);
        // Polish the upper member and mirror it so the pair stays conjugate.
        Complex w = detail::newton_polish(params, s.roots[2]);
        if (w.imag() < 0.0) {
            w = std::conj(w);
        }
        s.roots[2] = w;
        s.roots[3] = std::conj(w);
    } else {
        for (int k = 1; k < 4; ++k) {
            const Complex r = detail::newton_polish(params, s.roots[k]);
            s.roots[k] = Complex(r.real(), 0.0);
        }
    }
    for (int k = 1; k < 4; ++k) {
        s.residuals[k] = std::abs(char_poly_eval(params, s.roots[k]));
        if (!(s.residuals[k] <= kResidualTol)) {
            throw SolverError("eigenvalues: polished residual " + std::to_string(s.residuals[k]) +
                              " exceeds tolerance");
        }
    }
    return s;
}

/// Distance from lambda to the closest root of the spectrum.
inline double nearest_eigenvalue_distance(const Spectrum& s, Complex lambda) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& r : s.roots) {
        best = std::min(best, std::abs(r - lambda));
    }
    return best;
}

struct Eigvec {
    std::array<Complex, 4> v{};
    double closure_residual{};
};

inline constexpr double kClosureTol = 1e-8;

/// Right eigenvector normalized to v1 = 1, built by walking the cycle.
inline Eigvec eigenvector(const MatrixParams& p, Complex lambda) {
    if (lambda.imag() == 0.0) {
        throw DomainError("eigenvector: lambda must be nonreal");
    }
    const GapParams g = gaps_of(p);
    Eigvec e;
    e.v[0] = 1.0;
    e.v[1] = (lambda - p.alpha) / g.t1 * e.v[0];
    e.v[2] = (lambda - p.beta) / g.t2 * e.v[1];
    e.v[3] = (lambda - p.gamma) / g.t3 * e.v[2];
    e.closure_residual = std::abs((lambda - p.delta) * e.v[3] - g.t4 * e.v[0]);
    if (!(e.closure_residual <= kClosureTol)) {
        throw NotAnEigenvalue("eigenvector: closure residual " + std::to_string(e.closure_residual));
    }
    return e;
}

/// Parameter alpha for which lambda is an eigenvalue of A(alpha, 0, 0, 0).
/// Real exactly when G(a, b) = 0.
inline Complex al_alpha_of(Complex lambda) {
    const Complex l3 = lambda * lambda * lambda;
    const Complex den = l3 - 1.0;
    if (std::abs(den) < 1e-12) {
        throw DomainError("al_alpha_of: lambda^3 too close to 1");
    }
    return (l3 * lambda - 1.0) / den;
}

} // namespace cycle4
