#pragma once

#include <ostream>
#include <vector>

#include "errors.hpp"
#include "matrix_family.hpp"
#include "region_algebra.hpp"
#include "serialize.hpp"

/**
 * @file boundary.hpp
 * @brief Sampled boundary curves of the nonreal region.
 *
 * Right edge: lambda = (1 - x) + ix for x in (0, 1], realized by the
 * all-equal matrix with parameter 1 - x.
 * Left curve: the upper nonreal eigenvalue of A(alpha, 0, 0, 0) for
 * alpha in [0, 1), running from i (alpha = 0) toward 0 (alpha -> 1).
 */

namespace cycle4 {

struct CurveRow {
    double parameter{};
    double a{};
    double b{};
    double g_value{};
};

inline constexpr double kLeftCurveAlphaMax = 1.0 - 1e-3;

inline std::vector<CurveRow> trace_right_edge(int steps) {
    if (steps < 2) {
        throw DomainError("trace_right_edge: steps must be at least 2");
    }
    std::vector<CurveRow> rows;
    rows.reserve(steps);
    for (int k = 1; k <= steps; ++k) {
        const double x = static_cast<double>(k) / steps;
        rows.push_back({x, 1.0 - x, x, eval_G(1.0 - x, x)});
    }
    return rows;
}

/// Upper nonreal eigenvalue of A(alpha, 0, 0, 0).
inline Complex left_curve_point(double alpha) {
    const Spectrum s = eigenvalues(MatrixParams(alpha, 0.0, 0.0, 0.0));
    Complex best(0.0, 0.0);
    for (const Complex& r : s.roots) {
        if (r.imag() > best.imag()) {
            best = r;
        }
    }
    if (!(best.imag() > 0.0)) {
        throw SolverError("left_curve_point: no nonreal eigenvalue");
    }
    return best;
}

inline std::vector<CurveRow> trace_left_curve(int steps) {
    if (steps < 2) {
        throw DomainError("trace_left_curve: steps must be at least 2");
    }
    std::vector<CurveRow> rows;
    rows.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        const double alpha = kLeftCurveAlphaMax * k / (steps - 1);
        const Complex l = left_curve_point(alpha);
        rows.push_back({alpha, l.real(), l.imag(), eval_G(l.real(), l.imag())});
    }
    return rows;
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
    os << "param,a,b,g\n";
    for (const auto& r : rows) {
        os << format_double(r.parameter) << ',' << format_double(r.a) << ',' << format_double(r.b) << ','
           << format_double(r.g_value) << '\n';
    }
}

} // namespace cycle4
