#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "audit.hpp"
#include "matrix_family.hpp"
#include "realization.hpp"
#include "region_algebra.hpp"

namespace cycle4 {

using Json = nlohmann::ordered_json;

/// Locale-independent rendering with 17 significant digits (round-trips exactly).
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline void write_json(std::ostream& os, const Json& j, int indent, int level) {
    const bool pretty = indent > 0;
    auto newline = [&](int lvl) {
        if (pretty) {
            os << '\n' << std::string(static_cast<std::size_t>(indent * lvl), ' ');
        }
    };
    switch (j.type()) {
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) {
                os << format_double(v);
            } else {
                os << "null";
            }
            break;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                break;
            }
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) {
                    os << ',';
                }
                first = false;
                newline(level + 1);
                write_json(os, e, indent, level + 1);
            }
            newline(level);
            os << ']';
            break;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                break;
            }
            os << '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) {
                    os << ',';
                }
                first = false;
                newline(level + 1);
                os << Json(key).dump() << (pretty ? ": " : ":");
                write_json(os, value, indent, level + 1);
            }
            newline(level);
            os << '}';
            break;
        }
        default:
            os << j.dump();
    }
}

} // namespace detail

/// Serialize with every floating value at 17 significant digits; non-finite
/// values become null. indent <= 0 gives a single line.
inline std::string to_json_text(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::write_json(os, j, indent, 0);
    return os.str();
}

inline Json to_json(const RegionVerdict& v, const SpectralPoint& p) {
    Json violated = Json::array();
    for (Constraint c : v.violated) {
        violated.push_back(to_string(c));
    }
    return Json{{"kind", to_string(v.kind)},
                {"g", v.margins.g_value},
                {"right_slack", v.margins.right_slack},
                {"a", p.a},
                {"b_plus", p.b_plus},
                {"violated", violated}};
}

inline Json to_json(const RealizationCertificate& c) {
    Json angles = nullptr;
    if (c.angles) {
        angles = Json::array();
        for (double u : c.angles->u) {
            angles.push_back(u);
        }
    }
    const auto p = c.params.as_array();
    const auto g = c.gaps.as_array();
    return Json{{"method", to_string(c.method)},
                {"target", {c.target.a, c.target.b}},
                {"params", {p[0], p[1], p[2], p[3]}},
                {"gaps", {g[0], g[1], g[2], g[3]}},
                {"angles", angles},
                {"eig_residual", c.eig_residual},
                {"psi_residual", c.psi_residual}};
}

/// Roots sorted by descending real part, then descending imaginary part.
inline Json to_json(const Spectrum& s) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const Complex& x = s.roots[i];
        const Complex& y = s.roots[j];
        if (x.real() != y.real()) {
            return x.real() > y.real();
        }
        return x.imag() > y.imag();
    });
    Json roots = Json::array();
    Json residuals = Json::array();
    for (int k : order) {
        roots.push_back({s.roots[k].real(), s.roots[k].imag()});
        residuals.push_back(s.residuals[k]);
    }
    return Json{{"roots", roots}, {"residuals", residuals}};
}

inline Json to_json(const AuditReport& r, bool with_elapsed = true) {
    Json checks = Json::object();
    for (const auto& [name, s] : r.checks) {
        checks[name] = Json{{"tolerance", s.tolerance}, {"worst_raw", s.worst_raw}, {"failures", s.failures}};
    }
    Json failures = Json::array();
    for (const auto& f : r.failures) {
        Json inputs = Json::object();
        for (const auto& [k, v] : f.inputs) {
            inputs[k] = v;
        }
        failures.push_back(
            Json{{"trial", f.trial}, {"check", f.check}, {"inputs", inputs}, {"raw", f.raw}, {"violation", f.violation}});
    }
    Json j{{"suite", r.suite},
           {"trials", r.trials},
           {"seed", r.seed},
           {"passed", r.passed()},
           {"worst_violation", r.worst_violation},
           {"tolerance", AuditReport::tolerance},
           {"checks", checks},
           {"failures", failures}};
    if (with_elapsed) {
        j["elapsed"] = r.elapsed;
    }
    return j;
}

} // namespace cycle4
