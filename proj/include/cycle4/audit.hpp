#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "angle_program.hpp"
#include "errors.hpp"
#include "matrix_family.hpp"
#include "realization.hpp"
#include "region_algebra.hpp"
#include "rng.hpp"

/**
 * @file audit.hpp
 * @brief Randomized numeric verification of the region theorem and the
 *        lemmas behind it.
 *
 * Each suite runs independent trials; trial i draws from its own counter
 * stream (see TrialRng), so a report depends only on (trials, seed).
 * Violations are stored raw per check and normalized by the check's
 * tolerance; a trial fails when its normalized violation exceeds 1.
 */

namespace cycle4 {

/// Tolerances for every suite, in one place.
struct AuditConfig {
    // Region necessity: 0 <= a <= 1, a + |b| <= 1, G(a, |b|) >= 0.
    double necessity_a_tol = 1e-9;
    double necessity_slack_tol = 1e-8;
    double necessity_g_tol = 1e-8;
    double necessity_param_max = 1.0 - 1e-6;
    double eps_real = 1e-10;

    // Tight-regime maximum 3F(m) + F(U) = log(|lambda|^6 / N).
    int karamata_grid_n = 40;
    double karamata_exceed_tol = 1e-8;
    double karamata_vertex_tol = 1e-10;
    double karamata_closed_form_rel = 1e-10;

    // F'' closed form against a central second difference.
    double convexity_h = 1e-5;
    double convexity_rel_tol = 1e-4;
    // Central differences lose accuracy like (h/d)^2 at distance d from M.
    double convexity_margin = 1e-3;

    // Exact polynomial and trigonometric identities.
    double identity_rel_tol = 1e-10;

    // Rejection samplers give up after this many consecutive rejections.
    std::uint64_t sampler_budget = 1'000'000;

    // Round trip through the inverse solver.
    double roundtrip_eig_tol = 1e-8;
    double roundtrip_psi_tol = 1e-10;
    double roundtrip_sum_tol = 1e-12;
    double roundtrip_gap_slack = 1e-12;
};

/// Formulas the suites check. Tests swap in corrupted versions to confirm
/// that each suite notices.
struct AuditHooks {
    std::function<double(double, double)> g = eval_G;
    std::function<double(double, double)> n = eval_N;
    std::function<double(const AngleFrame&, double)> f_second = F_second;
    std::function<double(const AngleFrame&)> max_psi = max_psi_tight;
};

struct AuditFailure {
    std::uint64_t trial{};
    std::string check;
    std::vector<std::pair<std::string, double>> inputs;
    double raw{};
    double violation{};

    friend bool operator==(const AuditFailure&, const AuditFailure&) = default;
};

struct CheckSummary {
    double tolerance{};
    double worst_raw{};
    std::uint64_t failures{};

    friend bool operator==(const CheckSummary&, const CheckSummary&) = default;
};

struct AuditReport {
    std::string suite;
    std::uint64_t trials{};
    std::uint64_t seed{};
    std::vector<AuditFailure> failures;
    /// Largest violation in units of the failing check's tolerance.
    double worst_violation{};
    std::map<std::string, CheckSummary> checks;
    double elapsed{};

    /// Normalized tolerance: failures are empty iff worst_violation <= tolerance.
    static constexpr double tolerance = 1.0;

    [[nodiscard]] bool passed() const { return failures.empty(); }
};

/// Combine partial reports of the same suite. Associative and commutative
/// up to the ordering of failures, which is canonicalized by trial index.
inline AuditReport merge(AuditReport lhs, const AuditReport& rhs) {
    lhs.trials += rhs.trials;
    lhs.failures.insert(lhs.failures.end(), rhs.failures.begin(), rhs.failures.end());
    std::stable_sort(lhs.failures.begin(), lhs.failures.end(),
                     [](const AuditFailure& x, const AuditFailure& y) {
                         return std::tie(x.trial, x.check) < std::tie(y.trial, y.check);
                     });
    lhs.worst_violation = std::max(lhs.worst_violation, rhs.worst_violation);
    for (const auto& [name, s] : rhs.checks) {
        auto [it, fresh] = lhs.checks.try_emplace(name, s);
        if (!fresh) {
            it->second.worst_raw = std::max(it->second.worst_raw, s.worst_raw);
            it->second.failures += s.failures;
        }
    }
    lhs.elapsed = std::max(lhs.elapsed, rhs.elapsed);
    return lhs;
}

/// Collects check outcomes for one trial into a partial report.
class TrialRecorder {
public:
    TrialRecorder(AuditReport& report, std::uint64_t trial) : report_(report), trial_(trial) {}

    void input(std::string name, double value) { inputs_.emplace_back(std::move(name), value); }

    /// Check that raw <= tolerance (raw is a nonnegative violation size).
    void bounded(const std::string& check, double raw, double tolerance) {
        raw = std::isnan(raw) ? std::numeric_limits<double>::infinity() : std::max(raw, 0.0);
        const double v = raw / tolerance;
        store(check, raw, tolerance, v, v > 1.0);
    }

    /// Check a strict inequality margin > 0. A failing margin counts as
    /// 2 + |margin| tolerance units.
    void strict(const std::string& check, double margin) {
        const bool bad = !(margin > 0.0);
        const double raw = bad ? (std::isnan(margin) ? std::numeric_limits<double>::infinity() : -margin) : 0.0;
        store(check, raw, 0.0, bad ? 2.0 + raw : 0.0, bad);
    }

    /// Unconditional failure, e.g. an exception from the code under test.
    void fail(const std::string& check) { store(check, 1.0, 0.0, 2.0, true); }

private:
    void store(const std::string& check, double raw, double tolerance, double v, bool bad) {
        auto& s = report_.checks[check];
        s.tolerance = tolerance;
        s.worst_raw = std::max(s.worst_raw, raw);
        report_.worst_violation = std::max(report_.worst_violation, v);
        if (bad) {
            ++s.failures;
            report_.failures.push_back({trial_, check, inputs_, raw, v});
        }
    }

    AuditReport& report_;
    std::uint64_t trial_;
    std::vector<std::pair<std::string, double>> inputs_;
};

using TrialFn = std::function<void(std::uint64_t trial, TrialRng& rng, TrialRecorder& rec)>;

/// Run trials [0, trials) across `workers` threads in contiguous blocks.
inline AuditReport run_suite(const std::string& suite, std::uint64_t trials, std::uint64_t seed, unsigned workers,
                             const TrialFn& trial) {
    if (trials < 1) {
        throw DomainError("audit: trials must be at least 1");
    }
    const auto start = std::chrono::steady_clock::now();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(trials, 1024))));

    std::vector<AuditReport> parts(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto run_block = [&](unsigned w) {
        const std::uint64_t lo = trials * w / workers;
        const std::uint64_t hi = trials * (w + 1) / workers;
        AuditReport& part = parts[w];
        part.suite = suite;
        part.seed = seed;
        part.trials = hi - lo;
        try {
            for (std::uint64_t i = lo; i < hi; ++i) {
                TrialRng rng(seed, i);
                TrialRecorder rec(part, i);
                trial(i, rng, rec);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run_block, w);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    AuditReport out;
    out.suite = suite;
    out.seed = seed;
    for (const auto& p : parts) {
        out = merge(std::move(out), p);
    }
    out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

namespace detail {

inline double rel_scale(std::initializer_list<double> terms) {
    double s = 1.0;
    for (double t : terms) {
        s = std::max(s, std::fabs(t));
    }
    return s;
}

template <typename Accept, typename Draw>
auto rejection_sample(TrialRng& rng, std::uint64_t budget, Draw draw, Accept accept) {
    for (std::uint64_t k = 0; k < budget; ++k) {
        auto candidate = draw(rng);
        if (accept(candidate)) {
            return candidate;
        }
    }
    throw SamplerExhausted("audit: rejection sampler exhausted its budget");
}

/// (a, b) uniform on [0, 1) x (0, 1] with a tight frame.
inline SpectralPoint sample_tight_point(TrialRng& rng, std::uint64_t budget) {
    return rejection_sample(
        rng, budget, [](TrialRng& r) { return SpectralPoint(r.uniform(), 1.0 - r.uniform()); },
        [](const SpectralPoint& p) { return build_frame(p).tight(); });
}

} // namespace detail

/// A strict-interior target for the round-trip suite.
inline bool is_strict_interior(double a, double b, const AuditHooks& hooks = {}, const Tolerances& tol = {}) {
    return b > tol.eps_real && a >= 0.0 && a < 1.0 && a + b < 1.0 - tol.eps_band && hooks.g(a, b) > tol.eps_band;
}

/// Random matrices: every nonreal eigenvalue satisfies the three region constraints.
inline AuditReport mc_necessity(std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
                                const AuditConfig& cfg = {}, const AuditHooks& hooks = {}) {
    return run_suite("necessity", trials, seed, workers, [&](std::uint64_t, TrialRng& rng, TrialRecorder& rec) {
        std::array<double, 4> p{};
        for (double& v : p) {
            v = rng.uniform(0.0, cfg.necessity_param_max);
        }
        rec.input("alpha", p[0]);
        rec.input("beta", p[1]);
        rec.input("gamma", p[2]);
        rec.input("delta", p[3]);
        Spectrum s;
        try {
            s = eigenvalues(MatrixParams(p[0], p[1], p[2], p[3]));
        } catch (const Error&) {
            rec.fail("solver");
            return;
        }
        for (const Complex& l : s.roots) {
            if (!(l.imag() > cfg.eps_real)) {
                continue;
            }
            const double a = l.real();
            const double b = l.imag();
            rec.bounded("a_lower", -a, cfg.necessity_a_tol);
            rec.bounded("a_upper", a - 1.0, cfg.necessity_a_tol);
            rec.bounded("right_edge", a + b - 1.0, cfg.necessity_slack_tol);
            rec.bounded("g_sign", -hooks.g(a, b), cfg.necessity_g_tol);
        }
    });
}

/// Grid search over the feasible angle set of one tight frame against the
/// closed-form maximum.
inline AuditReport karamata_oracle(const SpectralPoint& p, int grid_n, const AuditConfig& cfg = {},
                                   const AuditHooks& hooks = {}) {
    if (grid_n < 20) {
        throw DomainError("karamata_oracle: grid_n must be at least 20");
    }
    const AngleFrame f = build_frame(SpectralPoint(p.a, p.b_plus));
    if (!f.tight()) {
        throw RegimeError("karamata_oracle: frame is in the unbounded regime");
    }
    AuditReport report;
    report.suite = "karamata";
    report.trials = 1;
    const auto start = std::chrono::steady_clock::now();
    TrialRecorder rec(report, 0);
    rec.input("a", p.a);
    rec.input("b", p.b_plus);

    const double best = hooks.max_psi(f);
    std::vector<double> grid(grid_n);
    std::vector<double> fvals(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        grid[i] = (i == grid_n - 1) ? f.U : f.m + (f.U - f.m) * i / (grid_n - 1);
        fvals[i] = F(f, grid[i]);
    }
    double exceed = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            for (int k = 0; k < grid_n; ++k) {
                const double u4 = kTwoPi - grid[i] - grid[j] - grid[k];
                if (!(u4 >= f.m && u4 < f.M)) {
                    continue;
                }
                const double value = fvals[i] + fvals[j] + fvals[k] + F(f, u4);
                exceed = std::max(exceed, value - best);
            }
        }
    }
    rec.bounded("grid_exceeds_max", exceed, cfg.karamata_exceed_tol);

    const double vertex = psi(f, AngleVector{{f.U, f.m, f.m, f.m}});
    rec.bounded("vertex_gap", std::fabs(vertex - best), cfg.karamata_vertex_tol);

    const double closed = max_psi_closed_form(f.lambda);
    rec.bounded("closed_form", std::fabs(best - closed) / detail::rel_scale({closed}), cfg.karamata_closed_form_rel);

    report.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// karamata_oracle over random tight frames.
inline AuditReport karamata_suite(std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
                                  const AuditConfig& cfg = {}, const AuditHooks& hooks = {}) {
    return run_suite("karamata", trials, seed, workers, [&](std::uint64_t, TrialRng& rng, TrialRecorder& rec) {
        const SpectralPoint p = detail::sample_tight_point(rng, cfg.sampler_budget);
        rec.input("a", p.a);
        rec.input("b", p.b);
        const AuditReport one = karamata_oracle(p, cfg.karamata_grid_n, cfg, hooks);
        for (const auto& [name, s] : one.checks) {
            rec.bounded(name, s.worst_raw, s.tolerance);
        }
    });
}

/// Closed-form F'' against a central difference, and its positivity.
inline AuditReport convexity_oracle(std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
                                    const AuditConfig& cfg = {}, const AuditHooks& hooks = {}) {
    return run_suite("convexity", trials, seed, workers, [&](std::uint64_t, TrialRng& rng, TrialRecorder& rec) {
        const double h = cfg.convexity_h;
        const auto [f, u] = detail::rejection_sample(
            rng, cfg.sampler_budget,
            [&](TrialRng& r) {
                const AngleFrame frame = build_frame(SpectralPoint(r.uniform(), 1.0 - r.uniform()));
                return std::pair{frame, r.uniform(frame.m + h, frame.M - cfg.convexity_margin)};
            },
            [&](const std::pair<AngleFrame, double>& c) {
                return c.first.M - c.first.m > h + cfg.convexity_margin && c.second > c.first.m + h &&
                       c.second < c.first.M - cfg.convexity_margin;
            });
        rec.input("a", f.lambda.a);
        rec.input("b", f.lambda.b);
        rec.input("u", u);
        const double closed = hooks.f_second(f, u);
        const double fd = (F(f, u + h) - 2.0 * F(f, u) + F(f, u - h)) / (h * h);
        rec.bounded("fd_agreement", std::fabs(closed - fd) / std::fabs(fd), cfg.convexity_rel_tol);
        rec.strict("positive", closed);
    });
}

/// Six exact identities on random inputs, as relative violations.
inline AuditReport identity_suite(std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
                                  const AuditConfig& cfg = {}, const AuditHooks& hooks = {}) {
    return run_suite("identities", trials, seed, workers, [&](std::uint64_t, TrialRng& rng, TrialRecorder& rec) {
        const double tol = cfg.identity_rel_tol;

        // (i) |lambda|^6 - N = |lambda - 1|^2 G on [-2, 2]^2.
        const double a1 = rng.uniform(-2.0, 2.0);
        const double b1 = rng.uniform(-2.0, 2.0);
        rec.input("a1", a1);
        rec.input("b1", b1);
        {
            const double r = a1 * a1 + b1 * b1;
            const double r3 = r * r * r;
            const double n = hooks.n(a1, b1);
            const double dg = ((a1 - 1.0) * (a1 - 1.0) + b1 * b1) * hooks.g(a1, b1);
            rec.bounded("factorization", std::fabs(r3 - n - dg) / detail::rel_scale({r3, n, dg}), tol);
        }

        // (ii) 1 - 4a - 12a^2 = -(2a + 1)(6a - 1).
        const double a2 = rng.uniform(-2.0, 2.0);
        rec.input("a2", a2);
        {
            const double lhs = discriminant(a2);
            const double rhs = -(2.0 * a2 + 1.0) * (6.0 * a2 - 1.0);
            rec.bounded("discriminant", std::fabs(lhs - rhs) / detail::rel_scale({1.0, 4.0 * a2, 12.0 * a2 * a2}),
                        tol);
        }

        // (iii) (1 - 6a + 16a^3)^2 - (1 - 4a)^2 (1 - 4a - 12a^2) = 256 a^6 on (0, 1/6).
        const double a3 = rng.uniform(0.0, 1.0 / 6.0);
        rec.input("a3", a3);
        {
            const double p = 1.0 - 6.0 * a3 + 16.0 * a3 * a3 * a3;
            const double lhs1 = p * p;
            const double lhs2 = (1.0 - 4.0 * a3) * (1.0 - 4.0 * a3) * discriminant(a3);
            const double rhs = 256.0 * std::pow(a3, 6);
            rec.bounded("sixth_power", std::fabs(lhs1 - lhs2 - rhs) / detail::rel_scale({lhs1, lhs2, rhs}), tol);
        }

        // (iv) tan(3m) = b (b^2 - 3a^2) / (a (3b^2 - a^2)) where b^2 > 3a^2.
        const auto [a4, b4] = detail::rejection_sample(
            rng, cfg.sampler_budget, [](TrialRng& r) { return std::pair{r.uniform(), 1.0 - r.uniform()}; },
            [](const std::pair<double, double>& c) { return c.first > 0.0 && c.second * c.second > 3.0 * c.first * c.first; });
        rec.input("a4", a4);
        rec.input("b4", b4);
        {
            const double closed = b4 * (b4 * b4 - 3.0 * a4 * a4) / (a4 * (3.0 * b4 * b4 - a4 * a4));
            const double direct = std::tan(3.0 * std::atan2(b4, a4));
            rec.bounded("tan_triple", std::fabs(closed - direct) / detail::rel_scale({closed, direct}), tol);
        }

        // (v) Im(alpha(lambda)) |lambda^3 - 1|^2 = b |lambda - 1|^2 G.
        const auto [a5, b5] = detail::rejection_sample(
            rng, cfg.sampler_budget, [](TrialRng& r) { return std::pair{r.uniform(), 1.0 - r.uniform()}; },
            [](const std::pair<double, double>& c) {
                const Complex l(c.first, c.second);
                return std::abs(l * l * l - 1.0) >= 1e-6;
            });
        rec.input("a5", a5);
        rec.input("b5", b5);
        {
            const Complex l(a5, b5);
            const Complex l3m1 = l * l * l - 1.0;
            const Complex l4m1 = l * l * l * l - 1.0;
            const double lhs = al_alpha_of(l).imag() * std::norm(l3m1);
            const double d1 = std::norm(l - 1.0);
            const double rhs = b5 * d1 * hooks.g(a5, b5);
            const double scale = detail::rel_scale({std::abs(l4m1) * std::abs(l3m1), b5 * d1});
            rec.bounded("left_curve_alpha", std::fabs(lhs - rhs) / scale, tol);
        }

        // (vi) definitional G against the r-form.
        const double a6 = rng.uniform(-2.0, 2.0);
        const double b6 = rng.uniform(-2.0, 2.0);
        rec.input("a6", a6);
        rec.input("b6", b6);
        {
            const double g_def = hooks.g(a6, b6);
            const double g_r = eval_G_rform(a6, b6);
            const double r = a6 * a6 + b6 * b6;
            rec.bounded("g_rform", std::fabs(g_def - g_r) / detail::rel_scale({r * r, (2.0 * a6 - 1.0) * r, 4.0 * a6 * a6}),
                        tol);
        }
    });
}

/// G(a, b) <= 0 forces the tight regime, and b^2 > 3a^2 when a > 0.
inline AuditReport regime_lemma_oracle(std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
                                       const AuditConfig& cfg = {}, const AuditHooks& hooks = {}) {
    return run_suite("regime", trials, seed, workers, [&](std::uint64_t, TrialRng& rng, TrialRecorder& rec) {
        // b^2 is drawn on [0, s_+(a)]; with the true G the accepted draws are
        // uniform on [s_-(a), s_+(a)].
        const auto [a, b] = detail::rejection_sample(
            rng, cfg.sampler_budget,
            [](TrialRng& r) {
                const double a = r.uniform(0.0, 1.0 / 6.0);
                return std::pair{a, std::sqrt(r.uniform(0.0, s_plus(a)))};
            },
            [&](const std::pair<double, double>& c) { return c.second > 0.0 && hooks.g(c.first, c.second) <= 0.0; });
        rec.input("a", a);
        rec.input("b", b);
        const AngleFrame f = build_frame(SpectralPoint(a, b));
        rec.strict("tight", 3.0 * f.m + f.M - kTwoPi);
        if (a > 0.0) {
            rec.strict("b2_gt_3a2", b * b - 3.0 * a * a);
        }
    });
}

/// Strict-interior targets realized and verified against the eigensolver.
inline AuditReport roundtrip_oracle(std::uint64_t trials, std::uint64_t seed, unsigned workers = 1,
                                    const AuditConfig& cfg = {}, const AuditHooks& hooks = {}) {
    return run_suite("roundtrip", trials, seed, workers, [&](std::uint64_t, TrialRng& rng, TrialRecorder& rec) {
        const auto [a, b] = detail::rejection_sample(
            rng, cfg.sampler_budget, [](TrialRng& r) { return std::pair{r.uniform(), 1.0 - r.uniform()}; },
            [&](const std::pair<double, double>& c) { return is_strict_interior(c.first, c.second, hooks); });
        rec.input("a", a);
        rec.input("b", b);
        RealizationCertificate c;
        try {
            c = realize(SpectralPoint(a, b));
        } catch (const Error&) {
            rec.fail("realize");
            return;
        }
        rec.bounded("eig_residual", c.eig_residual, cfg.roundtrip_eig_tol);
        if (c.method == Method::InteriorIVT) {
            rec.bounded("psi_residual", c.psi_residual, cfg.roundtrip_psi_tol);
            double sum = 0.0;
            for (double u : c.angles.value().u) {
                sum += u;
            }
            rec.bounded("angle_sum", std::fabs(sum - kTwoPi), cfg.roundtrip_sum_tol);
        }
        double gap_excess = 0.0;
        for (double t : c.gaps.as_array()) {
            gap_excess = std::max(gap_excess, t - 1.0);
        }
        rec.bounded("gap_range", gap_excess, cfg.roundtrip_gap_slack);
    });
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"necessity", "karamata", "convexity", "identities", "regime", "roundtrip"};
    return names;
}

/// Run a suite by name.
inline AuditReport run_named_suite(const std::string& name, std::uint64_t trials, std::uint64_t seed,
                                   unsigned workers = 1, const AuditConfig& cfg = {}, const AuditHooks& hooks = {}) {
    if (name == "necessity") return mc_necessity(trials, seed, workers, cfg, hooks);
    if (name == "karamata") return karamata_suite(trials, seed, workers, cfg, hooks);
    if (name == "convexity") return convexity_oracle(trials, seed, workers, cfg, hooks);
    if (name == "identities") return identity_suite(trials, seed, workers, cfg, hooks);
    if (name == "regime") return regime_lemma_oracle(trials, seed, workers, cfg, hooks);
    if (name == "roundtrip") return roundtrip_oracle(trials, seed, workers, cfg, hooks);
    throw DomainError("audit: unknown suite '" + name + "'");
}

} // namespace cycle4
