#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "audit.hpp"
#include "boundary.hpp"
#include "errors.hpp"
#include "matrix_family.hpp"
#include "realization.hpp"
#include "region_algebra.hpp"
#include "serialize.hpp"

/**
 * @file cli.hpp
 * @brief The `cycle4` command line.
 *
 *     cycle4 check A B
 *     cycle4 realize A B
 *     cycle4 spectrum ALPHA BETA GAMMA DELTA
 *     cycle4 boundary {left|right} --steps N [--out PATH]
 *     cycle4 audit SUITE [--trials N] [--seed S] [--workers W]
 *
 * Global flags: --eps-band, --eps-real, --json-indent. CYCLE4_SEED sets
 * the default audit seed.
 */

namespace cycle4::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kOutside = 2,
    kSolver = 3,
    kAuditFailed = 4,
};

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("CYCLE4_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

/// Default trial count per suite when --trials is not given.
inline std::uint64_t default_trials(const std::string& suite) {
    if (suite == "necessity") return 1'000'000;
    if (suite == "karamata") return 100;
    if (suite == "identities") return 100'000;
    if (suite == "roundtrip") return 1'000;
    return 10'000;
}

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral region tools for the 4-cycle row-stochastic family", "cycle4"};
    app.require_subcommand(1);
    app.fallthrough();

    Tolerances tol;
    int indent = 2;
    app.add_option("--eps-band", tol.eps_band, "Boundary band half-width")->check(CLI::PositiveNumber);
    app.add_option("--eps-real", tol.eps_real, "Imaginary parts at or below this are real")->check(CLI::PositiveNumber);
    app.add_option("--json-indent", indent, "JSON indentation (0 for one line)");

    double a = 0.0;
    double b = 0.0;
    auto* check = app.add_subcommand("check", "Classify lambda = A + iB against the region");
    check->add_option("A", a)->required();
    check->add_option("B", b)->required();

    auto* realize_cmd = app.add_subcommand("realize", "Find parameters with A + iB in the spectrum");
    realize_cmd->add_option("A", a)->required();
    realize_cmd->add_option("B", b)->required();

    std::array<double, 4> params{};
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of A(alpha, beta, gamma, delta)");
    spectrum->add_option("ALPHA", params[0])->required();
    spectrum->add_option("BETA", params[1])->required();
    spectrum->add_option("GAMMA", params[2])->required();
    spectrum->add_option("DELTA", params[3])->required();

    std::string curve;
    int steps = 500;
    std::string out_path;
    auto* boundary = app.add_subcommand("boundary", "Write a sampled boundary curve as CSV");
    boundary->add_option("CURVE", curve)->required()->check(CLI::IsMember({"left", "right"}));
    boundary->add_option("--steps", steps, "Number of rows")->check(CLI::Range(2, 100'000'000));
    boundary->add_option("--out", out_path, "Output path (stdout when omitted)");

    std::string suite;
    std::uint64_t trials = 0;
    std::uint64_t seed = default_seed();
    unsigned workers = 1;
    auto* audit = app.add_subcommand("audit", "Run a numeric audit suite");
    std::vector<std::string> choices = suite_names();
    choices.emplace_back("all");
    audit->add_option("SUITE", suite)->required()->check(CLI::IsMember(choices));
    audit->add_option("--trials", trials, "Trials per suite")->check(CLI::PositiveNumber);
    audit->add_option("--seed", seed, "RNG seed");
    audit->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));

    try {
        // CLI11 consumes a reversed argument list without the program name.
        std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
        std::reverse(rev.begin(), rev.end());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    auto emit = [&](const Json& j) { out << to_json_text(j, indent) << '\n'; };

    try {
        if (*check) {
            const SpectralPoint p(a, b);
            if (!std::isfinite(a) || !std::isfinite(b)) {
                err << "error: A and B must be finite\n";
                return kUsage;
            }
            const RegionVerdict v = classify(p, tol);
            emit(to_json(v, p));
            return (v.kind == RegionKind::Exterior || v.kind == RegionKind::RealAxis) ? kOutside : kOk;
        }
        if (*realize_cmd) {
            if (!std::isfinite(a) || !std::isfinite(b)) {
                err << "error: A and B must be finite\n";
                return kUsage;
            }
            RealizeOptions opt;
            opt.tol = tol;
            try {
                emit(to_json(realize(SpectralPoint(a, b), opt)));
                return kOk;
            } catch (const OutsideRegion& e) {
                Json violated = Json::array();
                for (Constraint c : e.violated) {
                    violated.push_back(to_string(c));
                }
                emit(Json{{"error", "OutsideRegion"}, {"message", e.what()}, {"violated", violated}});
                return kOutside;
            } catch (const DomainError& e) {
                err << "error: " << e.what() << '\n';
                return kOutside;
            } catch (const Error& e) {
                err << "error: " << e.what() << '\n';
                return kSolver;
            }
        }
        if (*spectrum) {
            MatrixParams p;
            try {
                p = MatrixParams(params[0], params[1], params[2], params[3]);
            } catch (const DomainError& e) {
                err << "error: " << e.what() << '\n';
                return kUsage;
            }
            emit(to_json(eigenvalues(p)));
            return kOk;
        }
        if (*boundary) {
            const auto rows = curve == "left" ? trace_left_curve(steps) : trace_right_edge(steps);
            if (out_path.empty()) {
                write_curve_csv(out, rows);
                return kOk;
            }
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                err << "error: cannot open " << out_path << " for writing\n";
                return kUsage;
            }
            write_curve_csv(file, rows);
            file.close();
            if (!file) {
                err << "error: failed writing " << out_path << '\n';
                return kUsage;
            }
            return kOk;
        }
        if (*audit) {
            const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
            Json reports = Json::array();
            bool passed = true;
            for (const auto& name : names) {
                const std::uint64_t n = trials > 0 ? trials : default_trials(name);
                const AuditReport r = run_named_suite(name, n, seed, workers);
                passed = passed && r.passed();
                reports.push_back(to_json(r));
            }
            emit(Json{{"passed", passed}, {"seed", seed}, {"suites", reports}});
            return passed ? kOk : kAuditFailed;
        }
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kSolver;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace cycle4::cli
