#pragma once

// Subcommand bodies. Each returns a table plus the exit status it implies.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fgi/cli/config.hpp"
#include "fgi/cli/set_parser.hpp"
#include "fgi/cli/table.hpp"
#include "fgi/extension.hpp"
#include "fgi/inequality.hpp"
#include "fgi/set_model.hpp"
#include "fgi/spectral_perimeter.hpp"
#include "fgi/suites.hpp"

namespace fgi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
    Table table;
    int exit_code = kExitOk;
    Convention convention = Convention::with_constant;
};

namespace detail {

inline std::vector<GaussianSet> input_sets(const RunConfig& cfg) {
    if (cfg.sets.empty()) throw UsageError("at least one --set is required");
    std::vector<GaussianSet> out;
    for (const auto& text : cfg.sets) out.push_back(parse_set(text).set);
    return out;
}

inline std::vector<FractionalOrder> orders(const RunConfig& cfg, std::vector<double> fallback) {
    const auto& grid = cfg.s_grid.empty() ? fallback : cfg.s_grid;
    std::vector<FractionalOrder> out;
    for (double s : grid) out.emplace_back(s);
    return out;
}

inline Cell count(std::size_t n) { return static_cast<std::int64_t>(n); }

inline Cell optional_number(const std::optional<double>& v) {
    return v ? Cell{*v} : Cell{};
}

}  // namespace detail

inline CommandResult cmd_perimeter(const RunConfig& cfg) {
    CommandResult res;
    res.convention = cfg.convention.value_or(Convention::with_constant);
    res.table.columns = {"set", "s", "K", "convention", "value", "tail_bound"};
    for (const auto& e : detail::input_sets(cfg)) {
        for (const auto& s : detail::orders(cfg, {0.5})) {
            const auto p = perimeter_spectral(e, s, cfg.K, res.convention);
            res.table.add({format_set(e), s.value(), detail::count(cfg.K), std::string(to_string(res.convention)),
                           p.value, p.tail_bound});
        }
    }
    return res;
}

inline CommandResult cmd_deficit(const RunConfig& cfg) {
    CommandResult res;
    res.convention = cfg.convention.value_or(Convention::with_constant);
    res.table.columns = {"set", "s", "K", "convention", "m", "P_E", "P_H", "deficit", "asym",
                         "C", "c", "rhs", "budget", "branch", "satisfied", "note"};
    const ConstantParams params{cfg.c, cfg.c_max};
    for (const auto& e : detail::input_sets(cfg)) {
        for (const auto& s : detail::orders(cfg, {0.5})) {
            const auto r = verify_main(e, s, params, cfg.K, res.convention);
            res.table.add({format_set(e), s.value(), detail::count(cfg.K), std::string(to_string(res.convention)),
                           r.m, r.P_E.value, r.P_H.value, r.deficit, r.asym, r.C, r.c, r.rhs, r.budget,
                           std::string(to_string(r.branch)), r.satisfied, r.note});
            if (!r.satisfied) res.exit_code = kExitFailure;
        }
    }
    return res;
}

inline CommandResult cmd_asymmetry(const RunConfig& cfg) {
    CommandResult res;
    res.convention = cfg.convention.value_or(Convention::with_constant);
    res.table.columns = {"set", "m", "asym", "orientation", "threshold"};
    for (const auto& e : detail::input_sets(cfg)) {
        const auto a = asymmetry(e);
        res.table.add({format_set(e), measure(e), a.value,
                       std::string(a.minimizer.orientation == Orientation::left ? "left" : "right"),
                       a.minimizer.threshold});
    }
    return res;
}

inline CommandResult cmd_extension_eval(const RunConfig& cfg) {
    CommandResult res;
    res.convention = cfg.convention.value_or(Convention::with_constant);
    res.table.columns = {"set", "s", "K", "x", "z", "U"};
    if (cfg.x.empty() || cfg.z.empty()) throw UsageError("extension-eval needs --x and --z values");
    for (double z : cfg.z) {
        if (!(z >= 0.0)) throw UsageError("z must be nonnegative");
    }
    for (const auto& e : detail::input_sets(cfg)) {
        for (const auto& s : detail::orders(cfg, {0.5})) {
            const ExtensionField field(e, s, cfg.K);
            for (double z : cfg.z) {
                const auto damped = field.damped_coefficients(z);
                for (double x : cfg.x) {
                    res.table.add({format_set(e), s.value(), detail::count(cfg.K), x, z,
                                   ExtensionField::sum_series(damped, x, cfg.K)});
                }
            }
        }
    }
    return res;
}

inline CommandResult cmd_verify(const RunConfig& cfg) {
    CommandResult res;
    res.convention = cfg.convention.value_or(Convention::with_constant);
    res.table.columns = {"record", "suite", "index", "set", "other", "s", "t", "z", "param", "lhs", "rhs",
                         "budget", "verdict", "cases", "passed", "failed", "inapplicable", "retried", "detail"};
    SuiteOptions opt;
    if (!cfg.s_grid.empty()) opt.s_grid = detail::orders(cfg, {});
    opt.K = cfg.K;
    opt.levelset_K = cfg.levelset_K;
    opt.convention = res.convention;
    opt.params = {cfg.c, cfg.c_max};
    opt.seed = cfg.seed;
    opt.n = cfg.n;
    for (auto suite : parse_suites(cfg.suite)) {
        const auto report = run_suite(suite, opt);
        for (const auto& sum : report.summaries) {
            res.table.add({std::string("summary"), std::string(to_string(suite)), {}, {}, {},
                           detail::optional_number(sum.s), {}, {}, {}, {}, {}, {},
                           std::string(sum.failed == 0 ? "pass" : "fail"), detail::count(sum.cases),
                           detail::count(sum.passed), detail::count(sum.failed), detail::count(sum.inapplicable),
                           detail::count(sum.retried), {}});
        }
        for (const auto& c : report.failures) {
            res.table.add({std::string("failure"), std::string(to_string(suite)), detail::count(c.index),
                           format_set(c.set), c.other ? Cell{format_set(*c.other)} : Cell{},
                           detail::optional_number(c.s), detail::optional_number(c.t), detail::optional_number(c.z),
                           c.param, c.lhs, c.rhs, c.budget, std::string(to_string(c.outcome)), {}, {}, {}, {}, {},
                           c.detail});
        }
        if (!report.ok()) res.exit_code = kExitFailure;
    }
    return res;
}

inline CommandResult cmd_sweep(const RunConfig& cfg) {
    CommandResult res;
    res.convention = cfg.convention.value_or(Convention::with_constant);
    res.table.columns = {"r", "s", "K", "convention", "value", "tail_bound", "tail_estimate"};
    const auto rs = cfg.r_grid.empty() ? parse_grid("-2:2:0.5") : cfg.r_grid;
    for (double r : rs) {
        for (const auto& s : detail::orders(cfg, {0.25, 0.5, 0.75})) {
            const auto p = halfspace_series(r, s, cfg.K, res.convention);
            res.table.add({r, s.value(), detail::count(cfg.K), std::string(to_string(res.convention)), p.value,
                           p.tail_bound, p.tail_estimate});
        }
    }
    return res;
}

/// (1 - s) P_s of the halfline (-inf, r) from the tail-corrected series, against the claimed limit.
inline CommandResult cmd_asymptotic(const RunConfig& cfg) {
    CommandResult res;
    res.convention = cfg.convention.value_or(Convention::remark);
    res.table.columns = {"s", "r", "K", "convention", "scaled_value", "uncertainty", "limit", "ratio"};
    if (cfg.K < 2) throw UsageError("asymptotic needs K >= 2");
    const auto rs = cfg.r_grid.empty() ? std::vector<double>{0.0} : cfg.r_grid;
    for (double r : rs) {
        for (const auto& s : detail::orders(cfg, {0.9, 0.99, 0.999})) {
            const auto ex = halfspace_extrapolated(r, s, cfg.K, res.convention);
            const double scale = 1.0 - s.value();
            const double limit = asymptotic_limit(r);
            res.table.add({s.value(), r, detail::count(cfg.K), std::string(to_string(res.convention)),
                           scale * ex.value, scale * ex.uncertainty, limit, scale * ex.value / limit});
        }
    }
    return res;
}

}  // namespace fgi::cli
