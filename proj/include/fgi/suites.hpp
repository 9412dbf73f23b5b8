#pragma once

// Randomized verification suites over a seeded family of interval unions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fgi/detail/parallel.hpp"
#include "fgi/errors.hpp"
#include "fgi/extension.hpp"
#include "fgi/inequality.hpp"
#include "fgi/set_model.hpp"
#include "fgi/spectral_perimeter.hpp"

namespace fgi {

/// Unions of 1-4 intervals with endpoints uniform in [-3, 3], each end of the
/// union replaced by an infinite one with probability 1/4, measure in [0.05, 0.95].
class RandomSetFamily {
public:
    RandomSetFamily(std::uint64_t seed, std::uint32_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
        rng_.seed(seq);
    }

    /// Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    GaussianSet next() {
        for (;;) {
            const std::size_t count = 1 + index(4);
            std::vector<double> ends(2 * count);
            for (auto& v : ends) v = uniform(-3.0, 3.0);
            std::sort(ends.begin(), ends.end());
            if (uniform() < 0.25) ends.front() = -kInf;
            if (uniform() < 0.25) ends.back() = kInf;
            std::vector<Interval> ivs;
            for (std::size_t i = 0; i < count; ++i) {
                if (ends[2 * i] < ends[2 * i + 1]) ivs.push_back({ends[2 * i], ends[2 * i + 1]});
            }
            if (ivs.empty()) continue;
            GaussianSet e(std::move(ivs));
            const double m = measure(e);
            if (m >= 0.05 && m <= 0.95) return e;
        }
    }

private:
    std::mt19937_64 rng_;
};

enum class Suite { transfer, levelset, bounds, main };

inline constexpr std::array<Suite, 4> kAllSuites{Suite::transfer, Suite::levelset, Suite::bounds, Suite::main};

inline std::string_view to_string(Suite s) {
    switch (s) {
        case Suite::transfer: return "transfer";
        case Suite::levelset: return "levelset";
        case Suite::bounds: return "bounds";
        default: return "main";
    }
}

inline std::size_t default_case_count(Suite s) {
    switch (s) {
        case Suite::transfer: return 500;
        case Suite::main: return 200;
        default: return 50;
    }
}

struct SuiteOptions {
    std::vector<FractionalOrder> s_grid{FractionalOrder(0.25), FractionalOrder(0.5), FractionalOrder(0.75)};
    std::size_t K = kDefaultTruncation;
    std::size_t levelset_K = 4000;
    Convention convention = Convention::with_constant;
    ConstantParams params;
    std::uint64_t seed = 0;
    std::optional<std::size_t> n;  // sets per suite; suite default when empty
};

/// One evaluated check. `lhs` is compared against `rhs` allowing `budget`.
struct CaseRecord {
    Suite suite = Suite::main;
    std::size_t index = 0;  // position of the set in the random sequence
    GaussianSet set;
    std::optional<GaussianSet> other;  // perturbed set of a transfer pair
    std::optional<double> s;
    std::optional<double> t;
    std::optional<double> z;
    double param = 0.0;  // kappa, alpha, z fraction or c
    double lhs = 0.0;
    double rhs = 0.0;
    double budget = 0.0;
    Outcome outcome = Outcome::holds;
    bool retried = false;  // main theorem held only with c raised to c_max
    std::string detail;
};

struct SuiteSummary {
    Suite suite = Suite::main;
    std::optional<double> s;
    std::size_t cases = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t inapplicable = 0;
    std::size_t retried = 0;
};

struct SuiteReport {
    std::vector<SuiteSummary> summaries;
    std::vector<CaseRecord> failures;

    bool ok() const noexcept { return failures.empty(); }
};

namespace detail {

inline std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::vector<GaussianSet> draw_sets(Suite suite, const SuiteOptions& opt) {
    RandomSetFamily family(opt.seed, static_cast<std::uint32_t>(suite));
    std::vector<GaussianSet> sets(opt.n.value_or(default_case_count(suite)));
    for (auto& e : sets) e = family.next();
    return sets;
}

inline void tally(SuiteReport& report, Suite suite, std::optional<double> s,
                  const std::vector<std::vector<CaseRecord>>& groups) {
    SuiteSummary sum;
    sum.suite = suite;
    sum.s = s;
    for (const auto& g : groups) {
        for (const auto& c : g) {
            ++sum.cases;
            if (c.outcome == Outcome::holds) {
                ++sum.passed;
                if (c.retried) ++sum.retried;
            } else if (c.outcome == Outcome::inapplicable) {
                ++sum.inapplicable;
            } else {
                ++sum.failed;
                report.failures.push_back(c);
            }
        }
    }
    report.summaries.push_back(sum);
}

struct TransferPair {
    GaussianSet F;
    GaussianSet E;
    double kappa;
};

// E is F with one or two small intervals toggled (or only removed), shrunk until
// the closeness hypothesis holds or twelve halvings have been tried.
inline std::vector<TransferPair> draw_transfer_pairs(const SuiteOptions& opt) {
    RandomSetFamily family(opt.seed, static_cast<std::uint32_t>(Suite::transfer));
    std::vector<TransferPair> pairs;
    const std::size_t n = opt.n.value_or(default_case_count(Suite::transfer));
    for (std::size_t i = 0; i < n; ++i) {
        TransferPair p{family.next(), {}, family.uniform(0.05, 0.45)};
        const std::size_t pieces = 1 + family.index(2);
        const bool remove_only = family.uniform() < 0.5;
        std::vector<std::pair<double, double>> bumps;
        for (std::size_t j = 0; j < pieces; ++j) bumps.emplace_back(family.uniform(-3.0, 3.0), family.uniform(0.01, 0.5));
        const double mf = measure(p.F);
        const double target = p.kappa * asymmetry(p.F).value * mf;
        double scale = 1.0;
        for (int attempt = 0; attempt < 13; ++attempt, scale *= 0.5) {
            GaussianSet e = p.F;
            for (const auto& [c, w] : bumps) {
                const GaussianSet bump{{c - 0.5 * w * scale, c + 0.5 * w * scale}};
                e = remove_only ? difference(e, bump) : symm_diff(e, bump);
            }
            p.E = e;
            if (measure(symm_diff(p.F, e)) <= target) break;
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

inline SuiteReport run_transfer(const SuiteOptions& opt) {
    const auto pairs = draw_transfer_pairs(opt);
    auto groups = parallel_map(pairs.size(), [&](std::size_t i) {
        const auto& p = pairs[i];
        CaseRecord c;
        c.suite = Suite::transfer;
        c.index = i;
        c.set = p.F;
        c.other = p.E;
        c.param = p.kappa;
        try {
            const auto r = verify_transfer_lemma(p.E, p.F, p.kappa);
            c.outcome = r.outcome;
            c.lhs = r.asym_E;
            c.rhs = r.lower;
            c.budget = 1e-12;
            c.detail = "closeness=" + fmt17(r.closeness) + ";asym_F=" + fmt17(r.asym_F) +
                       ";c_kappa=" + fmt17(r.c_kappa);
        } catch (const std::exception& ex) {
            c.outcome = Outcome::violated;
            c.detail = ex.what();
        }
        return std::vector<CaseRecord>{c};
    });
    SuiteReport report;
    tally(report, Suite::transfer, std::nullopt, groups);
    return report;
}

inline constexpr std::array<double, 3> kLevelTs{0.25, 0.5, 0.75};

inline std::vector<CaseRecord> levelset_cases(const GaussianSet& e, std::size_t index, FractionalOrder s,
                                              const SuiteOptions& opt) {
    std::vector<CaseRecord> out;
    const auto p = perimeter_spectral(e, s, opt.K);
    const ExtensionField field(e, s, opt.levelset_K);
    for (double alpha : {4.0, 16.0}) {
        const double zmax = closeness_z_bound(s, alpha, p.value + p.tail_bound);
        for (double frac : {0.1, 0.5, 0.9}) {
            const double z = frac * zmax;
            std::vector<LevelSetRecord> recs;
            std::string error;
            try {
                recs = level_sets(field, {kLevelTs.begin(), kLevelTs.end()}, z);
            } catch (const std::exception& ex) {
                error = ex.what();
            }
            for (std::size_t j = 0; j < kLevelTs.size(); ++j) {
                CaseRecord c;
                c.suite = Suite::levelset;
                c.index = index;
                c.set = e;
                c.s = s.value();
                c.t = kLevelTs[j];
                c.z = z;
                c.param = alpha;
                if (!error.empty()) {
                    c.outcome = Outcome::violated;
                    c.detail = error;
                } else {
                    const auto r = closeness_from_record(e, recs[j], alpha);
                    c.outcome = r.outcome;
                    c.lhs = std::max(r.lost, r.gained);
                    c.rhs = r.bound;
                    c.budget = r.resolution;
                    c.detail = "lost=" + fmt17(r.lost) + ";gained=" + fmt17(r.gained);
                }
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

inline std::vector<CaseRecord> bounds_cases(const GaussianSet& e, std::size_t index, FractionalOrder s,
                                            const SuiteOptions& opt) {
    std::vector<CaseRecord> out;
    const double m = measure(e);
    const double a = asymmetry(e).value;
    const auto p = perimeter_spectral(e, s, opt.K);
    const auto th = z_thresholds(e, s, p.value + p.tail_bound, p.value);
    const ExtensionField field(e, s, opt.levelset_K);
    for (double frac : {0.25, 0.5, 1.0}) {
        const double z = frac * th.z0;
        std::vector<LevelSetRecord> recs;
        std::string error;
        if (!th.degenerate) {
            try {
                recs = level_sets(field, {kLevelTs.begin(), kLevelTs.end()}, z);
            } catch (const std::exception& ex) {
                error = ex.what();
            }
        }
        for (std::size_t j = 0; j < kLevelTs.size(); ++j) {
            CaseRecord c;
            c.suite = Suite::bounds;
            c.index = index;
            c.set = e;
            c.s = s.value();
            c.t = kLevelTs[j];
            c.z = z;
            c.param = frac;
            if (th.degenerate) {
                c.detail = "zero asymmetry";
            } else if (!error.empty()) {
                c.outcome = Outcome::violated;
                c.detail = error;
            } else {
                const auto r = bounds_from_record(m, a, recs[j]);
                c.outcome = r.outcome;
                c.lhs = r.measure_gap;
                c.rhs = r.measure_bound;
                c.budget = r.resolution;
                c.detail = "asym_level=" + fmt17(r.asym_level) + ";asym_bound=" + fmt17(r.asym_bound) +
                           ";sandwich=" + (r.sandwich ? "yes" : "no");
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

inline std::vector<CaseRecord> main_cases(const GaussianSet& e, std::size_t index, FractionalOrder s,
                                          const SuiteOptions& opt) {
    CaseRecord c;
    c.suite = Suite::main;
    c.index = index;
    c.set = e;
    c.s = s.value();
    c.param = opt.params.c;
    try {
        const auto r = verify_main(e, s, opt.params, opt.K, opt.convention);
        c.lhs = r.deficit;
        c.rhs = r.rhs;
        c.budget = r.budget;
        c.detail = "branch=" + std::string(to_string(r.branch));
        if (r.deficit < -r.budget) {
            c.outcome = Outcome::violated;
            c.detail += ";negative deficit beyond budget";
        } else if (r.satisfied) {
            c.outcome = Outcome::holds;
        } else {
            ConstantParams raised = opt.params;
            raised.c = opt.params.c_max;
            const auto again = verify_main(e, s, raised, opt.K, opt.convention);
            c.retried = again.satisfied;
            c.outcome = again.satisfied ? Outcome::holds : Outcome::violated;
            c.detail += again.satisfied ? ";held with c_max" : ";fails with c_max=" + fmt17(raised.c);
        }
    } catch (const std::exception& ex) {
        c.outcome = Outcome::violated;
        c.detail = ex.what();
    }
    return {c};
}

template <class CaseFn>
SuiteReport run_per_order(Suite suite, const SuiteOptions& opt, CaseFn cases) {
    const auto sets = draw_sets(suite, opt);
    SuiteReport report;
    for (const auto& s : opt.s_grid) {
        auto groups = parallel_map(sets.size(), [&](std::size_t i) { return cases(sets[i], i, s, opt); });
        tally(report, suite, s.value(), groups);
    }
    return report;
}

}  // namespace detail

inline SuiteReport run_suite(Suite suite, const SuiteOptions& opt) {
    switch (suite) {
        case Suite::transfer: return detail::run_transfer(opt);
        case Suite::levelset: return detail::run_per_order(suite, opt, detail::levelset_cases);
        case Suite::bounds: return detail::run_per_order(suite, opt, detail::bounds_cases);
        default: return detail::run_per_order(suite, opt, detail::main_cases);
    }
}

}  // namespace fgi
