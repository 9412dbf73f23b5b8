#pragma once

// Deficit, the explicit stability constant, the thresholds z0 / z1 and the
// checks built on superlevel sets of the extension.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fgi/errors.hpp"
#include "fgi/extension.hpp"
#include "fgi/gauss_core.hpp"
#include "fgi/set_model.hpp"
#include "fgi/spectral_perimeter.hpp"

namespace fgi {

/// min of I over [5m/9, 13m/9]; I is unimodal so an endpoint wins.
inline double sigma_min(double m) {
    if (!(m > 0.0 && 13.0 * m / 9.0 < 1.0)) {
        throw DomainError("sigma_min needs 0 < m < 9/13, got " + std::to_string(m));
    }
    return std::min(iso_function(5.0 * m / 9.0), iso_function(13.0 * m / 9.0));
}

/// e^{r^2/2} / (1 + r^2) with r = Phi^{-1}(m).
inline double f_weight(double m) {
    const double r = phi_inv(m);
    return std::exp(0.5 * r * r) / (1.0 + r * r);
}

/// Perimeter value rescaled to the with-constant normalization.
inline double with_constant_value(const PerimeterValue& p) {
    return p.value * constants(p.s).K_s / convention_factor(p.convention, p.s);
}

inline double with_constant_tail(const PerimeterValue& p) {
    return p.tail_bound * constants(p.s).K_s / convention_factor(p.convention, p.s);
}

struct Thresholds {
    double z0 = 0.0;
    double z1 = 0.0;
    bool degenerate = false;  // zero asymmetry
};

/// z0 = (A m / (72 beta P_E))^{1/s}, z1 = (A m / (144 beta P_H))^{1/s}, with-constant perimeters.
inline Thresholds z_thresholds(const GaussianSet& e, FractionalOrder s, double P_E, double P_H) {
    const double m = detail::checked_measure(e, "z_thresholds");
    const double a = asymmetry(e).value;
    if (a == 0.0) return {0.0, 0.0, true};
    if (!(P_E > 0.0 && P_H > 0.0)) throw DomainError("z_thresholds needs positive perimeters");
    const double beta = constants(s).beta_s;
    const double inv_s = 1.0 / s.value();
    return {std::pow(a * m / (72.0 * beta * P_E), inv_s), std::pow(a * m / (144.0 * beta * P_H), inv_s), false};
}

struct ConstantParams {
    double c = 1.0;        // assumed value of the absolute constant
    double c_max = 1000.0; // largest value tried before a violation is considered persistent
};

/// C_{s,m} = 3^{4-4/s} 5^2 / (13^2 c) (1/2)^{8/s+2} sqrt(e)/(2-s) sigma_m m^{2/s-2} / (beta_s P_H)^{2/s-1}.
inline double constant_C(FractionalOrder s, double m, const ConstantParams& params, const PerimeterValue& P_H) {
    if (!(params.c > 0.0)) throw DomainError("constant c must be positive");
    if (!(m > 0.0 && m <= 0.5)) throw DomainError("constant_C needs 0 < m <= 1/2, got " + std::to_string(m));
    const double sv = s.value();
    const double q = 2.0 / sv;
    const double bp = constants(s).beta_s * with_constant_value(P_H);
    return std::pow(3.0, 4.0 - 4.0 / sv) * 25.0 / (169.0 * params.c) * std::pow(0.5, 4.0 * q + 2.0) *
           std::sqrt(std::numbers::e) / (2.0 - sv) * sigma_min(m) * std::pow(m, q - 2.0) / std::pow(bp, q - 1.0);
}

enum class Branch { main, large_perimeter };

inline std::string_view to_string(Branch b) { return b == Branch::main ? "main" : "large_perimeter"; }

struct DeficitReport {
    GaussianSet E;
    FractionalOrder s{0.5};
    double m = 0.0;      // measure(E)
    PerimeterValue P_E;
    PerimeterValue P_H;
    double deficit = 0.0;
    double asym = 0.0;   // asymmetry of E or of its complement, whichever has measure <= 1/2
    double C = 0.0;      // 0 on the large_perimeter branch
    double c = 1.0;
    double rhs = 0.0;
    double budget = 0.0;
    bool satisfied = false;
    Branch branch = Branch::main;
    std::string note;
};

/// Checks deficit >= C asym^{2/s} - budget, or the reduction bound when P_E > 2 P_H.
/// All quantities refer to the representative of {E, E^c} of measure <= 1/2.
inline DeficitReport verify_main(const GaussianSet& e, FractionalOrder s, const ConstantParams& params = {},
                                 std::size_t K = kDefaultTruncation,
                                 Convention conv = Convention::with_constant) {
    DeficitReport r;
    r.E = e;
    r.s = s;
    r.m = detail::checked_measure(e, "verify_main");
    r.c = params.c;
    const GaussianSet rep = r.m <= 0.5 ? e : complement(e);
    const double m = r.m <= 0.5 ? r.m : measure(rep);
    r.P_E = perimeter_spectral(rep, s, K, conv);
    r.P_H = perimeter_spectral(GaussianSet::left_halfline(phi_inv(m)), s, K, conv);
    r.deficit = r.P_E.value - r.P_H.value;
    r.asym = asymmetry(rep).value;
    r.budget = 2.0 * (r.P_E.tail_bound + r.P_H.tail_bound);
    const double q = 2.0 / s.value();
    const double a_pow = std::pow(r.asym, q);
    if (r.P_E.value > 2.0 * r.P_H.value) {
        r.branch = Branch::large_perimeter;
        r.rhs = r.P_H.value / std::pow(2.0, q) * a_pow;
    } else {
        r.branch = Branch::main;
        r.C = constant_C(s, m, params, r.P_H);
        // constant_C is in with-constant units; express the bound in the report's convention
        r.rhs = r.C * a_pow * convention_factor(conv, s) / constants(s).K_s;
    }
    r.satisfied = r.deficit >= r.rhs - r.budget;
    std::ostringstream note;
    note << "absolute constant c=" << params.c << " is assumed, its true value is unknown";
    r.note = note.str();
    return r;
}

// ---------------------------------------------------------------------------
// Asymmetry transfer
// ---------------------------------------------------------------------------

enum class Outcome { holds, violated, inapplicable };

inline std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::holds: return "holds";
        case Outcome::violated: return "violated";
        default: return "inapplicable";
    }
}

struct TransferCheck {
    Outcome outcome = Outcome::inapplicable;
    double closeness = 0.0;  // gamma(F sym-diff E) / gamma(F)
    double asym_E = 0.0;
    double asym_F = 0.0;
    double c_kappa = 1.0;
    double lower = 0.0;      // (1 - 2 kappa) / c_kappa * asym_F
};

/// If gamma(F sym-diff E)/gamma(F) <= kappa asym(F), checks asym(E) >= (1-2 kappa)/c_kappa asym(F).
inline TransferCheck verify_transfer_lemma(const GaussianSet& e, const GaussianSet& f, double kappa) {
    if (!(kappa > 0.0 && kappa < 0.5)) throw DomainError("kappa must lie in (0, 1/2)");
    TransferCheck r;
    const double mf = measure(f);
    const double me = measure(e);
    if (!(mf > 0.0 && mf < 1.0 && me > 0.0 && me < 1.0)) return r;
    r.asym_F = asymmetry(f).value;
    r.closeness = measure(symm_diff(f, e)) / mf;
    if (r.closeness > kappa * r.asym_F) return r;
    r.asym_E = asymmetry(e).value;
    r.c_kappa = measure(difference(e, f)) < 1e-14 ? 1.0 : 1.0 + 2.0 * kappa;
    r.lower = (1.0 - 2.0 * kappa) / r.c_kappa * r.asym_F;
    // rounding slack of the measure evaluations
    r.outcome = r.asym_E >= r.lower - 1e-12 ? Outcome::holds : Outcome::violated;
    return r;
}

// ---------------------------------------------------------------------------
// Superlevel-set checks
// ---------------------------------------------------------------------------

/// Upper bound for z in the closeness check, (1 / (8 alpha beta_s P))^{1/s}.
inline double closeness_z_bound(FractionalOrder s, double alpha, double P_with_constant) {
    return std::pow(1.0 / (8.0 * alpha * constants(s).beta_s * P_with_constant), 1.0 / s.value());
}

struct ClosenessCheck {
    Outcome outcome = Outcome::holds;
    double lost = 0.0;        // gamma(E \ E_{t,z})
    double gained = 0.0;      // gamma(E_{t,z} \ E)
    double bound = 0.0;       // 1 / alpha
    double resolution = 0.0;  // measure uncertainty of E_{t,z}
};

/// Compares a computed superlevel set with E; a violation must survive the resolution budget.
inline ClosenessCheck closeness_from_record(const GaussianSet& e, const LevelSetRecord& rec, double alpha) {
    ClosenessCheck r;
    r.lost = measure(difference(e, rec.set));
    r.gained = measure(difference(rec.set, e));
    r.bound = 1.0 / alpha;
    r.resolution = rec.resolution;
    const bool fails = r.lost - r.resolution > r.bound || r.gained - r.resolution > r.bound;
    r.outcome = fails ? Outcome::violated : Outcome::holds;
    return r;
}

inline void check_levelset_t(double t) {
    if (!(t >= 0.25 && t <= 0.75)) throw DomainError("level-set checks need t in [1/4, 3/4]");
}

inline ClosenessCheck verify_levelset_closeness(const GaussianSet& e, FractionalOrder s, double t, double z,
                                                double alpha, std::size_t K = kDefaultTruncation) {
    check_levelset_t(t);
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    const auto p = perimeter_spectral(e, s, K);
    const double zmax = closeness_z_bound(s, alpha, p.value + p.tail_bound);
    if (!(z > 0.0 && z < zmax)) {
        std::ostringstream msg;
        msg << "closeness check needs 0 < z < " << zmax << ", got " << z;
        throw DomainError(msg.str());
    }
    return closeness_from_record(e, level_set(ExtensionField(e, s, K), t, z), alpha);
}

struct BoundsCheck {
    Outcome outcome = Outcome::holds;
    bool vacuous = false;        // zero asymmetry, empty z-range
    double measure_gap = 0.0;    // |mu_z(t) - m|
    double measure_bound = 0.0;  // (2/9) m A
    double asym_level = 0.0;     // asymmetry of E_{t,z}
    double asym_bound = 0.0;     // (5/13) A
    double resolution = 0.0;
    bool sandwich = true;        // (5/9) m < mu < (13/9) m, up to the resolution budget
};

/// Measure and asymmetry bounds for a computed superlevel set of E (measure m, asymmetry a).
inline BoundsCheck bounds_from_record(double m, double a, const LevelSetRecord& rec) {
    BoundsCheck r;
    const double delta = rec.resolution;
    r.resolution = delta;
    r.measure_gap = std::abs(rec.mu - m);
    r.measure_bound = 2.0 / 9.0 * m * a;
    r.asym_bound = 5.0 / 13.0 * a;
    const double mu = rec.mu;
    double numerator = 0.0;
    if (mu > 0.0 && mu < 1.0) {
        r.asym_level = asymmetry(rec.set).value;
        numerator = r.asym_level * mu;
    }
    // Largest asymmetry compatible with a set perturbed by measure delta: the
    // numerator moves by at most 2 delta and the measure by at most delta.
    const double asym_upper = mu - delta > 0.0 ? (numerator + 2.0 * delta) / (mu - delta)
                                               : std::numeric_limits<double>::infinity();
    const bool measure_fails = r.measure_gap - delta > r.measure_bound;
    const bool asym_fails = asym_upper < r.asym_bound;
    r.sandwich = mu + delta > 5.0 / 9.0 * m && mu - delta < 13.0 / 9.0 * m;
    r.outcome = measure_fails || asym_fails ? Outcome::violated : Outcome::holds;
    return r;
}

inline BoundsCheck verify_levelset_bounds(const GaussianSet& e, FractionalOrder s, double t, double z,
                                          std::size_t K = kDefaultTruncation) {
    check_levelset_t(t);
    const double m = detail::checked_measure(e, "verify_levelset_bounds");
    const double a = asymmetry(e).value;
    if (a == 0.0) {
        BoundsCheck r;
        r.vacuous = true;
        return r;
    }
    const auto p = perimeter_spectral(e, s, K);
    const double z0 = z_thresholds(e, s, p.value + p.tail_bound, p.value).z0;
    if (!(z > 0.0 && z <= z0)) {
        std::ostringstream msg;
        msg << "level-set bounds need 0 < z <= z0 = " << z0 << ", got " << z;
        throw DomainError(msg.str());
    }
    return bounds_from_record(m, a, level_set(ExtensionField(e, s, K), t, z));
}

}  // namespace fgi
