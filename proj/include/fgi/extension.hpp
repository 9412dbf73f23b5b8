#pragma once

// Spectral form of the extension of chi_E to the upper half plane,
//   U(x, z) = f_0 + sum_{k>=1} f_k psi_{s/2}(sqrt(k) z) h_k(x),
// where psi_sigma is the per-mode subordination multiplier, together with the
// trace gap, the boundary flux of a single mode and superlevel sets of U(., z).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fgi/detail/summation.hpp"
#include "fgi/errors.hpp"
#include "fgi/gauss_core.hpp"
#include "fgi/set_model.hpp"
#include "fgi/spectral_perimeter.hpp"

namespace fgi {

namespace detail {

// int_0^inf u^{a-1} exp(-u - q/u) du as (log of the integrand peak, integral / peak).
// Trapezoid rule in t = log u, refined by halving the step; the integrand is
// log-concave in t and decays doubly exponentially on both sides.
inline std::pair<double, double> bessel_type_integral(double a, double q) {
    const double u_star = 0.5 * (a + std::sqrt(a * a + 4.0 * q));
    const double t_star = std::log(u_star);
    const double log_peak = a * t_star - u_star - q / u_star;
    const double q_star = q / u_star;
    auto log_f = [&](double t) {
        const double d = t - t_star;
        return a * d - u_star * std::expm1(d) - q_star * std::expm1(-d);
    };

    constexpr double kDrop = -46.0;  // e^-46 ~ 1e-20
    const double width = std::min(1.0, 1.0 / std::sqrt(u_star + q / u_star));
    double t_lo = t_star;
    for (double step = 0.25 * width; log_f(t_lo) > kDrop; step *= 1.5) t_lo -= step;
    double t_hi = t_star;
    for (double step = 0.25 * width; log_f(t_hi) > kDrop; step *= 1.5) t_hi += step;

    std::size_t n = 32;
    double h = (t_hi - t_lo) / static_cast<double>(n);
    CompensatedSum sum;
    sum += 0.5 * (std::exp(log_f(t_lo)) + std::exp(log_f(t_hi)));
    for (std::size_t i = 1; i < n; ++i) sum += std::exp(log_f(t_lo + h * static_cast<double>(i)));
    double estimate = h * sum.value();
    for (int level = 0; level < 16; ++level) {
        // Add midpoints of the current grid.
        CompensatedSum mid;
        for (std::size_t i = 0; i < n; ++i) {
            mid += std::exp(log_f(t_lo + h * (static_cast<double>(i) + 0.5)));
        }
        sum += mid.value();
        n *= 2;
        h *= 0.5;
        const double refined = h * sum.value();
        if (std::abs(refined - estimate) <= 1e-14 * refined && level >= 1) {
            return {log_peak, refined};
        }
        estimate = refined;
    }
    std::ostringstream msg;
    msg << "subordination quadrature did not converge (a=" << a << ", q=" << q << ")";
    throw ConvergenceError(msg.str());
}

}  // namespace detail

/// psi_sigma(xi) = (1/Gamma(sigma)) int_0^inf exp(-u - xi^2/(4u)) u^{sigma-1} du.
inline double profile_psi(double sigma, double xi) {
    if (!(sigma > 0.0 && sigma < 1.0)) {
        throw DomainError("profile order must lie in (0,1), got " + std::to_string(sigma));
    }
    if (!(xi >= 0.0)) throw DomainError("profile argument must be >= 0, got " + std::to_string(xi));
    if (xi == 0.0) return 1.0;
    if (xi > 800.0) return 0.0;  // below the smallest subnormal
    try {
        const auto [log_peak, scaled] = detail::bessel_type_integral(sigma, 0.25 * xi * xi);
        return std::exp(log_peak + std::log(scaled) - std::log(gamma_fn(sigma)));
    } catch (const ConvergenceError&) {
        std::ostringstream msg;
        msg << "profile_psi did not converge for sigma=" << sigma << ", xi=" << xi;
        throw ConvergenceError(msg.str());
    }
}

/// d psi_sigma / d xi = -(xi/2) / Gamma(sigma) int_0^inf exp(-u - xi^2/(4u)) u^{sigma-2} du.
inline double profile_psi_derivative(double sigma, double xi) {
    if (!(sigma > 0.0 && sigma < 1.0)) {
        throw DomainError("profile order must lie in (0,1), got " + std::to_string(sigma));
    }
    if (!(xi > 0.0)) {
        if (xi < 0.0) throw DomainError("profile argument must be >= 0");
        if (sigma < 0.5) return -kInf;
        return sigma == 0.5 ? -1.0 : 0.0;
    }
    if (xi < 1e-6) {
        // -(Gamma(1-sigma)/Gamma(sigma)) (xi/2)^{2 sigma-1} + (xi/2)/(1-sigma), relative error O(xi^2)
        return -gamma_fn(1.0 - sigma) / gamma_fn(sigma) * std::pow(0.5 * xi, 2.0 * sigma - 1.0) +
               0.5 * xi / (1.0 - sigma);
    }
    if (xi > 800.0) return 0.0;
    const auto [log_peak, scaled] = detail::bessel_type_integral(sigma - 1.0, 0.25 * xi * xi);
    return -0.5 * xi * std::exp(log_peak + std::log(scaled) - std::log(gamma_fn(sigma)));
}

/// Per-mode multiplier of the extension of order sigma.
class SubordinationProfile {
public:
    explicit SubordinationProfile(double sigma) : sigma_(sigma) {
        if (!(sigma > 0.0 && sigma < 1.0)) {
            throw DomainError("profile order must lie in (0,1), got " + std::to_string(sigma));
        }
    }

    double sigma() const noexcept { return sigma_; }
    double operator()(double xi) const { return profile_psi(sigma_, xi); }
    double derivative(double xi) const { return profile_psi_derivative(sigma_, xi); }

    /// psi(sqrt(k) z) for k = 0..K.
    std::vector<double> mode_multipliers(std::size_t K, double z) const {
        std::vector<double> m(K + 1, 1.0);
        if (z == 0.0) return m;
        for (std::size_t k = 1; k <= K; ++k) {
            const double xi = std::sqrt(static_cast<double>(k)) * z;
            // e^{-xi} bounds psi from above for xi >= 1 and sigma < 1; skip certain underflow.
            m[k] = xi > 800.0 ? 0.0 : profile_psi(sigma_, xi);
        }
        return m;
    }

private:
    double sigma_;
};

/// Spectral extension U_E of chi_E for the perimeter of order s (extension order s/2).
class ExtensionField {
public:
    ExtensionField(const GaussianSet& e, FractionalOrder s, std::size_t K = kDefaultTruncation)
        : coeffs_(spectral_coefficients(e, K)), s_(s), profile_(s.half()) {}

    ExtensionField(SpectralCoefficients coeffs, FractionalOrder s)
        : coeffs_(std::move(coeffs)), s_(s), profile_(s.half()) {}

    const SpectralCoefficients& coefficients() const noexcept { return coeffs_; }
    const GaussianSet& set() const noexcept { return coeffs_.set; }
    FractionalOrder order() const noexcept { return s_; }
    const SubordinationProfile& profile() const noexcept { return profile_; }
    std::size_t truncation() const noexcept { return coeffs_.K; }

    /// f_k psi(sqrt(k) z) for k = 0..K.
    std::vector<double> damped_coefficients(double z) const {
        auto m = profile_.mode_multipliers(coeffs_.K, z);
        for (std::size_t k = 0; k <= coeffs_.K; ++k) m[k] *= coeffs_.f[k];
        return m;
    }

    /// U(x, z) with the first `K` modes (0 means all). Numerically reliable for |x| <= 12.
    double evaluate(double x, double z, std::size_t K = 0) const {
        return sum_series(damped_coefficients(z), x, K == 0 ? coeffs_.K : K);
    }

    static double sum_series(const std::vector<double>& c, double x, std::size_t K) {
        CompensatedSum acc;
        acc += c[0];
        double prev = 1.0;
        double cur = x;
        for (std::size_t k = 1; k <= K; ++k) {
            acc += c[k] * cur;
            const double kd = static_cast<double>(k);
            const double next = (x * cur - std::sqrt(kd) * prev) / std::sqrt(kd + 1.0);
            prev = cur;
            cur = next;
        }
        return acc.value();
    }

private:
    using CompensatedSum = detail::CompensatedSum;

    SpectralCoefficients coeffs_;
    FractionalOrder s_;
    SubordinationProfile profile_;
};

/// Values of U(., z) on a grid, with the truncated sum up to `coarse_K` recorded alongside.
struct FieldSamples {
    std::vector<double> x;
    std::vector<double> fine;    // all K modes
    std::vector<double> coarse;  // first coarse_K modes
    std::size_t coarse_K = 0;
};

inline FieldSamples sample_field(const std::vector<double>& damped, std::vector<double> xs,
                                 std::size_t coarse_K) {
    const std::size_t K = damped.size() - 1;
    const std::size_t n = xs.size();
    FieldSamples out;
    out.coarse_K = coarse_K;
    std::vector<double> prev(n, 1.0);
    std::vector<double> cur(xs);
    std::vector<double> acc(n, damped[0]);
    if (coarse_K == 0) out.coarse = acc;
    for (std::size_t k = 1; k <= K; ++k) {
        const double c = damped[k];
        for (std::size_t i = 0; i < n; ++i) acc[i] += c * cur[i];
        if (k == coarse_K) out.coarse = acc;
        const double a = std::sqrt(static_cast<double>(k));
        const double b = 1.0 / std::sqrt(static_cast<double>(k + 1));
        for (std::size_t i = 0; i < n; ++i) {
            const double next = (xs[i] * cur[i] - a * prev[i]) * b;
            prev[i] = cur[i];
            cur[i] = next;
        }
    }
    out.fine = std::move(acc);
    out.x = std::move(xs);
    return out;
}

/// int_E (1 - U_E(., z)) dgamma = sum_{k>=1} f_k^2 (1 - psi(sqrt(k) z)).
inline double trace_gap(const ExtensionField& field, double z) {
    if (!(z > 0.0)) throw DomainError("trace gap needs z > 0");
    const auto& f = field.coefficients().f;
    const auto m = field.profile().mode_multipliers(field.truncation(), z);
    detail::CompensatedSum acc;
    for (std::size_t k = 1; k < f.size(); ++k) acc += f[k] * f[k] * (1.0 - m[k]);
    return std::max(0.0, acc.value());
}

inline double trace_gap(const GaussianSet& e, FractionalOrder s, double z,
                        std::size_t K = kDefaultTruncation) {
    return trace_gap(ExtensionField(e, s, K), z);
}

/// Right-hand side 2 beta_s z^s P_s(E) of the trace-gap estimate (with-constant perimeter).
inline double trace_gap_bound(FractionalOrder s, double z, double perimeter_with_constant) {
    return 2.0 * constants(s).beta_s * std::pow(z, s.value()) * perimeter_with_constant;
}

/// (-z^{1-2 sigma} d/dz psi_sigma(sqrt(k) z), K_{2 sigma} k^sigma) for a single mode.
inline std::pair<double, double> boundary_flux_check(double sigma, std::size_t k, double z) {
    if (!(z > 0.0 && z <= 0.1)) throw DomainError("boundary flux needs z in (0, 0.1]");
    if (k == 0) return {0.0, 0.0};
    const double rk = std::sqrt(static_cast<double>(k));
    const double left = -std::pow(z, 1.0 - 2.0 * sigma) * rk * profile_psi_derivative(sigma, rk * z);
    const double right = extension_constant(sigma) * std::pow(static_cast<double>(k), sigma);
    return {left, right};
}

/// Limit z -> 0 of the left flux entry: two Richardson sweeps over z = 1e-2, 1e-3, 1e-4,
/// removing the z^{2-2 sigma} and z^2 corrections.
inline double boundary_flux_limit(double sigma, std::size_t k) {
    if (k == 0) return 0.0;
    const double f1 = boundary_flux_check(sigma, k, 1e-2).first;
    const double f2 = boundary_flux_check(sigma, k, 1e-3).first;
    const double f3 = boundary_flux_check(sigma, k, 1e-4).first;
    const double r1 = std::pow(10.0, 2.0 - 2.0 * sigma);
    const double g1 = (r1 * f2 - f1) / (r1 - 1.0);
    const double g2 = (r1 * f3 - f2) / (r1 - 1.0);
    return (100.0 * g2 - g1) / 99.0;
}

// ---------------------------------------------------------------------------
// Superlevel sets
// ---------------------------------------------------------------------------

struct LevelSetRecord {
    double t = 0.0;
    double z = 0.0;
    GaussianSet set;
    double mu = 0.0;           // measure(set)
    double resolution = 0.0;   // estimated measure error of `set` from truncation
    double oscillation = 0.0;  // overshoot of U outside [0, 1] on the grid
    double window = 0.0;       // extraction window [-window, window]
};

struct LevelSetGrid {
    double x_min = -8.0;
    double x_max = 8.0;
    double step = 1e-3;
    double tolerance = 1e-10;
    std::size_t max_crossings = 64;
};

namespace detail {

inline GaussianSet extract_superlevel(const std::vector<double>& damped,
                                      const std::vector<double>& xs, const std::vector<double>& u,
                                      double t, std::size_t K, const LevelSetGrid& grid) {
    auto above = [&](double x) { return ExtensionField::sum_series(damped, x, K) > t; };
    auto refine = [&](double a, double b, bool a_above) {
        while (b - a > grid.tolerance) {
            const double m = 0.5 * (a + b);
            if (above(m) == a_above) {
                a = m;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };
    std::vector<Interval> out;
    std::size_t crossings = 0;
    bool inside = u.front() > t;
    double start = -kInf;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const bool now = u[i] > t;
        if (now == inside) continue;
        if (++crossings > grid.max_crossings) {
            std::ostringstream msg;
            msg << "level set at t=" << t << " has more than " << grid.max_crossings
                << " crossings on the grid";
            throw ResolutionError(msg.str());
        }
        const double x = refine(xs[i - 1], xs[i], inside);
        if (now) {
            start = x;
        } else {
            out.push_back({start, x});
        }
        inside = now;
    }
    if (inside) out.push_back({start, kInf});
    return GaussianSet(std::move(out));
}

}  // namespace detail

/// Half-width of the region where the K-term series is trusted pointwise: the
/// truncation error grows like e^{x^2/4} / K, so beyond 2 sqrt(log(K/20)) it can reach 0.05.
inline double trusted_halfwidth(std::size_t K) {
    const double k = std::max(static_cast<double>(K), 20.0 * std::numbers::e);
    return 2.0 * std::sqrt(std::log(k / 20.0));
}

/// Superlevel sets {x : U(x, z) > t} for several thresholds, sharing one grid evaluation.
/// Sign changes are searched on the grid clipped to the trusted window; membership
/// is extended constantly beyond it and the mass outside is added to `resolution`.
inline std::vector<LevelSetRecord> level_sets(const ExtensionField& field, const std::vector<double>& ts,
                                              double z, const LevelSetGrid& grid = {}) {
    if (!(z > 0.0)) throw DomainError("level sets need z > 0");
    const auto damped = field.damped_coefficients(z);
    const std::size_t K = field.truncation();
    const double window = std::min({trusted_halfwidth(K), -grid.x_min, grid.x_max});
    const double first = grid.x_min + grid.step * std::ceil((-window - grid.x_min) / grid.step - 1e-9);
    const auto n = static_cast<std::size_t>(std::floor((window - first) / grid.step + 1e-9)) + 1;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = first + grid.step * static_cast<double>(i);
    const double outside = phi(xs.front()) + phi(-xs.back());
    const std::size_t coarse_K = K / 2;
    const auto samples = sample_field(damped, xs, coarse_K);

    double oscillation = 0.0;
    for (double v : samples.fine) oscillation = std::max({oscillation, v - 1.0, -v});

    std::vector<LevelSetRecord> out;
    for (double t : ts) {
        LevelSetRecord rec;
        rec.t = t;
        rec.z = z;
        rec.oscillation = oscillation;
        rec.window = window;
        if (t < 1.0) {
            rec.set = detail::extract_superlevel(damped, samples.x, samples.fine, t, K, grid);
            const auto coarse =
                detail::extract_superlevel(damped, samples.x, samples.coarse, t, coarse_K, grid);
            rec.resolution = measure(symm_diff(rec.set, coarse)) / (std::numbers::sqrt2 - 1.0) + outside;
        }
        rec.mu = measure(rec.set);
        out.push_back(std::move(rec));
    }
    return out;
}

inline LevelSetRecord level_set(const ExtensionField& field, double t, double z, const LevelSetGrid& grid = {}) {
    return level_sets(field, {t}, z, grid).front();
}

}  // namespace fgi
