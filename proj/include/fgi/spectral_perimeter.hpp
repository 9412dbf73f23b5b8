#pragma once

// Fractional Gaussian perimeter through the Hermite expansion of a
// characteristic function: P_s(E) = (K_s / 2) sum_k k^{s/2} f_k^2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fgi/detail/summation.hpp"
#include "fgi/errors.hpp"
#include "fgi/gauss_core.hpp"
#include "fgi/set_model.hpp"

namespace fgi {

inline constexpr std::size_t kDefaultTruncation = 10000;

enum class Convention {
    with_constant,  // (K_s / 2) sum k^{s/2} f_k^2
    remark,         // (1 / 2) sum k^{s/2} f_k^2, no K_s factor
};

inline std::string_view to_string(Convention c) {
    return c == Convention::with_constant ? "with-constant" : "remark";
}

inline double convention_factor(Convention c, FractionalOrder s) {
    return c == Convention::with_constant ? constants(s).K_s : 1.0;
}

/// Coefficients f_0..f_K of chi_E on the orthonormal Hermite basis.
struct SpectralCoefficients {
    GaussianSet set;
    std::size_t K = 0;
    std::vector<double> f;
};

struct PerimeterValue {
    double value = 0.0;
    FractionalOrder s{0.5};
    std::size_t K = 0;
    double tail_bound = 0.0;     // overestimate of the neglected tail
    Convention convention = Convention::with_constant;
    double tail_estimate = 0.0;  // asymptotic expectation of the neglected tail

    double extrapolated() const noexcept { return value + tail_estimate; }
};

namespace detail {

// A_k(x) = e^{-x^2/2} h_{k-1}(x) / sqrt(2 pi k) for k = 1..K, so that
// int_a^b h_k dgamma = A_k(a) - A_k(b).
inline void accumulate_endpoint(std::vector<double>& f, double x, double sign) {
    const std::size_t K = f.size() - 1;
    ScaledHermite h(x);
    for (std::size_t k = 1; k <= K; ++k) {
        f[k] += sign * h.value() / std::sqrt(2.0 * kPi * static_cast<double>(k));
        h.advance();
    }
}

// sum_{k > K} x^{-1-eps} (1 - c/x)^{-1/2} by Euler-Maclaurin on a binomial
// expansion of the integral.
inline double shifted_zeta_tail(double eps, double c, double K) {
    if (K <= 4.0 * c) c = 0.0;
    const double u = c / K;
    double integral = 0.0;
    double b = 1.0;  // C(2j, j) / 4^j
    double upow = 1.0;
    for (int j = 0; j < 200; ++j) {
        const double term = b * upow / (eps + j);
        integral += term;
        if (std::abs(term) < 1e-17 * std::abs(integral)) break;
        b *= (2.0 * j + 1.0) / (2.0 * j + 2.0);
        upow *= u;
    }
    integral *= std::pow(K, -eps);
    const double g = std::pow(K, -1.0 - eps) / std::sqrt(1.0 - u);
    const double dg = g * (-(1.0 + eps) / K - 0.5 * (c / (K * K)) / (1.0 - u));
    return integral - 0.5 * g - dg / 12.0;
}

// Expected remainder sum_{k>K} (1/2) k^{s/2} f_k^2 for a single jump at a,
// from the mean square of h_{k-1}(a) in the oscillatory region,
// sqrt(2/pi) e^{a^2/2} / sqrt(4k - 2 - a^2). Cross terms between jumps average out.
inline double endpoint_tail_estimate(double a, double s, std::size_t K) {
    const double eps = 0.5 * (1.0 - s);
    const double pref = std::exp(-0.5 * a * a) * std::sqrt(2.0 / kPi) / (8.0 * kPi);
    return pref * shifted_zeta_tail(eps, 0.25 * (2.0 + a * a), static_cast<double>(K));
}

// Overestimate of sum_{k>K} summand_k when summand_k ~ C k^{-1-eps}, with C the
// largest normalized summand over the last retained block.
inline double calibrated_tail(const std::vector<double>& summand, double eps) {
    const std::size_t K = summand.size() - 1;
    if (K == 0) return 0.0;
    double c = 0.0;
    for (std::size_t k = K / 2 + 1; k <= K; ++k) {
        c = std::max(c, summand[k] * std::pow(static_cast<double>(k), 1.0 + eps));
    }
    return c * std::pow(static_cast<double>(K), -eps) / eps;
}

}  // namespace detail

inline SpectralCoefficients spectral_coefficients(const GaussianSet& e, std::size_t K) {
    SpectralCoefficients c{e, K, std::vector<double>(K + 1, 0.0)};
    c.f[0] = measure(e);
    for (const auto& jump : e.jumps()) detail::accumulate_endpoint(c.f, jump.x, jump.sign);
    return c;
}

/// Coefficient f_k of chi_{(-inf, r)}.
inline double coeff_halfline(double r, std::size_t k) {
    if (k == 0) return phi(r);
    return -std::exp(-0.5 * r * r) * hermite_eval(k - 1, r) / std::sqrt(2.0 * kPi * static_cast<double>(k));
}

/// Coefficient f_k of chi_E.
inline double coeff_set(const GaussianSet& e, std::size_t k) {
    return spectral_coefficients(e, k).f[k];
}

inline PerimeterValue perimeter_from_coefficients(const SpectralCoefficients& c, FractionalOrder s,
                                                  Convention conv) {
    if (c.K < 1) throw DomainError("perimeter needs truncation K >= 1");
    const double sv = s.value();
    std::vector<double> summand(c.K + 1, 0.0);
    detail::CompensatedSum acc;
    for (std::size_t k = 1; k <= c.K; ++k) {
        summand[k] = 0.5 * std::pow(static_cast<double>(k), 0.5 * sv) * c.f[k] * c.f[k];
        acc += summand[k];
    }
    const double factor = convention_factor(conv, s);
    double estimate = 0.0;
    for (const auto& jump : c.set.jumps()) estimate += detail::endpoint_tail_estimate(jump.x, sv, c.K);
    PerimeterValue p;
    p.value = factor * acc.value();
    p.s = s;
    p.K = c.K;
    p.tail_bound = factor * detail::calibrated_tail(summand, 0.5 * (1.0 - sv));
    p.convention = conv;
    p.tail_estimate = factor * estimate;
    return p;
}

/// Truncated spectral perimeter sum_{k=1}^K; tail_bound overestimates the remainder.
inline PerimeterValue perimeter_spectral(const GaussianSet& e, FractionalOrder s,
                                         std::size_t K = kDefaultTruncation,
                                         Convention conv = Convention::with_constant) {
    if (K < 1) throw DomainError("perimeter needs truncation K >= 1");
    return perimeter_from_coefficients(spectral_coefficients(e, K), s, conv);
}

/// Perimeter of the halfline (-inf, r) from the closed-form series
/// (1 / 4 pi) e^{-r^2} sum_k k^{s/2 - 1} h_{k-1}(r)^2.
inline PerimeterValue halfspace_series(double r, FractionalOrder s,
                                       std::size_t K = kDefaultTruncation,
                                       Convention conv = Convention::with_constant) {
    if (K < 1) throw DomainError("halfspace series needs truncation K >= 1");
    const double sv = s.value();
    const double eps = 0.5 * (1.0 - sv);
    detail::ScaledHermite h(r);
    detail::CompensatedSum acc;
    for (std::size_t k = 1; k <= K; ++k) {
        const double v = h.value();
        acc += std::pow(static_cast<double>(k), 0.5 * sv - 1.0) * v * v;
        h.advance();
    }
    const double factor = convention_factor(conv, s);
    PerimeterValue p;
    p.value = factor * acc.value() / (4.0 * kPi);
    p.s = s;
    p.K = K;
    // Envelope bound h_{k-1}(r)^2 <~ sqrt(2/pi) e^{r^2/2} / sqrt(k), integrated from K.
    p.tail_bound = factor * std::sqrt(2.0 / kPi) * std::exp(-0.5 * r * r) *
                   std::pow(static_cast<double>(K), -eps) / (eps * 4.0 * kPi);
    p.convention = conv;
    p.tail_estimate = factor * detail::endpoint_tail_estimate(r, sv, K);
    return p;
}

/// Perimeter of a halfline of Gaussian measure m.
inline PerimeterValue halfspace_perimeter(double m, FractionalOrder s,
                                          std::size_t K = kDefaultTruncation,
                                          Convention conv = Convention::with_constant) {
    return halfspace_series(phi_inv(m), s, K, conv);
}

/// Tail-corrected perimeter: truncated sum plus the asymptotic remainder, with
/// `uncertainty` the change of that corrected value between K/2 and K.
struct ExtrapolatedPerimeter {
    double value = 0.0;
    double uncertainty = 0.0;
    std::size_t K = 0;
};

inline ExtrapolatedPerimeter perimeter_extrapolated(const GaussianSet& e, FractionalOrder s,
                                                    std::size_t K,
                                                    Convention conv = Convention::with_constant) {
    if (K < 2) throw DomainError("extrapolated perimeter needs K >= 2");
    const auto coeffs = spectral_coefficients(e, K);
    const auto full = perimeter_from_coefficients(coeffs, s, conv);
    SpectralCoefficients half{coeffs.set, K / 2, {coeffs.f.begin(), coeffs.f.begin() + K / 2 + 1}};
    const auto coarse = perimeter_from_coefficients(half, s, conv);
    return {full.extrapolated(), std::abs(full.extrapolated() - coarse.extrapolated()), K};
}

inline ExtrapolatedPerimeter halfspace_extrapolated(double r, FractionalOrder s, std::size_t K,
                                                    Convention conv = Convention::with_constant) {
    if (K < 2) throw DomainError("extrapolated perimeter needs K >= 2");
    const auto full = halfspace_series(r, s, K, conv);
    const auto coarse = halfspace_series(r, s, K / 2, conv);
    return {full.extrapolated(), std::abs(full.extrapolated() - coarse.extrapolated()), K};
}

/// Perimeter of the cylinder R x E1 in the plane, from the tensor Hermite basis
/// h_j (x) h_k with eigenvalue j + k; the first factor's coefficients are those
/// of chi_R, computed rather than assumed.
inline PerimeterValue cylinder_perimeter_2d(const GaussianSet& e1, FractionalOrder s,
                                            std::size_t K = kDefaultTruncation,
                                            Convention conv = Convention::with_constant) {
    if (K < 1) throw DomainError("perimeter needs truncation K >= 1");
    constexpr std::size_t kTransverse = 8;
    const auto line = spectral_coefficients(GaussianSet::real_line(), kTransverse);
    const auto fib = spectral_coefficients(e1, K);
    const double sv = s.value();
    detail::CompensatedSum acc;
    for (std::size_t j = 0; j <= kTransverse; ++j) {
        for (std::size_t k = 0; j + k <= K; ++k) {
            if (j + k == 0) continue;
            const double c = line.f[j] * fib.f[k];
            acc += 0.5 * std::pow(static_cast<double>(j + k), 0.5 * sv) * c * c;
        }
    }
    auto p = perimeter_from_coefficients(fib, s, conv);
    p.value = convention_factor(conv, s) * acc.value();
    return p;
}

/// Claimed limit of (1-s) P_s((-inf, r)) as s -> 1, sqrt(pi/2) / pi^2 * e^{-r^2/2}.
inline double asymptotic_limit(double r) {
    return std::sqrt(kPi / 2.0) / (kPi * kPi) * std::exp(-0.5 * r * r);
}

}  // namespace fgi
