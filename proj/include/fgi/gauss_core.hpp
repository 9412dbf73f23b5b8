#pragma once

// Special functions and quadrature for the one-dimensional standard Gaussian
// measure: orthonormal (probabilists') Hermite polynomials, Gauss-Hermite
// rules, Euler Gamma, the Gaussian CDF and its inverse, the isoperimetric
// profile, and the extension constants used throughout the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fgi/detail/summation.hpp"
#include "fgi/errors.hpp"

namespace fgi {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2Pi = 2.5066282746310002;  // sqrt(2*pi)
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Fractional order s in the open interval (0,1).
class FractionalOrder {
public:
    explicit FractionalOrder(double s) : s_(s) {
        if (!(s > 0.0 && s < 1.0)) {
            throw DomainError("fractional order must lie in (0,1), got " + std::to_string(s));
        }
    }

    double value() const noexcept { return s_; }
    /// Order of the fractional Ornstein-Uhlenbeck power seen by the extension, s/2.
    double half() const noexcept { return 0.5 * s_; }

    friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

private:
    double s_;
};

// ---------------------------------------------------------------------------
// Hermite polynomials
// ---------------------------------------------------------------------------

/// Orthonormal Hermite polynomial h_n(x) with respect to the standard Gaussian measure,
/// h_0 = 1, h_1 = x, h_{n+1} = (x h_n - sqrt(n) h_{n-1}) / sqrt(n+1).
inline double hermite_eval(std::size_t n, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (std::size_t k = 1; k < n; ++k) {
        const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                            std::sqrt(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace detail {

// Streams e^{-x^2/2} h_k(x) for k = 0, 1, 2, ... with a running power-of-ten
// rescale, so neither the growth of h_k at large |x| nor the decay of the
// Gaussian factor overflows or underflows prematurely.
class ScaledHermite {
public:
    explicit ScaledHermite(double x) : x_(x), log_scale_(-0.5 * x * x) { refresh_factor(); }

    /// Value for the current index.
    double value() const noexcept { return cur_ * factor_; }
    std::size_t index() const noexcept { return k_; }

    void advance() noexcept {
        const double kd = static_cast<double>(k_);
        const double next = (x_ * cur_ - std::sqrt(kd) * prev_) / std::sqrt(kd + 1.0);
        prev_ = cur_;
        cur_ = next;
        ++k_;
        if (std::abs(cur_) > kRescale) {
            cur_ /= kRescale;
            prev_ /= kRescale;
            log_scale_ += kLogRescale;
            refresh_factor();
        }
    }

private:
    static constexpr double kRescale = 1e100;
    static constexpr double kLogRescale = 230.25850929940458;  // ln(1e100)

    void refresh_factor() noexcept { factor_ = log_scale_ < -745.0 ? 0.0 : std::exp(log_scale_); }

    double x_;
    double prev_ = 0.0;
    double cur_ = 1.0;
    double log_scale_;
    double factor_ = 1.0;
    std::size_t k_ = 0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Gauss-Hermite quadrature against the standard Gaussian measure
// ---------------------------------------------------------------------------

struct QuadratureRule {
    std::size_t order = 0;
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // positive, sum to 1

    template <class F>
    double integrate(F&& f) const {
        detail::CompensatedSum acc;
        for (std::size_t i = 0; i < order; ++i) acc += weights[i] * f(nodes[i]);
        return acc.value();
    }
};

namespace detail {

// Newton polish of a root of h_n. Returns (root, log|h_{n-1}(root)|).
inline std::pair<double, double> polish_hermite_root(std::size_t n, double x) {
    for (int iter = 0; iter < 100; ++iter) {
        double prev = 1.0;
        double cur = x;
        double log_scale = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                                std::sqrt(static_cast<double>(k + 1));
            prev = cur;
            cur = next;
            if (std::abs(cur) > 1e100) {
                cur *= 1e-100;
                prev *= 1e-100;
                log_scale += 230.25850929940458;
            }
        }
        // cur ~ h_n, prev ~ h_{n-1} (common scale); h_n' = sqrt(n) h_{n-1}.
        const double step = cur / (std::sqrt(static_cast<double>(n)) * prev);
        x -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) {
            return {x, std::log(std::abs(prev)) + log_scale};
        }
    }
    throw ConvergenceError("Gauss-Hermite root polish did not converge for n=" + std::to_string(n));
}

}  // namespace detail

/// Gauss-Hermite rule of order n (1 <= n <= 500) for integrals against the
/// standard Gaussian measure; exact on polynomials of degree <= 2n-1.
inline QuadratureRule gauss_hermite_rule(std::size_t n) {
    if (n < 1 || n > 500) {
        throw DomainError("Gauss-Hermite order must be in [1, 500], got n=" + std::to_string(n));
    }
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    // Starting points are the eigenvalues of the Jacobi matrix (zero diagonal,
    // off-diagonal sqrt(k)); each is then polished by Newton on h_n.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
    for (Eigen::Index k = 0; k < sub.size(); ++k) sub[k] = std::sqrt(static_cast<double>(k + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
    jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (jacobi.info() != Eigen::Success) {
        throw ConvergenceError("Jacobi eigenvalues did not converge for n=" + std::to_string(n));
    }
    const double nd = static_cast<double>(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t j = n - 1 - i;
        const bool middle = n % 2 == 1 && i == half - 1;
        const double guess = middle ? 0.0 : jacobi.eigenvalues()[static_cast<Eigen::Index>(j)];
        const auto [root, log_hnm1] = detail::polish_hermite_root(n, guess);
        const double node = middle ? 0.0 : std::abs(root);
        const double w = std::exp(-2.0 * log_hnm1) / nd;
        rule.nodes[j] = node;
        rule.nodes[i] = -node;
        rule.weights[j] = w;
        rule.weights[i] = w;
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(rule.nodes[i] > rule.nodes[i - 1])) {
            throw ConvergenceError("Gauss-Hermite roots collided for n=" + std::to_string(n));
        }
    }
    return rule;
}

// ---------------------------------------------------------------------------
// Gamma function
// ---------------------------------------------------------------------------

/// Euler Gamma via the Lanczos approximation (g = 7, 9 terms) with reflection
/// for x < 1/2. Throws DomainError at the poles 0, -1, -2, ...
inline double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x)) {
        throw DomainError("Gamma has a pole at " + std::to_string(x));
    }
    if (x < 0.5) {
        return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    }
    static constexpr std::array<double, 9> p = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double y = x - 1.0;
    double a = p[0];
    for (std::size_t i = 1; i < p.size(); ++i) a += p[i] / (y + static_cast<double>(i));
    const double t = y + 7.5;
    // t^(y+0.5) e^-t split in two halves to postpone overflow.
    const double half_pow = std::pow(t, 0.5 * (y + 0.5));
    return kSqrt2Pi * half_pow * (half_pow * std::exp(-t)) * a;
}

// ---------------------------------------------------------------------------
// Gaussian CDF, inverse, isoperimetric profile
// ---------------------------------------------------------------------------

/// Standard Gaussian density.
inline double gauss_density(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

/// Phi(r) = gamma_1((-inf, r)). Total on the extended reals: Phi(-inf) = 0, Phi(inf) = 1.
inline double phi(double r) { return 0.5 * std::erfc(-r / std::numbers::sqrt2); }

namespace detail {

// Phi^{-1}(p) for 0 < p <= 1/2 by bracketed Newton from a rational initial guess.
inline double phi_inv_lower(double p) {
    const double t = std::sqrt(-2.0 * std::log(p));
    double x = -(t - (2.515517 + 0.802853 * t + 0.010328 * t * t) /
                         (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t));
    double lo = -40.0;
    double hi = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double err = phi(x) - p;
        if (err > 0.0) {
            hi = std::min(hi, x);
        } else if (err < 0.0) {
            lo = std::max(lo, x);
        } else {
            return x;
        }
        const double dens = gauss_density(x);
        double next = dens > 0.0 ? x - err / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4e-16 * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    throw ConvergenceError("inverse Gaussian CDF did not converge for p=" + std::to_string(p));
}

}  // namespace detail

/// Phi^{-1}(m) for m in (0,1).
inline double phi_inv(double m) {
    if (!(m > 0.0 && m < 1.0)) {
        throw DomainError("phi_inv needs m in (0,1), got " + std::to_string(m));
    }
    if (m == 0.5) return 0.0;
    if (m < 0.5) return detail::phi_inv_lower(m);
    return -detail::phi_inv_lower(1.0 - m);  // 1 - m is exact for m in [1/2, 1)
}

/// Gaussian isoperimetric profile I(m) = exp(-Phi^{-1}(m)^2 / 2).
inline double iso_function(double m) {
    const double r = phi_inv(m);
    return std::exp(-0.5 * r * r);
}

// ---------------------------------------------------------------------------
// Extension constants
// ---------------------------------------------------------------------------

/// Flux constant of the extension of order sigma in (0,1):
/// 2 sigma |Gamma(-sigma)| / (4^sigma Gamma(sigma)).
inline double extension_constant(double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) {
        throw DomainError("extension order must lie in (0,1), got " + std::to_string(sigma));
    }
    return 2.0 * sigma * std::abs(gamma_fn(-sigma)) / (std::pow(4.0, sigma) * gamma_fn(sigma));
}

/// Constants attached to a perimeter order s (extension order s/2).
struct ConstantsTable {
    FractionalOrder s;
    double K_s;     // s |Gamma(-s/2)| / (2^s Gamma(s/2))
    double beta_s;  // Gamma(1-s/2) / (2^s K_s Gamma(1+s/2))
};

inline ConstantsTable constants(FractionalOrder s) {
    const double sv = s.value();
    const double k = sv * std::abs(gamma_fn(-0.5 * sv)) / (std::pow(2.0, sv) * gamma_fn(0.5 * sv));
    const double beta = gamma_fn(1.0 - 0.5 * sv) / (std::pow(2.0, sv) * k * gamma_fn(1.0 + 0.5 * sv));
    return ConstantsTable{s, k, beta};
}

}  // namespace fgi
