#pragma once

// Finite unions of open intervals on the extended real line, measured with the
// standard Gaussian measure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fgi/detail/summation.hpp"
#include "fgi/errors.hpp"
#include "fgi/gauss_core.hpp"

namespace fgi {

struct Interval {
    double lo;
    double hi;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Canonical finite union of disjoint open intervals, sorted, with intervals that
/// touch or overlap merged. Endpoints may be -inf / +inf.
class GaussianSet {
public:
    GaussianSet() = default;

    GaussianSet(std::initializer_list<Interval> intervals)
        : GaussianSet(std::vector<Interval>(intervals)) {}

    explicit GaussianSet(std::vector<Interval> intervals) {
        for (const auto& iv : intervals) {
            if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
                throw DomainError("interval needs lo < hi, got (" + std::to_string(iv.lo) + ", " +
                                  std::to_string(iv.hi) + ")");
            }
        }
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (const auto& iv : intervals) {
            if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
                intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
            } else {
                intervals_.push_back(iv);
            }
        }
    }

    static GaussianSet empty() { return {}; }
    static GaussianSet real_line() { return GaussianSet{{-kInf, kInf}}; }
    /// (-inf, r)
    static GaussianSet left_halfline(double r) { return GaussianSet{{-kInf, r}}; }
    /// (r, inf)
    static GaussianSet right_halfline(double r) { return GaussianSet{{r, kInf}}; }

    std::span<const Interval> intervals() const noexcept { return intervals_; }
    std::size_t size() const noexcept { return intervals_.size(); }
    bool is_empty() const noexcept { return intervals_.empty(); }

    /// Strict membership (open intervals).
    bool contains(double x) const noexcept {
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                                   [](double v, const Interval& iv) { return v < iv.lo; });
        if (it == intervals_.begin()) return false;
        --it;
        return x > it->lo && x < it->hi;
    }

    /// Finite interval endpoints in ascending order, each tagged +1 when the set
    /// is entered from the left (a lower end) and -1 when it is left (an upper end).
    struct Jump {
        double x;
        int sign;
    };
    std::vector<Jump> jumps() const {
        std::vector<Jump> out;
        for (const auto& iv : intervals_) {
            if (std::isfinite(iv.lo)) out.push_back({iv.lo, +1});
            if (std::isfinite(iv.hi)) out.push_back({iv.hi, -1});
        }
        return out;
    }

    friend bool operator==(const GaussianSet&, const GaussianSet&) = default;

private:
    std::vector<Interval> intervals_;
};

enum class Orientation { left, right };

/// (-inf, r) for left orientation, (r, inf) for right.
struct Halfline {
    Orientation orientation = Orientation::left;
    double threshold = 0.0;

    GaussianSet as_set() const {
        return orientation == Orientation::left ? GaussianSet::left_halfline(threshold)
                                                : GaussianSet::right_halfline(threshold);
    }
};

/// Gaussian measure sum_i Phi(b_i) - Phi(a_i).
inline double measure(const GaussianSet& e) {
    detail::CompensatedSum acc;
    for (const auto& iv : e.intervals()) {
        // Subtract in the tail nearest to the interval to keep relative accuracy.
        if (iv.lo >= 0.0) {
            acc += phi(-iv.lo) - phi(-iv.hi);
        } else {
            acc += phi(iv.hi) - phi(iv.lo);
        }
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

namespace detail {

template <class Op>
GaussianSet combine(const GaussianSet& e, const GaussianSet& f, Op op) {
    std::vector<double> cuts{-kInf, kInf};
    for (const GaussianSet* g : {&e, &f}) {
        for (const auto& iv : g->intervals()) {
            cuts.push_back(iv.lo);
            cuts.push_back(iv.hi);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Interval> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        double probe;
        if (std::isinf(a) && std::isinf(b)) {
            probe = 0.0;
        } else if (std::isinf(a)) {
            probe = b - 1.0;
        } else if (std::isinf(b)) {
            probe = a + 1.0;
        } else {
            probe = a + 0.5 * (b - a);
        }
        if (op(e.contains(probe), f.contains(probe))) out.push_back({a, b});
    }
    return GaussianSet(std::move(out));
}

}  // namespace detail

inline GaussianSet complement(const GaussianSet& e) {
    return detail::combine(e, GaussianSet::empty(), [](bool in_e, bool) { return !in_e; });
}

inline GaussianSet symm_diff(const GaussianSet& e, const GaussianSet& f) {
    return detail::combine(e, f, [](bool a, bool b) { return a != b; });
}

inline GaussianSet intersect(const GaussianSet& e, const GaussianSet& f) {
    return detail::combine(e, f, [](bool a, bool b) { return a && b; });
}

inline GaussianSet unite(const GaussianSet& e, const GaussianSet& f) {
    return detail::combine(e, f, [](bool a, bool b) { return a || b; });
}

/// E \ F
inline GaussianSet difference(const GaussianSet& e, const GaussianSet& f) {
    return detail::combine(e, f, [](bool a, bool b) { return a && !b; });
}

/// Image under x -> -x.
inline GaussianSet reflect(const GaussianSet& e) {
    std::vector<Interval> out;
    for (const auto& iv : e.intervals()) out.push_back({-iv.hi, -iv.lo});
    return GaussianSet(std::move(out));
}

namespace detail {

inline double checked_measure(const GaussianSet& e, const char* what) {
    const double m = measure(e);
    if (!(m > 0.0 && m < 1.0)) {
        throw DegenerateSetError(std::string(what) + " needs 0 < measure < 1, got " + std::to_string(m));
    }
    return m;
}

}  // namespace detail

/// Left halfline of the same Gaussian measure.
inline Halfline ehrhard_symmetrize(const GaussianSet& e) {
    const double m = detail::checked_measure(e, "ehrhard_symmetrize");
    return Halfline{Orientation::left, phi_inv(m)};
}

struct AsymmetryResult {
    double value;       // gamma(E sym-diff H) / gamma(E)
    Halfline minimizer;
};

/// Gaussian Fraenkel asymmetry. In one dimension the competitors are the left
/// and right halflines of measure gamma(E); ties go to the left one.
inline AsymmetryResult asymmetry(const GaussianSet& e) {
    const double m = detail::checked_measure(e, "asymmetry");
    if (e.size() == 1) {
        const auto iv = e.intervals()[0];
        if (iv.lo == -kInf) return {0.0, {Orientation::left, iv.hi}};
        if (iv.hi == kInf) return {0.0, {Orientation::right, iv.lo}};
    }
    const Halfline left{Orientation::left, phi_inv(m)};
    const Halfline right{Orientation::right, phi_inv(1.0 - m)};
    const double a_left = measure(symm_diff(e, left.as_set())) / m;
    const double a_right = measure(symm_diff(e, right.as_set())) / m;
    if (a_right < a_left) return {a_right, right};
    return {a_left, left};
}

}  // namespace fgi
