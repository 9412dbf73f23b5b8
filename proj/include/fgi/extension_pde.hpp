#pragma once

// Finite-element minimization of the weighted extension energy
//   int int (|grad_x v|^2 + |d_z v|^2) z^{1-s} dgamma(x) dz,   v(., 0) = chi_E,
// on [-L, L] x (0, Z] with natural (zero-flux) conditions on the other sides.
// Bilinear (or trilinear) elements on a tensor mesh graded toward z = 0 and
// toward the jump points of chi_E. Half the minimal energy is the perimeter.
//
// The weight is separable, so the stiffness matrix is the Kronecker sum
//   A_x (x) M_z + M_x (x) A_z   (+ a transverse factor for the cylinder variant),
// assembled from exactly integrated one-dimensional weighted matrices.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <vector>

#include "fgi/detail/summation.hpp"
#include "fgi/errors.hpp"
#include "fgi/gauss_core.hpp"
#include "fgi/set_model.hpp"

namespace fgi {

struct PdeDomain {
    double L = 8.0;  // half-width in x
    double Z = 6.0;  // height in z
};

struct PdeMesh {
    std::size_t n_x = 256;
    std::size_t n_z = 256;
    double grading = 0.0;  // exponent q of z_j = Z (j/n_z)^q; 0 selects 2/s
};

namespace detail {

// Symmetric tridiagonal matrix of a 1D weighted element family.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples i and i+1

    double at(std::size_t i, std::size_t j) const {
        if (i == j) return diag[i];
        return i + 1 == j ? off[i] : (j + 1 == i ? off[j] : 0.0);
    }
};

struct WeightedMatrices1D {
    Tridiagonal stiffness;
    Tridiagonal mass;
};

// Moments int_a^b w(x) lambda^j dx for j = 0, 1, 2 with lambda = (x - a) / (b - a).
using MomentFn = std::function<std::array<double, 3>(double, double)>;

inline std::array<double, 3> gauss_legendre_moments(const std::function<double(double)>& w, double a,
                                                    double b) {
    static constexpr std::array<double, 8> node = {
        -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
        0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static constexpr std::array<double, 8> weight = {
        0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
        0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const double h = b - a;
    std::array<double, 3> m{0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < node.size(); ++q) {
        const double lam = 0.5 * (node[q] + 1.0);
        const double v = 0.5 * h * weight[q] * w(a + h * lam);
        m[0] += v;
        m[1] += v * lam;
        m[2] += v * lam * lam;
    }
    return m;
}

// Moments of z^{1-s}: closed form on cells reaching close to z = 0, Gauss-Legendre elsewhere.
inline std::array<double, 3> power_weight_moments(double s, double a, double b) {
    if (a > 0.0 && b < 4.0 * a) {
        return gauss_legendre_moments([s](double z) { return std::pow(z, 1.0 - s); }, a, b);
    }
    const double h = b - a;
    auto p = [&](double m) { return (std::pow(b, m + 1.0) - std::pow(a, m + 1.0)) / (m + 1.0); };
    const double p0 = p(1.0 - s);
    const double p1 = p(2.0 - s);
    const double p2 = p(3.0 - s);
    return {p0, (p1 - a * p0) / h, (p2 - 2.0 * a * p1 + a * a * p0) / (h * h)};
}

inline WeightedMatrices1D assemble_1d(const std::vector<double>& nodes, const MomentFn& moments) {
    const std::size_t n = nodes.size();
    WeightedMatrices1D out;
    out.stiffness.diag.assign(n, 0.0);
    out.stiffness.off.assign(n - 1, 0.0);
    out.mass.diag.assign(n, 0.0);
    out.mass.off.assign(n - 1, 0.0);
    for (std::size_t e = 0; e + 1 < n; ++e) {
        const double a = nodes[e];
        const double b = nodes[e + 1];
        const double h = b - a;
        const auto [m0, m1, m2] = moments(a, b);
        const double k = m0 / (h * h);
        out.stiffness.diag[e] += k;
        out.stiffness.diag[e + 1] += k;
        out.stiffness.off[e] -= k;
        out.mass.diag[e] += m0 - 2.0 * m1 + m2;
        out.mass.diag[e + 1] += m2;
        out.mass.off[e] += m1 - m2;
    }
    return out;
}

inline std::vector<double> graded_z_nodes(double Z, std::size_t n, double q) {
    std::vector<double> z(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        z[j] = Z * std::pow(static_cast<double>(j) / static_cast<double>(n), q);
    }
    z[n] = Z;
    return z;
}

// Nodes on [-L, L] graded with exponent q toward every jump of chi_E inside (-L, L).
inline std::vector<double> graded_x_nodes(const GaussianSet& e, double L, std::size_t n, double q) {
    std::vector<double> keys{-L};
    for (const auto& j : e.jumps()) {
        if (j.x > -L && j.x < L && j.x > keys.back()) keys.push_back(j.x);
    }
    keys.push_back(L);
    const std::size_t segments = keys.size() - 1;
    // Cells per half-segment, proportional to length, at least 2.
    std::vector<std::size_t> cells(2 * segments, 2);
    std::size_t assigned = 2 * cells.size();
    if (n > assigned) {
        const std::size_t spare = n - assigned;
        std::size_t given = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double len = 0.5 * (keys[i / 2 + 1] - keys[i / 2]);
            const auto extra = static_cast<std::size_t>(std::floor(static_cast<double>(spare) * len / (2.0 * L)));
            cells[i] += extra;
            given += extra;
        }
        for (std::size_t i = 0; given < spare; i = (i + 1) % cells.size(), ++given) ++cells[i];
    }
    auto is_jump = [&](std::size_t key) { return key != 0 && key != keys.size() - 1; };
    std::vector<double> x{keys.front()};
    for (std::size_t seg = 0; seg < segments; ++seg) {
        const double a = keys[seg];
        const double b = keys[seg + 1];
        const double mid = 0.5 * (a + b);
        const std::size_t nl = cells[2 * seg];
        const std::size_t nr = cells[2 * seg + 1];
        const double ql = is_jump(seg) ? q : 1.0;
        const double qr = is_jump(seg + 1) ? q : 1.0;
        for (std::size_t j = 1; j <= nl; ++j) {
            x.push_back(a + (mid - a) * std::pow(static_cast<double>(j) / static_cast<double>(nl), ql));
        }
        for (std::size_t j = nr; j-- > 0;) {
            x.push_back(b - (b - mid) * std::pow(static_cast<double>(j) / static_cast<double>(nr), qr));
        }
        x.back() = b;
    }
    return x;
}

inline std::vector<double> boundary_data(const GaussianSet& e, const std::vector<double>& x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        bool on_jump = false;
        for (const auto& j : e.jumps()) on_jump = on_jump || j.x == x[i];
        g[i] = on_jump ? 0.5 : (e.contains(x[i]) ? 1.0 : 0.0);
    }
    return g;
}

// Minimizes the Kronecker-sum energy sum_d (M (x) ... A_d ... (x) M) over nodal
// vectors equal to `g` on the z = 0 layer (last dimension, index 0) and returns
// the minimal energy.
inline double minimize_tensor_energy(const std::vector<WeightedMatrices1D>& dims,
                                     const std::vector<double>& bottom) {
    const std::size_t D = dims.size();
    std::vector<std::size_t> n(D);
    for (std::size_t d = 0; d < D; ++d) n[d] = dims[d].mass.diag.size();
    const std::size_t nz = n[D - 1];
    std::size_t total = 1;
    for (auto v : n) total *= v;
    const std::size_t layer = total / nz;  // nodes per z-layer
    const std::size_t unknowns = total - layer;

    auto unflatten = [&](std::size_t idx, std::array<std::size_t, 3>& I) {
        for (std::size_t d = D; d-- > 0;) {
            I[d] = idx % n[d];
            idx /= n[d];
        }
    };
    auto flatten = [&](const std::array<std::size_t, 3>& I) {
        std::size_t idx = 0;
        for (std::size_t d = 0; d < D; ++d) idx = idx * n[d] + I[d];
        return idx;
    };
    // Flattened node -> unknown index (z index >= 1), layer position for z index 0.
    auto unknown_of = [&](const std::array<std::size_t, 3>& I) {
        std::size_t idx = 0;
        for (std::size_t d = 0; d + 1 < D; ++d) idx = idx * n[d] + I[d];
        return idx * (nz - 1) + (I[D - 1] - 1);
    };
    auto layer_of = [&](const std::array<std::size_t, 3>& I) {
        std::size_t idx = 0;
        for (std::size_t d = 0; d + 1 < D; ++d) idx = idx * n[d] + I[d];
        return idx;
    };
    auto entry = [&](const std::array<std::size_t, 3>& I, const std::array<std::size_t, 3>& J) {
        double v = 0.0;
        for (std::size_t d = 0; d < D; ++d) {
            double prod = 1.0;
            for (std::size_t e = 0; e < D; ++e) {
                prod *= e == d ? dims[e].stiffness.at(I[e], J[e]) : dims[e].mass.at(I[e], J[e]);
            }
            v += prod;
        }
        return v;
    };
    std::size_t offsets = 1;
    for (std::size_t d = 0; d < D; ++d) offsets *= 3;
    auto neighbour = [&](const std::array<std::size_t, 3>& I, std::size_t o, std::array<std::size_t, 3>& J) {
        for (std::size_t d = 0; d < D; ++d) {
            const int shift = static_cast<int>(o % 3) - 1;
            o /= 3;
            const auto j = static_cast<long long>(I[d]) + shift;
            if (j < 0 || j >= static_cast<long long>(n[d])) return false;
            J[d] = static_cast<std::size_t>(j);
        }
        return true;
    };

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(unknowns * offsets);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
    std::array<std::size_t, 3> I{};
    std::array<std::size_t, 3> J{};
    for (std::size_t idx = 0; idx < total; ++idx) {
        unflatten(idx, I);
        if (I[D - 1] == 0) continue;
        const auto row = static_cast<Eigen::Index>(unknown_of(I));
        for (std::size_t o = 0; o < offsets; ++o) {
            if (!neighbour(I, o, J)) continue;
            const double v = entry(I, J);
            if (v == 0.0) continue;
            if (J[D - 1] == 0) {
                rhs[row] -= v * bottom[layer_of(J)];
            } else {
                triplets.emplace_back(row, static_cast<Eigen::Index>(unknown_of(J)), v);
            }
        }
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
    A.setFromTriplets(triplets.begin(), triplets.end());
    triplets.clear();
    triplets.shrink_to_fit();

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "extension energy factorization failed (" << unknowns << " unknowns, dims";
        for (auto v : n) msg << ' ' << v;
        msg << ')';
        throw SolverError(msg.str());
    }
    const Eigen::VectorXd u = solver.solve(rhs);
    if (solver.info() != Eigen::Success) throw SolverError("extension energy back-substitution failed");

    // Full quadratic form of the nodal vector, accumulated in node order.
    auto value_at = [&](const std::array<std::size_t, 3>& K) {
        return K[D - 1] == 0 ? bottom[layer_of(K)] : u[static_cast<Eigen::Index>(unknown_of(K))];
    };
    CompensatedSum energy;
    for (std::size_t idx = 0; idx < total; ++idx) {
        unflatten(idx, I);
        const double vi = value_at(I);
        if (vi == 0.0) continue;
        double row = 0.0;
        for (std::size_t o = 0; o < offsets; ++o) {
            if (!neighbour(I, o, J)) continue;
            row += entry(I, J) * value_at(J);
        }
        energy += vi * row;
    }
    (void)flatten;
    return energy.value();
}

inline WeightedMatrices1D gaussian_axis(const std::vector<double>& nodes) {
    return assemble_1d(nodes, [](double a, double b) { return gauss_legendre_moments(gauss_density, a, b); });
}

inline WeightedMatrices1D vertical_axis(const std::vector<double>& nodes, double s) {
    return assemble_1d(nodes, [s](double a, double b) { return power_weight_moments(s, a, b); });
}

inline void check_pde_inputs(const PdeDomain& domain, const PdeMesh& mesh) {
    if (domain.L < 6.0 || domain.Z < 4.0 || mesh.n_x < 64 || mesh.n_z < 64) {
        std::ostringstream msg;
        msg << "extension solver needs L >= 6, Z >= 4, n_x, n_z >= 64 (got L=" << domain.L
            << ", Z=" << domain.Z << ", n_x=" << mesh.n_x << ", n_z=" << mesh.n_z << ")";
        throw DomainError(msg.str());
    }
}

}  // namespace detail

/// Perimeter (with-constant normalization) as half the minimal discrete extension energy.
inline double pde_energy(const GaussianSet& e, FractionalOrder s, const PdeDomain& domain = {},
                         const PdeMesh& mesh = {}) {
    detail::check_pde_inputs(domain, mesh);
    const double q = mesh.grading > 0.0 ? mesh.grading : 2.0 / s.value();
    const auto x = detail::graded_x_nodes(e, domain.L, mesh.n_x, q);
    const auto z = detail::graded_z_nodes(domain.Z, mesh.n_z, q);
    const auto g = detail::boundary_data(e, x);
    if (std::all_of(g.begin(), g.end(), [&](double v) { return v == g.front(); })) return 0.0;
    const std::vector<detail::WeightedMatrices1D> dims{detail::gaussian_axis(x),
                                                       detail::vertical_axis(z, s.value())};
    return 0.5 * detail::minimize_tensor_energy(dims, g);
}

/// Same energy for the cylinder E x R discretized with an extra Gaussian
/// coordinate on [-domain.L, domain.L] with `n_transverse` uniform cells.
inline double pde_energy_cylinder(const GaussianSet& e, FractionalOrder s, std::size_t n_transverse,
                                  const PdeDomain& domain = {}, const PdeMesh& mesh = {}) {
    detail::check_pde_inputs(domain, mesh);
    if (n_transverse < 1) throw DomainError("cylinder solve needs at least one transverse cell");
    const double q = mesh.grading > 0.0 ? mesh.grading : 2.0 / s.value();
    const auto x = detail::graded_x_nodes(e, domain.L, mesh.n_x, q);
    std::vector<double> y(n_transverse + 1);
    for (std::size_t i = 0; i <= n_transverse; ++i) {
        y[i] = -domain.L + 2.0 * domain.L * static_cast<double>(i) / static_cast<double>(n_transverse);
    }
    const auto z = detail::graded_z_nodes(domain.Z, mesh.n_z, q);
    const auto gx = detail::boundary_data(e, x);
    if (std::all_of(gx.begin(), gx.end(), [&](double v) { return v == gx.front(); })) return 0.0;
    std::vector<double> g;
    g.reserve(x.size() * y.size());
    for (double v : gx) g.insert(g.end(), y.size(), v);
    const std::vector<detail::WeightedMatrices1D> dims{detail::gaussian_axis(x), detail::gaussian_axis(y),
                                                       detail::vertical_axis(z, s.value())};
    return 0.5 * detail::minimize_tensor_energy(dims, g);
}

}  // namespace fgi
