/*
   Copyright 2026 The sdde-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <span>
#include <vector>

#include "sdde/coefficients/specs.hpp"
#include "sdde/core/errors.hpp"

namespace sdde {

/// Space-time grid for the backward problem on [-L, L]^d x [S, T].
struct PdeGrid {
    int d = 1;
    double halfwidth = 1.0;
    int nx = 3;
    double start = 0.0;
    double terminal = 1.0;
    int n_time = 1;

    void validate() const {
        if (d < 1 || d > 2) throw DomainError("PdeGrid: only d = 1 or d = 2 is supported");
        if (nx < 3) throw DomainError("PdeGrid: nx must be at least 3");
        if (!(halfwidth > 0.0)) throw DomainError("PdeGrid: L must be positive");
        if (!(terminal > start)) throw DomainError("PdeGrid: need S < T");
        if (n_time < 1) throw DomainError("PdeGrid: n_time must be positive");
    }
    double dx() const noexcept { return 2.0 * halfwidth / (nx - 1); }
    double dt() const noexcept { return (terminal - start) / n_time; }
    std::size_t nodes() const noexcept {
        return d == 1 ? static_cast<std::size_t>(nx) : static_cast<std::size_t>(nx) * static_cast<std::size_t>(nx);
    }
    double coord(int i) const noexcept { return -halfwidth + i * dx(); }
    double time(int level) const noexcept { return level == n_time ? terminal : start + level * dt(); }
};

enum class BoundaryKind { dirichlet_zero, neumann_zero };

/// (t, cell lower corner, cell upper corner, out[d]): cell-averaged source.
using PdeSource = CellAverage;

inline PdeSource zero_source(int d) {
    return [d](double, std::span<const double>, std::span<const double>, std::span<double> out) {
        std::fill_n(out.begin(), d, 0.0);
    };
}

/// Cell averages of b, exact when the catalog provides them, midpoint otherwise.
inline PdeSource source_from_drift(const DriftSpec& drift) {
    if (drift.is_zero) return zero_source(drift.dim);
    if (drift.cell_average) return drift.cell_average;
    const VectorField eval = drift.eval;
    const int d = drift.dim;
    return [eval, d](double t, std::span<const double> lo, std::span<const double> hi, std::span<double> out) {
        std::array<double, 2> mid{};
        for (int i = 0; i < d; ++i) mid[static_cast<std::size_t>(i)] = 0.5 * (lo[i] + hi[i]);
        eval(t, std::span<const double>(mid.data(), static_cast<std::size_t>(d)), out);
    };
}

/// Grid solution u~ of the backward problem at every time level. Values are
/// laid out [level][component][node], node = i + nx * j.
class PdeSolution {
public:
    PdeSolution(PdeGrid grid, BoundaryKind boundary, std::vector<double> values)
        : grid_(grid), boundary_(boundary), values_(std::move(values)) {}

    const PdeGrid& grid() const noexcept { return grid_; }
    BoundaryKind boundary() const noexcept { return boundary_; }
    int levels() const noexcept { return grid_.n_time + 1; }
    const std::vector<double>& values() const noexcept { return values_; }

    double value(int level, int comp, std::size_t node) const noexcept {
        return values_[offset(level, comp) + node];
    }
    std::span<const double> level_component(int level, int comp) const noexcept {
        return {values_.data() + offset(level, comp), grid_.nodes()};
    }

    bool contains(std::span<const double> x) const noexcept {
        for (int i = 0; i < grid_.d; ++i)
            if (!(std::abs(x[static_cast<std::size_t>(i)]) <= grid_.halfwidth)) return false;
        return true;
    }
    bool covers_time(double t) const noexcept {
        const double tol = 1e-9 * std::max(1.0, std::abs(grid_.terminal));
        return t >= grid_.start - tol && t <= grid_.terminal + tol;
    }

    /// Centered difference along `axis`; one-sided on the boundary.
    double node_derivative(int level, int comp, int i, int j, int axis) const noexcept {
        const int n = grid_.nx;
        const double h = grid_.dx();
        const int k = axis == 0 ? i : j;
        auto at = [&](int kk) {
            return axis == 0 ? nodal(level, comp, kk, j) : nodal(level, comp, i, kk);
        };
        if (k == 0) return (at(1) - at(0)) / h;
        if (k == n - 1) return (at(n - 1) - at(n - 2)) / h;
        return (at(k + 1) - at(k - 1)) / (2.0 * h);
    }

    /// Second difference d^2/dx_a dx_b; one-sided stencils shifted inward at the boundary.
    double node_second_derivative(int level, int comp, int i, int j, int a, int b) const noexcept {
        const int n = grid_.nx;
        const double h = grid_.dx();
        auto inner = [n](int k) { return std::clamp(k, 1, n - 2); };
        if (a == b) {
            const int k = inner(a == 0 ? i : j);
            auto at = [&](int kk) {
                return a == 0 ? nodal(level, comp, kk, j) : nodal(level, comp, i, kk);
            };
            return (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (h * h);
        }
        const int ii = inner(i), jj = inner(j);
        return (nodal(level, comp, ii + 1, jj + 1) - nodal(level, comp, ii + 1, jj - 1) -
                nodal(level, comp, ii - 1, jj + 1) + nodal(level, comp, ii - 1, jj - 1)) /
               (4.0 * h * h);
    }

    /// u~(t, x), linear in t and (bi)linear in x.
    void u_tilde(double t, std::span<const double> x, std::span<double> out) const {
        interpolate(t, x, out, [this](int level, int comp, int i, int j) { return nodal(level, comp, i, j); });
    }

    /// u(t, x) = u~(t, x) + x.
    void u(double t, std::span<const double> x, std::span<double> out) const {
        u_tilde(t, x, out);
        for (int c = 0; c < grid_.d; ++c) out[static_cast<std::size_t>(c)] += x[static_cast<std::size_t>(c)];
    }

    /// Jacobian of u~, row-major: out[c * d + a] = d u~_c / d x_a.
    void jacobian_tilde(double t, std::span<const double> x, std::span<double> out) const {
        const int d = grid_.d;
        std::array<double, 2> tmp{};
        for (int a = 0; a < d; ++a) {
            interpolate(t, x, std::span<double>(tmp.data(), static_cast<std::size_t>(d)),
                        [this, a](int level, int comp, int i, int j) { return node_derivative(level, comp, i, j, a); });
            for (int c = 0; c < d; ++c) out[static_cast<std::size_t>(c * d + a)] = tmp[static_cast<std::size_t>(c)];
        }
    }

    /// Du = I + Du~.
    void jacobian(double t, std::span<const double> x, std::span<double> out) const {
        jacobian_tilde(t, x, out);
        for (int c = 0; c < grid_.d; ++c) out[static_cast<std::size_t>(c * grid_.d + c)] += 1.0;
    }

    double nodal(int level, int comp, int i, int j) const noexcept {
        return values_[offset(level, comp) + static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(grid_.nx) * static_cast<std::size_t>(j)];
    }

private:
    std::size_t offset(int level, int comp) const noexcept {
        return (static_cast<std::size_t>(level) * static_cast<std::size_t>(grid_.d) + static_cast<std::size_t>(comp)) *
               grid_.nodes();
    }

    template <class NodeFn>
    void interpolate(double t, std::span<const double> x, std::span<double> out, NodeFn&& fn) const {
        const int d = grid_.d;
        if (!covers_time(t)) throw RangeError("PdeSolution: time outside [S, T]");
        if (!contains(x)) throw RangeError("PdeSolution: point outside the spatial domain");
        const double s = std::clamp((t - grid_.start) / grid_.dt(), 0.0, static_cast<double>(grid_.n_time));
        int k0 = std::min(static_cast<int>(std::floor(s)), grid_.n_time - 1);
        double wt = s - k0;
        // exact hit on a level: no blending with the neighbour
        if (wt >= 1.0 - 1e-12) { k0 += 1; wt = 0.0; }
        if (k0 == grid_.n_time) { k0 = grid_.n_time - 1; wt = 1.0; }
        std::array<int, 2> cell{};
        std::array<double, 2> w{};
        for (int a = 0; a < d; ++a) {
            const double r = (x[static_cast<std::size_t>(a)] + grid_.halfwidth) / grid_.dx();
            const int i = std::clamp(static_cast<int>(std::floor(r)), 0, grid_.nx - 2);
            cell[static_cast<std::size_t>(a)] = i;
            w[static_cast<std::size_t>(a)] = std::clamp(r - i, 0.0, 1.0);
        }
        for (int c = 0; c < d; ++c) {
            auto space = [&](int level) {
                if (d == 1) {
                    const int i = cell[0];
                    const double a0 = fn(level, c, i, 0), a1 = fn(level, c, i + 1, 0);
                    return w[0] == 0.0 ? a0 : a0 + w[0] * (a1 - a0);
                }
                const int i = cell[0], j = cell[1];
                const double v00 = fn(level, c, i, j), v10 = fn(level, c, i + 1, j);
                const double v01 = fn(level, c, i, j + 1), v11 = fn(level, c, i + 1, j + 1);
                return (1 - w[0]) * (1 - w[1]) * v00 + w[0] * (1 - w[1]) * v10 + (1 - w[0]) * w[1] * v01 +
                       w[0] * w[1] * v11;
            };
            const double v0 = space(k0);
            out[static_cast<std::size_t>(c)] = wt == 0.0 ? v0 : v0 + wt * (space(k0 + 1) - v0);
        }
    }

    PdeGrid grid_;
    BoundaryKind boundary_;
    std::vector<double> values_;
};

namespace detail {

// Thomas algorithm; lo[0] and up[n-1] are ignored. Overwrites rhs with the solution.
inline void thomas(std::span<const double> lo, std::span<const double> di, std::span<const double> up,
                   std::span<double> rhs, std::vector<double>& scratch) {
    const std::size_t n = di.size();
    scratch.resize(n);
    double beta = di[0];
    if (beta == 0.0) throw SolverError("tridiagonal solve: zero pivot");
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = up[i - 1] / beta;
        beta = di[i] - lo[i] * scratch[i];
        if (beta == 0.0) throw SolverError("tridiagonal solve: zero pivot");
        rhs[i] = (rhs[i] - lo[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

// Coefficients of the level-t operator at every node: a = sigma sigma^T
// (row-major d x d), drift = cell-averaged b, f = cell-averaged source.
struct NodeCoefficients {
    std::vector<double> a, drift, f;
};

inline NodeCoefficients node_coefficients(const PdeGrid& g, const CoefficientSet& coeffs, const PdeSource& op_drift,
                                          const PdeSource& source, double t) {
    const int d = g.d;
    const auto du = static_cast<std::size_t>(d);
    const std::size_t nodes = g.nodes();
    const double hx = 0.5 * g.dx();
    NodeCoefficients nc;
    nc.a.resize(nodes * du * du);
    nc.drift.resize(nodes * du);
    nc.f.resize(nodes * du);
    std::array<double, 2> x{}, lo{}, hi{};
    std::array<double, 4> s{};
    const std::span<const double> xs(x.data(), du);
    for (std::size_t node = 0; node < nodes; ++node) {
        const int i = static_cast<int>(node % static_cast<std::size_t>(g.nx));
        const int j = static_cast<int>(node / static_cast<std::size_t>(g.nx));
        x[0] = g.coord(i);
        if (d == 2) x[1] = g.coord(j);
        for (std::size_t c = 0; c < du; ++c) {
            lo[c] = x[c] - hx;
            hi[c] = x[c] + hx;
        }
        coeffs.diffusion.eval(t, xs, std::span<double>(s.data(), du * du));
        for (std::size_t r = 0; r < du; ++r)
            for (std::size_t c = 0; c < du; ++c) {
                double acc = 0.0;
                for (std::size_t k = 0; k < du; ++k) acc += s[r * du + k] * s[c * du + k];
                nc.a[node * du * du + r * du + c] = acc;
            }
        const std::span<const double> los(lo.data(), du), his(hi.data(), du);
        op_drift(t, los, his, std::span<double>(nc.drift.data() + node * du, du));
        source(t, los, his, std::span<double>(nc.f.data() + node * du, du));
    }
    return nc;
}

// Tridiagonal stencil of the one-axis operator (1/2) a u'' + b u' at line
// position k of n. Returns {minus, center, plus}.
inline std::array<double, 3> axis_stencil(double a, double b, double h, int k, int n, BoundaryKind bc) {
    const double diff = a / (2.0 * h * h);
    const double adv = b / (2.0 * h);
    if (k == 0 || k == n - 1) {
        if (bc == BoundaryKind::dirichlet_zero) return {0.0, 0.0, 0.0};
        // mirrored ghost node: advection cancels
        return k == 0 ? std::array<double, 3>{0.0, -2.0 * diff, 2.0 * diff}
                      : std::array<double, 3>{2.0 * diff, -2.0 * diff, 0.0};
    }
    return {diff - adv, -2.0 * diff, diff + adv};
}

inline void check_level(std::span<const double> u, int level, double t) {
    for (double v : u)
        if (!std::isfinite(v) || std::abs(v) > 1e12)
            throw SolverError("backward PDE: solution blew up at level " + std::to_string(level) + " (t = " +
                              std::to_string(t) + "); reduce the time step");
}

inline void step_1d(const PdeGrid& g, BoundaryKind bc, const NodeCoefficients& nc, std::span<const double> next,
                    std::span<double> out, int /*comp*/, std::vector<double>& lo, std::vector<double>& di,
                    std::vector<double>& up, std::vector<double>& scratch) {
    const int n = g.nx;
    const double tau = g.dt();
    const double h = g.dx();
    lo.assign(static_cast<std::size_t>(n), 0.0);
    di.assign(static_cast<std::size_t>(n), 1.0);
    up.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const bool boundary = k == 0 || k == n - 1;
        if (boundary && bc == BoundaryKind::dirichlet_zero) {
            out[ku] = 0.0;
            continue;
        }
        const auto st = axis_stencil(nc.a[ku], nc.drift[ku], h, k, n, bc);
        lo[ku] = -tau * st[0];
        di[ku] = 1.0 - tau * st[1];
        up[ku] = -tau * st[2];
        out[ku] = next[ku] + tau * nc.f[ku];
    }
    thomas(lo, di, up, out, scratch);
}

// Explicit application of the full operator at node (i, j); Neumann reads
// mirrored ghosts, Dirichlet boundary rows are left at zero.
inline double apply_operator_2d(const PdeGrid& g, BoundaryKind bc, const NodeCoefficients& nc,
                                std::span<const double> u, int i, int j, int axis_mask) {
    const int n = g.nx;
    const double h = g.dx();
    auto at = [&](int ii, int jj) {
        if (ii < 0) ii = 1;
        if (ii > n - 1) ii = n - 2;
        if (jj < 0) jj = 1;
        if (jj > n - 1) jj = n - 2;
        return u[static_cast<std::size_t>(ii) + static_cast<std::size_t>(n) * static_cast<std::size_t>(jj)];
    };
    const std::size_t node = static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * static_cast<std::size_t>(j);
    const double* a = nc.a.data() + node * 4;
    const double* b = nc.drift.data() + node * 2;
    double out = 0.0;
    if (axis_mask & 1) {
        const auto st = axis_stencil(a[0], b[0], h, i, n, bc);
        out += st[0] * (i > 0 ? at(i - 1, j) : 0.0) + st[1] * at(i, j) + st[2] * (i < n - 1 ? at(i + 1, j) : 0.0);
    }
    if (axis_mask & 2) {
        const auto st = axis_stencil(a[3], b[1], h, j, n, bc);
        out += st[0] * (j > 0 ? at(i, j - 1) : 0.0) + st[1] * at(i, j) + st[2] * (j < n - 1 ? at(i, j + 1) : 0.0);
    }
    if ((axis_mask & 4) && a[1] != 0.0 && i > 0 && i < n - 1 && j > 0 && j < n - 1) {
        const double uxy = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4.0 * h * h);
        out += a[1] * uxy;
    }
    return out;
}

inline void step_2d(const PdeGrid& g, BoundaryKind bc, const NodeCoefficients& nc, std::span<const double> next,
                    std::span<double> out, int comp, std::vector<double>& work, std::vector<double>& lo,
                    std::vector<double>& di, std::vector<double>& up, std::vector<double>& line,
                    std::vector<double>& scratch) {
    const int n = g.nx;
    const double tau = g.dt();
    const double h = g.dx();
    const std::size_t nodes = g.nodes();
    const auto nu = static_cast<std::size_t>(n);
    auto boundary = [n](int k) { return k == 0 || k == n - 1; };
    work.resize(nodes);
    // predictor with the full operator explicit
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t node = static_cast<std::size_t>(i) + nu * static_cast<std::size_t>(j);
            if (bc == BoundaryKind::dirichlet_zero && (boundary(i) || boundary(j))) {
                work[node] = 0.0;
                continue;
            }
            work[node] = next[node] + tau * (apply_operator_2d(g, bc, nc, next, i, j, 7) + nc.f[node * 2 + static_cast<std::size_t>(comp)]);
        }
    // x sweep
    lo.resize(nu);
    di.resize(nu);
    up.resize(nu);
    line.resize(nu);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const std::size_t node = iu + nu * static_cast<std::size_t>(j);
            if (bc == BoundaryKind::dirichlet_zero && (boundary(i) || boundary(j))) {
                lo[iu] = up[iu] = 0.0;
                di[iu] = 1.0;
                line[iu] = 0.0;
                continue;
            }
            const auto st = axis_stencil(nc.a[node * 4], nc.drift[node * 2], h, i, n, bc);
            lo[iu] = -tau * st[0];
            di[iu] = 1.0 - tau * st[1];
            up[iu] = -tau * st[2];
            line[iu] = work[node] - tau * apply_operator_2d(g, bc, nc, next, i, j, 1);
        }
        thomas(lo, di, up, line, scratch);
        for (int i = 0; i < n; ++i) work[static_cast<std::size_t>(i) + nu * static_cast<std::size_t>(j)] = line[static_cast<std::size_t>(i)];
    }
    // y sweep
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const std::size_t node = static_cast<std::size_t>(i) + nu * ju;
            if (bc == BoundaryKind::dirichlet_zero && (boundary(i) || boundary(j))) {
                lo[ju] = up[ju] = 0.0;
                di[ju] = 1.0;
                line[ju] = 0.0;
                continue;
            }
            const auto st = axis_stencil(nc.a[node * 4 + 3], nc.drift[node * 2 + 1], h, j, n, bc);
            lo[ju] = -tau * st[0];
            di[ju] = 1.0 - tau * st[1];
            up[ju] = -tau * st[2];
            line[ju] = work[node] - tau * apply_operator_2d(g, bc, nc, next, i, j, 2);
        }
        thomas(lo, di, up, line, scratch);
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) + nu * static_cast<std::size_t>(j)] = line[static_cast<std::size_t>(j)];
    }
}

}  // namespace detail

/// Solves d_t u + L_t u + f = 0 on [S, T] x [-L, L]^d with u(T) = 0, one
/// scalar problem per component of f, where
/// L_t = (1/2) sum sigma^{ik} sigma^{jk} d_i d_j + b . grad.
/// d = 1: backward Euler with a tridiagonal solve. d = 2: Douglas ADI with
/// the mixed derivative explicit.
inline PdeSolution solve_backward_pde(const CoefficientSet& coeffs, const PdeGrid& grid, const PdeSource& source,
                                      BoundaryKind boundary = BoundaryKind::dirichlet_zero) {
    grid.validate();
    if (coeffs.d != grid.d) throw DomainError("solve_backward_pde: coefficient dimension differs from the grid");
    const int d = grid.d;
    const std::size_t nodes = grid.nodes();
    const std::size_t per_level = nodes * static_cast<std::size_t>(d);
    std::vector<double> values(per_level * static_cast<std::size_t>(grid.n_time + 1), 0.0);
    const PdeSource op_drift = source_from_drift(coeffs.drift);
    std::vector<double> lo, di, up, scratch, work, line;
    for (int level = grid.n_time - 1; level >= 0; --level) {
        const double t = grid.time(level);
        const auto nc = detail::node_coefficients(grid, coeffs, op_drift, source, t);
        for (int c = 0; c < d; ++c) {
            const std::span<const double> next(values.data() + static_cast<std::size_t>(level + 1) * per_level +
                                                   static_cast<std::size_t>(c) * nodes,
                                               nodes);
            const std::span<double> out(values.data() + static_cast<std::size_t>(level) * per_level +
                                            static_cast<std::size_t>(c) * nodes,
                                        nodes);
            if (d == 1) {
                detail::step_1d(grid, boundary, nc, next, out, c, lo, di, up, scratch);
            } else {
                detail::step_2d(grid, boundary, nc, next, out, c, work, lo, di, up, line, scratch);
            }
            detail::check_level(out, level, t);
        }
    }
    return PdeSolution(grid, boundary, std::move(values));
}

/// The drift-removing system: f = b componentwise.
inline PdeSolution solve_zvonkin(const CoefficientSet& coeffs, const PdeGrid& grid,
                                 BoundaryKind boundary = BoundaryKind::dirichlet_zero) {
    return solve_backward_pde(coeffs, grid, source_from_drift(coeffs.drift), boundary);
}

/// Domain halfwidth covering the drift support plus a diffusive margin 4 sqrt(kappa T).
inline double suggested_halfwidth(const CoefficientSet& coeffs, double horizon, double fallback = 4.0) {
    const double support = std::isfinite(coeffs.drift.support_radius) ? coeffs.drift.support_radius : fallback;
    return support + 4.0 * std::sqrt(coeffs.diffusion.kappa * horizon);
}

/// Dense grid file. Line 1: "sdde-pde-grid 1". Line 2: d L nx n_time S T
/// boundary. Then one line per (level, component), levels ascending in time,
/// holding the nodes in row-major order (node = i + nx * j).
inline void write_grid_file(const PdeSolution& sol, std::ostream& os) {
    const PdeGrid& g = sol.grid();
    const auto old = os.precision(17);
    os << "sdde-pde-grid 1\n"
       << g.d << ' ' << g.halfwidth << ' ' << g.nx << ' ' << g.n_time << ' ' << g.start << ' ' << g.terminal << ' '
       << (sol.boundary() == BoundaryKind::dirichlet_zero ? "dirichlet_zero" : "neumann_zero") << '\n';
    for (int level = 0; level < sol.levels(); ++level)
        for (int c = 0; c < g.d; ++c) {
            const auto row = sol.level_component(level, c);
            for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << row[k];
            os << '\n';
        }
    os.precision(old);
}

inline PdeSolution read_grid_file(std::istream& is) {
    std::string magic, boundary;
    int version = 0;
    PdeGrid g;
    if (!(is >> magic >> version) || magic != "sdde-pde-grid" || version != 1)
        throw ConfigError("read_grid_file: not a version-1 grid file");
    if (!(is >> g.d >> g.halfwidth >> g.nx >> g.n_time >> g.start >> g.terminal >> boundary))
        throw ConfigError("read_grid_file: malformed header");
    g.validate();
    BoundaryKind kind;
    if (boundary == "dirichlet_zero") kind = BoundaryKind::dirichlet_zero;
    else if (boundary == "neumann_zero") kind = BoundaryKind::neumann_zero;
    else throw ConfigError("read_grid_file: unknown boundary '" + boundary + "'");
    std::vector<double> values(g.nodes() * static_cast<std::size_t>(g.d) * static_cast<std::size_t>(g.n_time + 1));
    for (double& v : values)
        if (!(is >> v)) throw ConfigError("read_grid_file: truncated value block");
    return PdeSolution(g, kind, std::move(values));
}

}  // namespace sdde
