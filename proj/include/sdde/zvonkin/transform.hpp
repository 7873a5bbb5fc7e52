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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/core/parallel.hpp"
#include "sdde/rng/normal.hpp"
#include "sdde/sde/engine.hpp"
#include "sdde/sde/ensemble.hpp"
#include "sdde/zvonkin/pde.hpp"

namespace sdde {

/// Lipschitz constant of the piecewise-(bi)linear interpolant of u~(t_level, .).
inline double grid_lipschitz(const PdeSolution& sol, int level) {
    const PdeGrid& g = sol.grid();
    const int n = g.nx;
    const double h = g.dx();
    double best = 0.0;
    if (g.d == 1) {
        for (int i = 0; i + 1 < n; ++i)
            best = std::max(best, std::abs(sol.nodal(level, 0, i + 1, 0) - sol.nodal(level, 0, i, 0)) / h);
        return best;
    }
    // Within a cell the interpolant's Jacobian ranges over a box spanned by
    // the edge differences; the operator norm is convex, so the corners suffice.
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            Eigen::Matrix2d dxs[2], dys[2];
            for (int c = 0; c < 2; ++c) {
                dxs[0](c, 0) = (sol.nodal(level, c, i + 1, j) - sol.nodal(level, c, i, j)) / h;
                dxs[1](c, 0) = (sol.nodal(level, c, i + 1, j + 1) - sol.nodal(level, c, i, j + 1)) / h;
                dys[0](c, 1) = (sol.nodal(level, c, i, j + 1) - sol.nodal(level, c, i, j)) / h;
                dys[1](c, 1) = (sol.nodal(level, c, i + 1, j + 1) - sol.nodal(level, c, i + 1, j)) / h;
            }
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    Eigen::Matrix2d J;
                    J.col(0) = dxs[a].col(0);
                    J.col(1) = dys[b].col(1);
                    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(J);
                    best = std::max(best, svd.singularValues()(0));
                }
        }
    return best;
}

inline std::vector<double> lipschitz_by_level(const PdeSolution& sol) {
    std::vector<double> out(static_cast<std::size_t>(sol.levels()));
    for (int k = 0; k < sol.levels(); ++k) out[static_cast<std::size_t>(k)] = grid_lipschitz(sol, k);
    return out;
}

struct ContractionWindow {
    double delta = 0.0;
    double achieved_lipschitz = 0.0;
    double target = 0.5;
    /// Window is [T - delta, T].
    double start() const noexcept { return terminal - delta; }
    double terminal = 0.0;
};

/// (T - S) 2^{-k}, k = 0..levels-1.
inline std::vector<double> halving_ladder(double length, int levels = 12) {
    std::vector<double> out;
    for (int k = 0; k < levels; ++k) out.push_back(length * std::ldexp(1.0, -k));
    return out;
}

/// Largest ladder value delta with Lip(u~(t, .)) <= target on [T - delta, T].
inline ContractionWindow contraction_window(const PdeSolution& sol, std::vector<double> ladder, double target = 0.5) {
    const PdeGrid& g = sol.grid();
    if (ladder.empty()) throw ConfigError("contraction_window: empty ladder");
    std::sort(ladder.begin(), ladder.end(), std::greater<>());
    const auto lips = lipschitz_by_level(sol);
    const double length = g.terminal - g.start;
    for (double delta : ladder) {
        if (!(delta > 0.0) || delta > length * (1.0 + 1e-12)) continue;
        // shorter windows hold only the terminal level, where u~ vanishes
        if (delta < g.dt() * (1.0 - 1e-12)) continue;
        double worst = 0.0;
        for (int k = 0; k < sol.levels(); ++k)
            if (g.time(k) >= g.terminal - delta - 1e-12 * std::max(1.0, length))
                worst = std::max(worst, lips[static_cast<std::size_t>(k)]);
        if (worst <= target) {
            ContractionWindow w;
            w.delta = delta;
            w.achieved_lipschitz = worst;
            w.target = target;
            w.terminal = g.terminal;
            return w;
        }
    }
    throw WindowNotFoundError("contraction_window: no ladder value keeps the grid Lipschitz constant below " +
                              std::to_string(target));
}

inline ContractionWindow contraction_window(const PdeSolution& sol, double target = 0.5) {
    return contraction_window(sol, halving_ladder(sol.grid().terminal - sol.grid().start), target);
}

/// Uniform window over a family of solutions (one per horizon).
inline ContractionWindow contraction_window(std::span<const PdeSolution> family, const std::vector<double>& ladder,
                                            double target = 0.5) {
    if (family.empty()) throw ConfigError("contraction_window: empty solution family");
    double delta = std::numeric_limits<double>::infinity();
    for (const auto& sol : family) delta = std::min(delta, contraction_window(sol, ladder, target).delta);
    // Re-evaluate every member on the common window.
    ContractionWindow best = contraction_window(family[0], {delta}, target);
    for (std::size_t i = 1; i < family.size(); ++i)
        best.achieved_lipschitz =
            std::max(best.achieved_lipschitz, contraction_window(family[i], {delta}, target).achieved_lipschitz);
    return best;
}

struct TransformResult {
    /// Y(t) = u(t, X(t)) on the covered steps; X itself before the first one
    /// and frozen after the last.
    SamplePath y;
    std::size_t begin_step = 0;
    /// Last step with a valid transform.
    std::size_t end_step = 0;
    StoppingRecord stop;
};

/// Y = u(t, X(t)) for the path steps with t in [window_start, T_pde].
inline TransformResult transform_path(const SamplePath& path, const PdeSolution& sol, double window_start) {
    const TimeGrid& g = path.grid();
    if (g.dim() != sol.grid().d) throw DomainError("transform_path: dimension mismatch");
    const auto d = static_cast<std::size_t>(g.dim());
    const std::size_t m = g.delay_steps();
    std::vector<double> values = path.values();
    const double h = g.step();
    const double tol = 1e-9 * std::max(1.0, sol.grid().terminal);
    std::size_t begin = g.n_steps() + 1;
    for (std::size_t k = 0; k <= g.n_steps(); ++k) {
        const double t = static_cast<double>(k) * h;
        if (t >= window_start - tol && sol.covers_time(t)) {
            begin = k;
            break;
        }
    }
    if (begin > g.n_steps()) throw RangeError("transform_path: path grid does not meet the PDE time window");
    StoppingRecord stop;
    stop.kind = StopKind::horizon;
    std::size_t last = begin;
    bool stopped = false;
    std::vector<double> y(d);
    for (std::size_t k = begin; k <= g.n_steps(); ++k) {
        const double t = static_cast<double>(k) * h;
        if (!sol.covers_time(t)) break;
        const auto x = path.at_step(k);
        if (!sol.contains(x)) {
            stop.kind = StopKind::exit_compact_set;
            stop.level = sol.grid().halfwidth;
            stop.step = k;
            stop.time = t;
            stopped = true;
            break;
        }
        sol.u(t, x, y);
        std::copy(y.begin(), y.end(), values.begin() + static_cast<std::ptrdiff_t>((m + k) * d));
        last = k;
    }
    if (begin == last && stopped && stop.step == begin)
        throw RangeError("transform_path: path starts outside the PDE domain");
    if (!stopped) {
        stop.step = last;
        stop.time = static_cast<double>(last) * h;
    }
    for (std::size_t k = last + 1; k <= g.n_steps(); ++k)
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>((m + last) * d), d,
                    values.begin() + static_cast<std::ptrdiff_t>((m + k) * d));
    return TransformResult{SamplePath(g, PathRole::transformed, std::move(values)), begin, last, stop};
}

inline TransformResult transform_path(const SamplePath& path, const PdeSolution& sol) {
    return transform_path(path, sol, sol.grid().start);
}

struct ItoResidualReport {
    std::vector<double> times;
    /// E[R(t)] for the first coordinate of R = Y(t) - Y(S) - int Du sigma dW.
    std::vector<McEstimate> mean;
    /// E|R(t)|.
    std::vector<McEstimate> abs_mean;
};

/// Residual of the drift-free representation of Y along an ensemble with V = 0.
inline ItoResidualReport ito_residual(const Ensemble& ensemble, const PdeSolution& sol,
                                      const std::vector<std::size_t>& checkpoints, double window_start) {
    const CoefficientSet& co = ensemble.config().coefficients;
    if (!co.functional.is_zero) throw ConfigError("ito_residual: the ensemble must have V = 0");
    const TimeGrid& g = ensemble.config().grid;
    const auto d = static_cast<std::size_t>(g.dim());
    const std::size_t nc = checkpoints.size();
    const auto per_path = ensemble.map<std::vector<double>>([&](const PathResult& r, std::size_t) {
        const TransformResult tr = transform_path(r.path, sol, window_start);
        std::vector<double> jac(d * d), sig(d * d), r_acc(d, 0.0), out(2 * nc, 0.0);
        std::size_t next_cp = 0;
        auto record = [&](std::size_t k) {
            while (next_cp < nc && checkpoints[next_cp] == k) {
                double norm2 = 0.0;
                std::vector<double> res(d);
                for (std::size_t c = 0; c < d; ++c) {
                    res[c] = tr.y.at_step(k)[c] - tr.y.at_step(tr.begin_step)[c] - r_acc[c];
                    norm2 += res[c] * res[c];
                }
                out[next_cp] = res[0];
                out[nc + next_cp] = std::sqrt(norm2);
                ++next_cp;
            }
        };
        while (next_cp < nc && checkpoints[next_cp] < tr.begin_step) ++next_cp;
        for (std::size_t k = tr.begin_step; k <= g.n_steps(); ++k) {
            record(k);
            if (k >= tr.end_step || k == g.n_steps()) continue;
            const double t = static_cast<double>(k) * g.step();
            const auto x = r.path.at_step(k);
            sol.jacobian(t, x, jac);
            co.diffusion.eval(t, x, sig);
            const auto dw = r.increments.at(k);
            for (std::size_t i = 0; i < d; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    double js = 0.0;
                    for (std::size_t l = 0; l < d; ++l) js += jac[i * d + l] * sig[l * d + j];
                    acc += js * dw[j];
                }
                r_acc[i] += acc;
            }
        }
        return out;
    });
    ItoResidualReport rep;
    std::vector<double> col(per_path.size());
    for (std::size_t j = 0; j < nc; ++j) {
        rep.times.push_back(static_cast<double>(checkpoints[j]) * g.step());
        for (std::size_t i = 0; i < per_path.size(); ++i) col[i] = per_path[i][j];
        rep.mean.push_back(estimate_mean(col));
        for (std::size_t i = 0; i < per_path.size(); ++i) col[i] = per_path[i][nc + j];
        rep.abs_mean.push_back(estimate_mean(col));
    }
    return rep;
}

struct SandwichReport {
    std::size_t pairs = 0;
    std::size_t pairs_ok = 0;
    std::size_t points_checked = 0;
    /// Extremes of |Z| / |Z~| over all checked points with Z~ != 0.
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    double lower = 0.5;
    double upper = 1.5;
    bool all_hold() const noexcept { return pairs_ok == pairs; }
};

/// Coupled pairs X from `initial`, X^ from `perturbed`, same noise; checks
/// lower |Z~| <= |Z| <= upper |Z~| at every step of [window start, T] before
/// either path leaves the PDE domain.
inline SandwichReport sandwich_check(const SimulationConfig& config, const PathSegment& perturbed,
                                     const PdeSolution& sol, const ContractionWindow& window, std::size_t n_pairs,
                                     unsigned threads = 0, double lower = 0.5, double upper = 1.5) {
    SimulationConfig other = config;
    other.initial_segment = perturbed;
    other.validate();
    const TimeGrid& g = config.grid;
    const auto d = static_cast<std::size_t>(g.dim());
    struct PairOutcome {
        int ok = 1;
        std::size_t points = 0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
    };
    if (threads == 0) threads = default_thread_count();
    const auto outcomes = parallel_map<PairOutcome>(n_pairs, threads, [&](std::size_t i) {
        const auto inc = generate_increments(g, config.master_seed, i);
        const PathResult a = simulate_path_with_increments(config, inc);
        const PathResult b = simulate_path_with_increments(other, inc);
        const TransformResult ya = transform_path(a.path, sol, window.start());
        const TransformResult yb = transform_path(b.path, sol, window.start());
        PairOutcome o;
        const std::size_t last = std::min(ya.end_step, yb.end_step);
        for (std::size_t k = ya.begin_step; k <= last; ++k) {
            double z2 = 0.0, zt2 = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double z = a.path.at_step(k)[c] - b.path.at_step(k)[c];
                const double zt = ya.y.at_step(k)[c] - yb.y.at_step(k)[c];
                z2 += z * z;
                zt2 += zt * zt;
            }
            const double z = std::sqrt(z2), zt = std::sqrt(zt2);
            ++o.points;
            if (!(lower * zt <= z && z <= upper * zt)) o.ok = 0;
            if (zt > 0.0) {
                o.lo = std::min(o.lo, z / zt);
                o.hi = std::max(o.hi, z / zt);
            }
        }
        return o;
    });
    SandwichReport rep;
    rep.pairs = n_pairs;
    rep.lower = lower;
    rep.upper = upper;
    for (const auto& o : outcomes) {
        rep.pairs_ok += static_cast<std::size_t>(o.ok);
        rep.points_checked += o.points;
        rep.min_ratio = std::min(rep.min_ratio, o.lo);
        rep.max_ratio = std::max(rep.max_ratio, o.hi);
    }
    return rep;
}

struct EmbeddingReport {
    /// Grid surrogates of ||u||_{H^q_{2,p}} and ||d_t u||_{L^q_p}.
    double h_norm = 0.0;
    double dt_norm = 0.0;
    /// Smallest N making each inequality hold on the sampled triples.
    double n_value_time = 0.0;
    double n_value_space = 0.0;
    double n_gradient_time = 0.0;
    double n_gradient_space = 0.0;
    bool value_part_applies = false;
    bool gradient_part_applies = false;
    std::size_t samples = 0;
};

namespace detail {

inline double safe_ratio(double lhs, double rhs) {
    if (lhs == 0.0) return 0.0;
    if (rhs == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

}  // namespace detail

/// Fitted constants for the Hoelder embedding inequalities of u~ and grad u~.
inline EmbeddingReport embedding_check(const PdeSolution& sol, double p, double q, double epsilon, double delta_exp,
                                       std::size_t n_samples = 4000, std::uint64_t seed = 1) {
    const PdeGrid& g = sol.grid();
    const int d = g.d;
    const int n = g.nx;
    const double h = g.dx();
    const double tau = g.dt();
    const double cell = std::pow(h, d);
    const std::size_t nodes = g.nodes();
    auto ij = [n](std::size_t node) { return std::pair<int, int>{static_cast<int>(node % static_cast<std::size_t>(n)),
                                                                 static_cast<int>(node / static_cast<std::size_t>(n))}; };
    auto value_norm = [&](int level, std::size_t node) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += std::pow(sol.value(level, c, node), 2);
        return std::sqrt(s);
    };
    auto grad_vec = [&](int level, std::size_t node, std::vector<double>& out) {
        const auto [i, j] = ij(node);
        out.assign(static_cast<std::size_t>(d * d), 0.0);
        for (int c = 0; c < d; ++c)
            for (int a = 0; a < d; ++a)
                out[static_cast<std::size_t>(c * d + a)] = sol.node_derivative(level, c, i, j, a);
    };
    auto frob = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    auto hess_norm = [&](int level, std::size_t node) {
        const auto [i, j] = ij(node);
        double s = 0.0;
        for (int c = 0; c < d; ++c)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) s += std::pow(sol.node_second_derivative(level, c, i, j, a, b), 2);
        return std::sqrt(s);
    };
    // mixed norms, left rule in time
    double h_acc[3] = {0, 0, 0};
    double dt_acc = 0.0;
    std::vector<double> gv;
    for (int k = 0; k < g.n_time; ++k) {
        double sp[3] = {0, 0, 0};
        double st = 0.0;
        for (std::size_t node = 0; node < nodes; ++node) {
            grad_vec(k, node, gv);
            sp[0] += std::pow(value_norm(k, node), p) * cell;
            sp[1] += std::pow(frob(gv), p) * cell;
            sp[2] += std::pow(hess_norm(k, node), p) * cell;
            double dtu = 0.0;
            for (int c = 0; c < d; ++c) dtu += std::pow((sol.value(k + 1, c, node) - sol.value(k, c, node)) / tau, 2);
            st += std::pow(std::sqrt(dtu), p) * cell;
        }
        for (int r = 0; r < 3; ++r) h_acc[r] += tau * std::pow(sp[r], q / p);
        dt_acc += tau * std::pow(st, q / p);
    }
    EmbeddingReport rep;
    rep.h_norm = std::pow(h_acc[0], 1.0 / q) + std::pow(h_acc[1], 1.0 / q) + std::pow(h_acc[2], 1.0 / q);
    rep.dt_norm = std::pow(dt_acc, 1.0 / q);
    const double T = g.terminal - g.start;
    const double pq = d / p + 2.0 / q;
    rep.value_part_applies = epsilon + pq < 2.0 && 2.0 * delta_exp + pq < 2.0;
    rep.gradient_part_applies = epsilon + pq < 1.0;
    rep.samples = n_samples;
    const double space_factor = std::pow(T, -1.0 / q) * (rep.h_norm + T * rep.dt_norm);
    const double time_base_v =
        std::pow(rep.h_norm, 1.0 - 1.0 / q - delta_exp) * std::pow(rep.dt_norm, 1.0 / q + delta_exp);
    const double time_base_g =
        std::pow(rep.h_norm, 1.0 - 1.0 / q - epsilon / 2.0) * std::pow(rep.dt_norm, 1.0 / q + epsilon / 2.0);
    const rng::GaussianStream stream(seed, 7, 0);
    std::vector<double> g1, g2;
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto pick = [&](std::uint64_t slot, std::size_t count) {
            return std::min(count - 1, static_cast<std::size_t>(stream.uniform(4 * s + slot) * static_cast<double>(count)));
        };
        const int l1 = static_cast<int>(pick(0, static_cast<std::size_t>(g.n_time + 1)));
        int l2 = static_cast<int>(pick(1, static_cast<std::size_t>(g.n_time + 1)));
        if (l2 == l1) l2 = l1 == g.n_time ? l1 - 1 : l1 + 1;
        const std::size_t x = pick(2, nodes);
        std::size_t y = pick(3, nodes);
        if (y == x) y = (x + 1) % nodes;
        const double dtime = std::abs(g.time(l1) - g.time(l2));
        const auto [xi, xj] = ij(x);
        const auto [yi, yj] = ij(y);
        const double dist = h * std::hypot(xi - yi, d == 2 ? xj - yj : 0);
        // value inequalities
        double du_t = 0.0, du_x = 0.0;
        for (int c = 0; c < d; ++c) {
            du_t += std::pow(sol.value(l1, c, x) - sol.value(l2, c, x), 2);
            du_x += std::pow(sol.value(l1, c, x) - sol.value(l1, c, y), 2);
        }
        rep.n_value_time = std::max(rep.n_value_time,
                                    detail::safe_ratio(std::sqrt(du_t), std::pow(dtime, delta_exp) * time_base_v));
        rep.n_value_space =
            std::max(rep.n_value_space,
                     detail::safe_ratio(value_norm(l1, x) + std::sqrt(du_x) / std::pow(dist, epsilon), space_factor));
        // gradient inequalities
        grad_vec(l1, x, g1);
        grad_vec(l2, x, g2);
        double dg_t = 0.0;
        for (std::size_t k = 0; k < g1.size(); ++k) dg_t += std::pow(g1[k] - g2[k], 2);
        grad_vec(l1, y, g2);
        double dg_x = 0.0;
        for (std::size_t k = 0; k < g1.size(); ++k) dg_x += std::pow(g1[k] - g2[k], 2);
        rep.n_gradient_time = std::max(
            rep.n_gradient_time, detail::safe_ratio(std::sqrt(dg_t), std::pow(dtime, delta_exp) * time_base_g));
        rep.n_gradient_space = std::max(
            rep.n_gradient_space, detail::safe_ratio(frob(g1) + std::sqrt(dg_x) / std::pow(dist, epsilon), space_factor));
    }
    return rep;
}

}  // namespace sdde
