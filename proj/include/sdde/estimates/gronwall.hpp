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
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/core/parallel.hpp"
#include "sdde/estimates/bound_report.hpp"
#include "sdde/estimates/regularity.hpp"
#include "sdde/sde/engine.hpp"
#include "sdde/zvonkin/transform.hpp"

namespace sdde {

// ---- multiplier A(t) along coupled pairs -----------------------------------

struct MultiplierPath {
    std::vector<double> times;
    /// Nondecreasing, A(S) = 0.
    std::vector<double> A_values;
};

struct MultiplierReport {
    std::vector<MultiplierPath> paths;
    /// E exp(A(T) / 2).
    BoundReport exp_half;
};

/// A(t) = c int |V(s, X_s)| |Du(X) - Du(X^)|_HS / |Z| + c int |Du(X) sigma(X) - Du(X^) sigma(X^)|_HS^2 / |Z|^2
/// over [window_start, t], with terms at Z = 0 counted as 0. Pairs share noise.
inline MultiplierReport gronwall_multiplier(const SimulationConfig& config, const PathSegment& perturbed,
                                            const PdeSolution* solution, double window_start, double c,
                                            std::size_t n_pairs, std::size_t keep_paths = 0, unsigned threads = 0) {
    if (solution == nullptr) throw DependencyError("gronwall_multiplier: no Zvonkin solution (gradient data) supplied");
    const PdeSolution& sol = *solution;
    SimulationConfig other = config;
    other.initial_segment = perturbed;
    other.validate();
    config.validate();
    const TimeGrid& g = config.grid;
    const auto d = static_cast<std::size_t>(g.dim());
    const CoefficientSet& co = config.coefficients;
    if (threads == 0) threads = default_thread_count();
    const auto paths = parallel_map<MultiplierPath>(n_pairs, threads, [&](std::size_t i) {
        const auto inc = generate_increments(g, config.master_seed, i);
        const PathResult a = simulate_path_with_increments(config, inc);
        const PathResult b = simulate_path_with_increments(other, inc);
        const TransformResult ta = transform_path(a.path, sol, window_start);
        const TransformResult tb = transform_path(b.path, sol, window_start);
        const std::size_t last = std::min(ta.end_step, tb.end_step);
        MultiplierPath mp;
        std::vector<double> ja(d * d), jb(d * d), sa(d * d), sb(d * d), v(d);
        double A = 0.0;
        for (std::size_t k = ta.begin_step; k <= g.n_steps(); ++k) {
            mp.times.push_back(static_cast<double>(k) * g.step());
            mp.A_values.push_back(A);
            if (k >= last) continue;
            const double t = static_cast<double>(k) * g.step();
            const auto xa = a.path.at_step(k);
            const auto xb = b.path.at_step(k);
            const double z = euclidean_distance(xa, xb);
            if (z == 0.0) continue;
            sol.jacobian(t, xa, ja);
            sol.jacobian(t, xb, jb);
            double dj = 0.0;
            for (std::size_t q = 0; q < d * d; ++q) dj += (ja[q] - jb[q]) * (ja[q] - jb[q]);
            double vnorm = 0.0;
            if (!co.functional.is_zero) {
                co.functional.eval(t, a.path.segment_at_step(k), v);
                vnorm = euclidean_norm(v);
            }
            co.diffusion.eval(t, xa, sa);
            co.diffusion.eval(t, xb, sb);
            double ds = 0.0;
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t s = 0; s < d; ++s) {
                    double pa = 0.0, pb = 0.0;
                    for (std::size_t l = 0; l < d; ++l) {
                        pa += ja[r * d + l] * sa[l * d + s];
                        pb += jb[r * d + l] * sb[l * d + s];
                    }
                    ds += (pa - pb) * (pa - pb);
                }
            A += c * (vnorm * std::sqrt(dj) / z + ds / (z * z)) * g.step();
        }
        return mp;
    });
    MultiplierReport rep;
    std::vector<double> samples(n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i) samples[i] = std::exp(0.5 * paths[i].A_values.back());
    rep.exp_half.name = "multiplier_exp_half_A";
    rep.exp_half.lhs = estimate_mean(samples);
    if (n_pairs >= 4) rep.exp_half.ladder = prefix_ladder(samples, n_pairs / 4, 3);
    rep.exp_half.parameters = {{"c", c}, {"window_start", window_start}, {"T", g.horizon()}};
    rep.exp_half.note = "finiteness diagnosed by stability across N, 2N, 4N";
    rep.paths.assign(paths.begin(), paths.begin() + static_cast<std::ptrdiff_t>(std::min(keep_paths, n_pairs)));
    return rep;
}

// ---- exponential moments of additive functionals ----------------------------

/// 1 / (1 - alpha).
inline double khasminskii_rhs(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("khasminskii: alpha must lie in [0, 1)");
    return 1.0 / (1.0 - alpha);
}

/// Deterministic beta: alpha = int_0^T beta, left side exp(int_0^T beta).
/// Integrated with the composite Simpson rule on `panels` panels.
inline BoundReport khasminskii_check(const std::function<double(double)>& beta, double T, std::size_t panels = 1 << 16) {
    if (panels % 2) ++panels;
    const double h = T / static_cast<double>(panels);
    CompensatedSum s;
    for (std::size_t i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double b = beta(static_cast<double>(i) * h);
        if (b < 0.0) throw DomainError("khasminskii_check: beta must be nonnegative");
        s.add(w * b);
    }
    const double integral = s.value() * h / 3.0;
    BoundReport rep;
    rep.name = "khasminskii_deterministic";
    rep.lhs = exact_estimate(std::exp(integral));
    rep.rhs = khasminskii_rhs(integral);
    rep.parameters = {{"alpha", integral}, {"T", T}};
    return rep;
}

inline BoundReport khasminskii_constant(double c, double T) {
    BoundReport rep;
    rep.name = "khasminskii_constant";
    rep.lhs = exact_estimate(std::exp(c * T));
    rep.rhs = khasminskii_rhs(c * T);
    rep.parameters = {{"alpha", c * T}, {"c", c}, {"T", T}};
    return rep;
}

/// beta(t) = c 1_{|W(t)| <= eps}, W one-dimensional. Since the conditional
/// density of W(u) given F_s is at most (2 pi (u - s))^{-1/2},
/// E[int_s^t beta | F_s] <= c int_0^T min(1, 2 eps / sqrt(2 pi v)) dv =: alpha.
inline double indicator_alpha_certificate(double c, double eps, double T) {
    const double k = 2.0 * eps / std::sqrt(2.0 * std::numbers::pi);
    const double u0 = k * k;
    if (T <= u0) return c * T;
    return c * (u0 + 2.0 * k * (std::sqrt(T) - std::sqrt(u0)));
}

struct IndicatorBetaSpec {
    double c = 1.0;
    double eps = 0.1;
    double T = 1.0;
    double step = 1.0 / 1024.0;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

inline BoundReport khasminskii_check(const IndicatorBetaSpec& spec) {
    const double alpha = indicator_alpha_certificate(spec.c, spec.eps, spec.T);
    const double rhs = khasminskii_rhs(alpha);
    const TimeGrid g = TimeGrid::make(1, spec.step, spec.T, spec.step);
    const unsigned threads = spec.threads == 0 ? default_thread_count() : spec.threads;
    const auto samples = parallel_map<double>(spec.n_paths, threads, [&](std::size_t i) {
        const auto inc = generate_increments(g, spec.seed, i);
        double w = 0.0, occ = 0.0;
        for (std::size_t k = 0; k < g.n_steps(); ++k) {
            if (std::abs(w) <= spec.eps) occ += spec.step;
            w += inc.at(k)[0];
        }
        return std::exp(spec.c * occ);
    });
    BoundReport rep;
    rep.name = "khasminskii_indicator";
    rep.lhs = estimate_mean(samples);
    rep.rhs = rhs;
    if (samples.size() >= 4) rep.ladder = prefix_ladder(samples, samples.size() / 4, 3);
    rep.parameters = {{"alpha", alpha}, {"c", spec.c}, {"eps", spec.eps}, {"T", spec.T}, {"h", spec.step}};
    return rep;
}

// ---- stochastic Gronwall harness --------------------------------------------

enum class GronwallProcess {
    /// Z = C e^{Kt}, M = 0.
    deterministic,
    /// Z = C exp(Kt + W - t/2): dZ = K Z dt + Z dW.
    geometric,
    /// Z = |W| + C (no Gronwall hypothesis; finiteness only).
    reflected,
};

inline const char* to_string(GronwallProcess p) {
    switch (p) {
        case GronwallProcess::deterministic: return "deterministic";
        case GronwallProcess::geometric: return "geometric";
        case GronwallProcess::reflected: return "reflected";
    }
    return "unknown";
}

struct GronwallHarnessSpec {
    GronwallProcess process = GronwallProcess::geometric;
    double C = 1.0;
    double K = 0.0;
    double p = 0.5;
    double T = 1.0;
    double step = 1.0 / 256.0;
    std::size_t n_paths = 4000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    /// (Z, M, C) -> scale * (Z, M, C) on the same noise.
    double scale = 3.0;
};

struct GronwallHarnessReport {
    /// E sup_{t<=T} Z^p on N, 2N, 4N paths.
    std::vector<McEstimate> ladder;
    McEstimate sup_moment;
    McEstimate scaled_sup_moment;
    /// |E_scaled / (scale^p E) - 1|.
    double scaling_error = 0.0;
    /// Largest excess of Z(t) over C + K int_0^t sup Z + M(t), relative to the
    /// running sup; exact zero for the deterministic case, discretization-sized
    /// for the geometric one.
    double hypothesis_residual = 0.0;
    /// Closed form where available: C^p e^{pKT} (deterministic), C^p/(1-p) upper bound (geometric, K=0).
    double reference = std::numeric_limits<double>::quiet_NaN();
    /// Slope of log E sup Z^p against t over {T/4, T/2, T}.
    double growth_rate = 0.0;
    bool stable() const { return mutually_consistent(ladder); }
};

namespace detail {

// sup Z^p at T/4, T/2, T and the largest excess of Z over C + K int sup Z + M,
// with M = sum Z dW for the geometric process.
inline std::array<double, 4> gronwall_sample(const GronwallHarnessSpec& s, double lambda, const BrownianIncrements* inc) {
    const double C = lambda * s.C;
    const auto n = static_cast<std::size_t>(std::llround(s.T / s.step));
    double w = 0.0, sup = 0.0, integral = 0.0, mart = 0.0, residual = 0.0;
    std::array<double, 4> out{};
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * s.step;
        double z = C;
        switch (s.process) {
            case GronwallProcess::deterministic: z = C * std::exp(s.K * t); break;
            case GronwallProcess::geometric: z = C * std::exp(s.K * t + w - 0.5 * t); break;
            case GronwallProcess::reflected: z = lambda * (std::abs(w) + s.C); break;
        }
        sup = std::max(sup, z);
        if (s.process == GronwallProcess::deterministic) {
            // Z is its own running sup; exact integral
            const double exact = C * std::expm1(s.K * t);
            residual = std::max(residual, std::abs(z - (C + exact)) / sup);
        } else if (s.process == GronwallProcess::geometric) {
            residual = std::max(residual, (z - (C + s.K * integral + mart)) / sup);
        }
        if (k == n / 4) out[0] = std::pow(sup, s.p);
        if (k == n / 2) out[1] = std::pow(sup, s.p);
        if (k < n) {
            const double dw = inc ? inc->at(k)[0] : 0.0;
            integral += sup * s.step;
            mart += z * dw;
            w += dw;
        }
    }
    out[2] = std::pow(sup, s.p);
    out[3] = residual;
    return out;
}

}  // namespace detail

/// Monte-Carlo E sup Z^p for a process constructed to satisfy
/// Z <= K int sup Z + M + C, with scale and horizon diagnostics.
inline GronwallHarnessReport stochastic_gronwall_harness(const GronwallHarnessSpec& s) {
    if (!(s.p > 0.0 && s.p < 1.0)) throw DomainError("stochastic_gronwall_harness: p must lie in (0,1)");
    if (!(s.C > 0.0) || s.K < 0.0) throw DomainError("stochastic_gronwall_harness: need C > 0 and K >= 0");
    const TimeGrid g = TimeGrid::make(1, s.step, s.T, s.step);
    if (g.n_steps() % 4 != 0) throw GridAlignmentError("stochastic_gronwall_harness: T/h must be divisible by 4");
    const bool random = s.process != GronwallProcess::deterministic;
    const std::size_t n = random ? s.n_paths : 1;
    const unsigned threads = s.threads == 0 ? default_thread_count() : s.threads;
    const auto per = parallel_map<std::array<double, 5>>(n, threads, [&](std::size_t i) {
        std::array<double, 5> out{};
        BrownianIncrements inc;
        if (random) inc = generate_increments(g, s.seed, i);
        const auto a = detail::gronwall_sample(s, 1.0, random ? &inc : nullptr);
        const auto b = detail::gronwall_sample(s, s.scale, random ? &inc : nullptr);
        out = {a[0], a[1], a[2], a[3], b[2]};
        return out;
    });
    GronwallHarnessReport rep;
    std::vector<double> col(n);
    auto column = [&](std::size_t j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = per[i][j];
        return random ? estimate_mean(col) : exact_estimate(col[0]);
    };
    const McEstimate q1 = column(0), q2 = column(1);
    rep.sup_moment = column(2);
    rep.scaled_sup_moment = column(4);
    for (std::size_t i = 0; i < n; ++i) rep.hypothesis_residual = std::max(rep.hypothesis_residual, per[i][3]);
    for (std::size_t i = 0; i < n; ++i) col[i] = per[i][2];
    rep.ladder = random && n >= 4 ? prefix_ladder(col, n / 4, 3) : std::vector<McEstimate>{rep.sup_moment};
    rep.scaling_error = std::abs(rep.scaled_sup_moment.mean / (std::pow(s.scale, s.p) * rep.sup_moment.mean) - 1.0);
    if (s.process == GronwallProcess::deterministic) rep.reference = std::pow(s.C, s.p) * std::exp(s.p * s.K * s.T);
    if (s.process == GronwallProcess::geometric && s.K == 0.0) rep.reference = std::pow(s.C, s.p) / (1.0 - s.p);
    const double ts[3] = {s.T / 4, s.T / 2, s.T};
    const double ys[3] = {std::log(q1.mean), std::log(q2.mean), std::log(rep.sup_moment.mean)};
    rep.growth_rate = fit_line(std::span<const double>(ts, 3), std::span<const double>(ys, 3)).first;
    return rep;
}

}  // namespace sdde
