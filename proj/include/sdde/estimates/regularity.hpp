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
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/core/parallel.hpp"
#include "sdde/sde/engine.hpp"

namespace sdde {

// ---- stability in the initial segment --------------------------------------

struct StabilityReport {
    std::vector<double> eps;
    /// E ||X_T - X^_T||_inf^gamma per eps.
    std::vector<McEstimate> moments;
    double gamma = 1.0;
    double slope = 0.0;
    double intercept = 0.0;
    double empirical_constant() const { return std::exp(intercept); }
};

/// Least-squares line through (x_i, y_i); returns {slope, intercept}.
inline std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ConfigError("fit_line: degenerate abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

inline PathSegment shifted_segment(const PathSegment& base, const PathSegment& direction, double eps) {
    if (!(base.grid() == direction.grid())) throw ConfigError("shifted_segment: grids differ");
    std::vector<double> v = base.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += eps * direction.values()[i];
    return PathSegment(base.grid(), std::move(v));
}

/// Coupled X from x and X^ from x + eps v (same noise); log-log regression of
/// E ||X_T - X^_T||_inf^gamma on eps.
inline StabilityReport stability_experiment(const SimulationConfig& config, const PathSegment& direction,
                                            double gamma, const std::vector<double>& eps, std::size_t n_paths,
                                            unsigned threads = 0) {
    config.validate();
    if (!(gamma > 0.0)) throw DomainError("stability_experiment: gamma must be positive");
    std::vector<double> positive;
    for (double e : eps)
        if (e > 0.0 && std::find(positive.begin(), positive.end(), e) == positive.end()) positive.push_back(e);
    if (positive.size() < 2) throw ConfigError("stability_experiment: the eps ladder needs two distinct positive values");
    std::vector<SimulationConfig> shifted;
    for (double e : eps) {
        SimulationConfig c = config;
        c.initial_segment = shifted_segment(config.initial_segment, direction, e);
        shifted.push_back(std::move(c));
    }
    const TimeGrid& g = config.grid;
    if (threads == 0) threads = default_thread_count();
    const auto per_path = parallel_map<std::vector<double>>(n_paths, threads, [&](std::size_t i) {
        const auto inc = generate_increments(g, config.master_seed, i);
        const PathResult x = simulate_path_with_increments(config, inc);
        const SegmentView xs = x.path.segment_at_step(g.n_steps());
        std::vector<double> out(eps.size());
        for (std::size_t j = 0; j < eps.size(); ++j) {
            const PathResult y = simulate_path_with_increments(shifted[j], inc);
            out[j] = std::pow(sup_distance(xs, y.path.segment_at_step(g.n_steps())), gamma);
        }
        return out;
    });
    StabilityReport rep;
    rep.eps = eps;
    rep.gamma = gamma;
    std::vector<double> col(n_paths), lx, ly;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        for (std::size_t i = 0; i < n_paths; ++i) col[i] = per_path[i][j];
        rep.moments.push_back(estimate_mean(col));
        if (eps[j] > 0.0 && rep.moments.back().mean > 0.0) {
            lx.push_back(std::log(eps[j]));
            ly.push_back(std::log(rep.moments.back().mean));
        }
    }
    if (lx.size() < 2) throw ConfigError("stability_experiment: fewer than two nonzero moments to regress");
    std::tie(rep.slope, rep.intercept) = fit_line(lx, ly);
    return rep;
}

// ---- Hölder regularity under refinement ------------------------------------

/// widest[lag] = max_i |x_{i+lag} - x_i| over steps in [0, T].
inline std::vector<double> lag_profile(const SamplePath& path) {
    const TimeGrid& g = path.grid();
    const std::size_t n = g.n_steps();
    const int d = g.dim();
    std::vector<double> widest(n + 1, 0.0);
    for (std::size_t lag = 1; lag <= n; ++lag) {
        double w = 0.0;
        for (std::size_t i = 0; i + lag <= n; ++i) {
            const auto a = path.at_step(i);
            const auto b = path.at_step(i + lag);
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += (b[c] - a[c]) * (b[c] - a[c]);
            w = std::max(w, s);
        }
        widest[lag] = std::sqrt(w);
    }
    return widest;
}

inline double holder_from_profile(const std::vector<double>& widest, double step, double alpha) {
    double best = 0.0;
    for (std::size_t lag = 1; lag < widest.size(); ++lag)
        best = std::max(best, widest[lag] / std::pow(static_cast<double>(lag) * step, alpha));
    return best;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median: empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

/// Every `factor`-th sample of a segment, on the coarser grid.
inline PathSegment subsample_segment(const PathSegment& fine, const TimeGrid& coarse, std::size_t factor) {
    std::vector<double> v;
    for (std::size_t i = 0; i < coarse.segment_points(); ++i) {
        const auto p = fine.point(i * factor);
        v.insert(v.end(), p.begin(), p.end());
    }
    return PathSegment(coarse, std::move(v));
}

enum class HolderVerdict { stable, diverging, inconclusive };

inline const char* to_string(HolderVerdict v) {
    switch (v) {
        case HolderVerdict::stable: return "stable";
        case HolderVerdict::diverging: return "diverging";
        case HolderVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct HolderReport {
    std::vector<double> alphas;
    /// Steps from coarsest to finest.
    std::vector<double> steps;
    /// medians[a][level]: median seminorm for alphas[a] at steps[level].
    std::vector<std::vector<double>> medians;
    /// ratios[a]: median at the finest step over the next coarser one.
    std::vector<double> ratios;
    std::vector<HolderVerdict> verdicts;
    double stable_threshold = 1.2;
    double diverging_threshold = 1.5;
};

/// Median alpha-Hölder seminorm on [0, T] of the same noise realised on grids
/// h_fine * factor^k, k = levels-1..0; coarse noise is the aggregated fine noise.
inline HolderReport holder_experiment(const SimulationConfig& fine_config, const std::vector<double>& alphas,
                                      std::size_t n_paths, std::size_t factor = 4, int levels = 2,
                                      bool driftless = false, unsigned threads = 0) {
    fine_config.validate();
    if (levels < 2) throw ConfigError("holder_experiment: at least two grid resolutions are required");
    if (factor < 2) throw ConfigError("holder_experiment: refinement factor must be at least 2");
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) throw DomainError("holder_experiment: alpha must lie in (0,1)");
    const TimeGrid& fg = fine_config.grid;
    std::vector<SimulationConfig> configs;
    std::vector<std::size_t> agg;
    std::size_t f = 1;
    for (int k = 0; k < levels - 1; ++k) f *= factor;
    for (int k = 0; k < levels; ++k) {
        SimulationConfig c = fine_config;
        if (fg.delay_steps() % f != 0 || fg.n_steps() % f != 0)
            throw GridAlignmentError("holder_experiment: refinement factor does not divide the grid");
        c.grid = fg.with_step(fg.step() * static_cast<double>(f));
        c.initial_segment = subsample_segment(fine_config.initial_segment, c.grid, f);
        configs.push_back(std::move(c));
        agg.push_back(f);
        f /= factor;
    }
    if (threads == 0) threads = default_thread_count();
    const std::size_t na = alphas.size();
    const auto per_path = parallel_map<std::vector<double>>(n_paths, threads, [&](std::size_t i) {
        const auto fine_inc = generate_increments(fg, fine_config.master_seed, i);
        std::vector<double> out(na * static_cast<std::size_t>(levels));
        for (int k = 0; k < levels; ++k) {
            const auto& c = configs[static_cast<std::size_t>(k)];
            auto inc = agg[static_cast<std::size_t>(k)] == 1 ? fine_inc : coarsen_increments(fine_inc, agg[static_cast<std::size_t>(k)]);
            const PathResult r = driftless ? simulate_driftless_with_increments(c, std::move(inc))
                                           : simulate_path_with_increments(c, std::move(inc));
            const auto prof = lag_profile(r.path);
            for (std::size_t a = 0; a < na; ++a)
                out[a * static_cast<std::size_t>(levels) + static_cast<std::size_t>(k)] =
                    holder_from_profile(prof, c.grid.step(), alphas[a]);
        }
        return out;
    });
    HolderReport rep;
    rep.alphas = alphas;
    for (const auto& c : configs) rep.steps.push_back(c.grid.step());
    std::vector<double> col(n_paths);
    for (std::size_t a = 0; a < na; ++a) {
        std::vector<double> meds;
        for (int k = 0; k < levels; ++k) {
            for (std::size_t i = 0; i < n_paths; ++i)
                col[i] = per_path[i][a * static_cast<std::size_t>(levels) + static_cast<std::size_t>(k)];
            meds.push_back(median(col));
        }
        const double ratio = meds[meds.size() - 2] > 0.0 ? meds.back() / meds[meds.size() - 2] : 1.0;
        rep.medians.push_back(meds);
        rep.ratios.push_back(ratio);
        rep.verdicts.push_back(ratio <= rep.stable_threshold      ? HolderVerdict::stable
                               : ratio >= rep.diverging_threshold ? HolderVerdict::diverging
                                                                  : HolderVerdict::inconclusive);
    }
    return rep;
}

}  // namespace sdde
