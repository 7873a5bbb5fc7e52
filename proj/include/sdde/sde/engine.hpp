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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdde/coefficients/specs.hpp"
#include "sdde/core/errors.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/core/path.hpp"
#include "sdde/rng/normal.hpp"

namespace sdde {

enum class Scheme { euler_maruyama };

struct SimulationConfig {
    TimeGrid grid;
    CoefficientSet coefficients;
    PathSegment initial_segment;
    std::uint64_t master_seed = 0;
    /// Level n of the truncation b^n = 1_{t <= n, |x| <= n} b.
    std::optional<int> drift_cutoff_level;
    /// A path whose state exceeds this level is stopped and flagged as exploded.
    std::optional<double> explosion_level;
    Scheme scheme = Scheme::euler_maruyama;

    void validate() const {
        coefficients.validate();
        if (coefficients.d != grid.dim()) throw ConfigError("SimulationConfig: coefficient and grid dimensions differ");
        if (!(initial_segment.grid() == grid))
            throw ConfigError("SimulationConfig: initial segment is not sampled on the grid's delay window");
        if (drift_cutoff_level && *drift_cutoff_level < 1)
            throw ConfigError("SimulationConfig: drift_cutoff_level must be positive");
        if (explosion_level && !(*explosion_level > 0.0))
            throw ConfigError("SimulationConfig: explosion_level must be positive");
    }
};

/// Driving noise Delta W_k = W(t_{k+1}) - W(t_k), k = 0..n_steps-1.
struct BrownianIncrements {
    int dim = 1;
    double step = 1.0;
    std::vector<double> values;

    std::size_t n_steps() const noexcept { return values.size() / static_cast<std::size_t>(dim); }
    std::span<const double> at(std::size_t k) const noexcept {
        return {values.data() + k * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

enum class StopKind { exit_compact_set, value_exceeds_n, functional_exceeds_n, horizon };

inline const char* to_string(StopKind k) {
    switch (k) {
        case StopKind::exit_compact_set: return "exit_compact_set";
        case StopKind::value_exceeds_n: return "value_exceeds_n";
        case StopKind::functional_exceeds_n: return "functional_exceeds_n";
        case StopKind::horizon: return "horizon";
    }
    return "unknown";
}

struct StoppingRecord {
    StopKind kind = StopKind::horizon;
    double time = 0.0;
    /// Step index k with time = k h.
    std::size_t step = 0;
    double level = 0.0;
    /// Stopping levels were exhausted before T.
    bool exploded = false;
};

struct PathResult {
    SamplePath path;
    StoppingRecord stop;
    BrownianIncrements increments;
};

/// Noise tags keep independent random streams apart under one master seed.
namespace noise_tag {
inline constexpr std::uint32_t brownian = 0;
inline constexpr std::uint32_t auxiliary = 1;
}  // namespace noise_tag

inline BrownianIncrements generate_increments(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index,
                                              std::uint32_t tag = noise_tag::brownian) {
    BrownianIncrements inc;
    inc.dim = grid.dim();
    inc.step = grid.step();
    const std::size_t count = grid.n_steps() * static_cast<std::size_t>(grid.dim());
    inc.values.resize(count);
    const double scale = std::sqrt(grid.step());
    rng::GaussianStream stream(seed, tag, path_index);
    for (std::size_t j = 0; j < count; ++j) inc.values[j] = scale * stream.normal(j);
    return inc;
}

/// Sums consecutive blocks of `factor` increments: the same Brownian path
/// seen on a grid with step factor*h.
inline BrownianIncrements coarsen_increments(const BrownianIncrements& fine, std::size_t factor) {
    if (factor == 0 || fine.n_steps() % factor != 0)
        throw GridAlignmentError("coarsen_increments: factor must divide the number of steps");
    BrownianIncrements out;
    out.dim = fine.dim;
    out.step = fine.step * static_cast<double>(factor);
    const std::size_t d = static_cast<std::size_t>(fine.dim);
    const std::size_t n = fine.n_steps() / factor;
    out.values.assign(n * d, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < factor; ++j)
            for (std::size_t c = 0; c < d; ++c) out.values[k * d + c] += fine.values[(k * factor + j) * d + c];
    return out;
}

namespace detail {

struct StepTerms {
    bool with_functional = true;
    bool with_drift = true;
};

inline PathResult run_euler(const SimulationConfig& config, BrownianIncrements increments, StepTerms terms,
                            PathRole role) {
    const TimeGrid& g = config.grid;
    const CoefficientSet& co = config.coefficients;
    const auto d = static_cast<std::size_t>(g.dim());
    const std::size_t m = g.delay_steps();
    const std::size_t n = g.n_steps();
    const double h = g.step();
    if (increments.dim != g.dim() || increments.n_steps() != n)
        throw ConfigError("Euler scheme: increments do not match the grid");

    std::vector<double> values = path_storage_from(config.initial_segment);
    values.resize(g.total_points() * d);
    std::vector<double> v(d, 0.0), b(d, 0.0), sigma(d * d, 0.0), next(d);
    const bool use_v = terms.with_functional && !co.functional.is_zero;
    const bool use_b = terms.with_drift && !co.drift.is_zero;
    const double cutoff = config.drift_cutoff_level ? static_cast<double>(*config.drift_cutoff_level)
                                                    : std::numeric_limits<double>::infinity();

    StoppingRecord stop;
    stop.kind = StopKind::horizon;
    stop.step = n;
    stop.time = g.horizon();
    std::size_t k = 0;
    for (; k < n; ++k) {
        const double t = static_cast<double>(k) * h;
        const std::span<const double> x(values.data() + (m + k) * d, d);
        if (use_v) co.functional.eval(t, SegmentView(values.data() + k * d, m + 1, g.dim(), h), v);
        if (use_b) {
            if (t > cutoff || euclidean_norm(x) > cutoff)
                std::fill(b.begin(), b.end(), 0.0);
            else
                co.drift.eval(t, x, b);
        }
        co.diffusion.eval(t, x, sigma);
        const auto dw = increments.at(k);
        bool finite = true;
        for (std::size_t i = 0; i < d; ++i) {
            double noise = 0.0;
            for (std::size_t j = 0; j < d; ++j) noise += sigma[i * d + j] * dw[j];
            next[i] = x[i] + (v[i] + b[i]) * h + noise;
            finite = finite && std::isfinite(next[i]);
        }
        if (!finite) throw SimulationDiverged("Euler-Maruyama produced a non-finite state", k + 1);
        if (config.explosion_level && euclidean_norm(next) > *config.explosion_level) {
            stop.kind = StopKind::value_exceeds_n;
            stop.level = *config.explosion_level;
            stop.exploded = true;
            stop.step = k;
            stop.time = t;
            break;
        }
        std::copy(next.begin(), next.end(), values.begin() + static_cast<std::ptrdiff_t>((m + k + 1) * d));
    }
    // The stopped process is held constant after the last valid time.
    for (std::size_t j = k + 1; j <= n; ++j)
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>((m + k) * d), d,
                    values.begin() + static_cast<std::ptrdiff_t>((m + j) * d));
    return PathResult{SamplePath(g, role, std::move(values)), stop, std::move(increments)};
}

}  // namespace detail

/// Euler-Maruyama path driven by caller-supplied increments (coupling,
/// refinement studies).
inline PathResult simulate_path_with_increments(const SimulationConfig& config, BrownianIncrements increments) {
    return detail::run_euler(config, std::move(increments), {}, PathRole::solution);
}

/// X(t+h) = X(t) + [V(t, X_t) + b_n(t, X(t))] h + sigma(t, X(t)) dW, with the
/// noise a pure function of (master_seed, path_index).
inline PathResult simulate_path(const SimulationConfig& config, std::uint64_t path_index) {
    return simulate_path_with_increments(config, generate_increments(config.grid, config.master_seed, path_index));
}

/// dM = sigma(t, M) dW from the same initial segment and the same noise as
/// simulate_path(config, path_index).
inline PathResult simulate_driftless(const SimulationConfig& config, std::uint64_t path_index) {
    return detail::run_euler(config, generate_increments(config.grid, config.master_seed, path_index),
                             {.with_functional = false, .with_drift = false}, PathRole::driftless);
}

inline PathResult simulate_driftless_with_increments(const SimulationConfig& config, BrownianIncrements increments) {
    return detail::run_euler(config, std::move(increments), {.with_functional = false, .with_drift = false},
                             PathRole::driftless);
}

/// The driving Brownian motion as a path on [-r, T] (zero on the delay window).
inline SamplePath brownian_path(const TimeGrid& grid, const BrownianIncrements& inc) {
    const auto d = static_cast<std::size_t>(grid.dim());
    std::vector<double> values(grid.total_points() * d, 0.0);
    const std::size_t m = grid.delay_steps();
    for (std::size_t k = 0; k < inc.n_steps(); ++k)
        for (std::size_t c = 0; c < d; ++c) values[(m + k + 1) * d + c] = values[(m + k) * d + c] + inc.at(k)[c];
    return SamplePath(grid, PathRole::brownian, std::move(values));
}

}  // namespace sdde
