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

#include <cstddef>
#include <vector>

#include "sdde/coefficients/specs.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/core/path.hpp"
#include "sdde/sde/engine.hpp"

namespace sdde {

/// First grid time t >= 0 at which the segment X_t leaves the level-n set.
inline StoppingRecord detect_stopping(const SamplePath& path, const CompactSetSpec& spec) {
    const TimeGrid& g = path.grid();
    for (std::size_t k = 0; k <= g.n_steps(); ++k) {
        if (!compact_membership(path.segment_at_step(k), spec))
            return StoppingRecord{StopKind::exit_compact_set, static_cast<double>(k) * g.step(), k,
                                  static_cast<double>(spec.n), false};
    }
    return StoppingRecord{StopKind::horizon, g.horizon(), g.n_steps(), static_cast<double>(spec.n), false};
}

/// First grid time t >= 0 with |X(t)| > n or |V(t, X_t)| > n.
inline StoppingRecord detect_stopping(const SamplePath& path, const CoefficientSet& coeffs, double level) {
    const TimeGrid& g = path.grid();
    std::vector<double> v(static_cast<std::size_t>(g.dim()));
    for (std::size_t k = 0; k <= g.n_steps(); ++k) {
        const double t = static_cast<double>(k) * g.step();
        if (euclidean_norm(path.at_step(k)) > level)
            return StoppingRecord{StopKind::value_exceeds_n, t, k, level, false};
        if (!coeffs.functional.is_zero) {
            coeffs.functional.eval(t, path.segment_at_step(k), v);
            if (euclidean_norm(v) > level) return StoppingRecord{StopKind::functional_exceeds_n, t, k, level, false};
        }
    }
    return StoppingRecord{StopKind::horizon, g.horizon(), g.n_steps(), level, false};
}

/// Runs detect_stopping for each level of an increasing ladder; a path that
/// stops before T at every level is flagged as exploded.
inline std::vector<StoppingRecord> stopping_ladder(const SamplePath& path, const CoefficientSet& coeffs,
                                                   const std::vector<double>& levels) {
    std::vector<StoppingRecord> out;
    for (double lv : levels) out.push_back(detect_stopping(path, coeffs, lv));
    if (!out.empty() && out.back().kind != StopKind::horizon)
        for (auto& r : out) r.exploded = true;
    return out;
}

}  // namespace sdde
