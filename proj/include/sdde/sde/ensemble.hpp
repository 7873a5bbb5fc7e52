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
#include <cstdint>
#include <utility>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/core/parallel.hpp"
#include "sdde/sde/engine.hpp"

namespace sdde {

enum class EnsembleMode { drifted, driftless };

/// Lazy ensemble: path i is regenerated from (config, master_seed, i) on
/// demand, so large ensembles never need to be held in memory.
class Ensemble {
public:
    Ensemble(SimulationConfig config, std::size_t n_paths, unsigned threads,
             EnsembleMode mode = EnsembleMode::drifted)
        : config_(std::move(config)), n_paths_(n_paths), threads_(threads == 0 ? default_thread_count() : threads),
          mode_(mode) {
        if (n_paths_ == 0) throw ConfigError("Ensemble: n_paths must be at least 1");
        config_.validate();
    }

    std::size_t size() const noexcept { return n_paths_; }
    unsigned threads() const noexcept { return threads_; }
    EnsembleMode mode() const noexcept { return mode_; }
    const SimulationConfig& config() const noexcept { return config_; }

    PathResult path(std::size_t i) const {
        return mode_ == EnsembleMode::drifted ? simulate_path(config_, i) : simulate_driftless(config_, i);
    }

    /// out[i] = fn(path(i), i), computed in parallel, stored by index.
    template <class T, class Fn>
    std::vector<T> map(Fn&& fn) const {
        return parallel_map<T>(n_paths_, threads_, [&](std::size_t i) { return fn(path(i), i); });
    }

    /// Same config with the other dynamics (drifted <-> driftless), same noise.
    Ensemble with_mode(EnsembleMode mode) const { return Ensemble(config_, n_paths_, threads_, mode); }
    Ensemble with_size(std::size_t n) const { return Ensemble(config_, n, threads_, mode_); }

private:
    SimulationConfig config_;
    std::size_t n_paths_;
    unsigned threads_;
    EnsembleMode mode_;
};

inline Ensemble simulate_batch(const SimulationConfig& config, std::size_t n_paths, unsigned threads = 0) {
    return Ensemble(config, n_paths, threads, EnsembleMode::drifted);
}

}  // namespace sdde
