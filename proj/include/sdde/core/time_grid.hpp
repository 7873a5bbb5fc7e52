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
#include <string>

#include "sdde/core/errors.hpp"

namespace sdde {

/// Uniform grid on [-r, T] with the delay and the horizon both integer
/// multiples of the step.
class TimeGrid {
public:
    static TimeGrid make(int dim, double delay, double horizon, double step) {
        if (dim < 1) throw DomainError("TimeGrid: dimension must be positive");
        if (!(step > 0.0) || !(delay > 0.0) || !(horizon > 0.0))
            throw DomainError("TimeGrid: h, r and T must be positive");
        TimeGrid g;
        g.dim_ = dim;
        g.step_ = step;
        g.m_ = aligned_count(delay, step, "r");
        g.n_ = aligned_count(horizon, step, "T");
        g.delay_ = delay;
        g.horizon_ = horizon;
        return g;
    }

    int dim() const noexcept { return dim_; }
    double delay() const noexcept { return delay_; }
    double horizon() const noexcept { return horizon_; }
    double step() const noexcept { return step_; }
    std::size_t delay_steps() const noexcept { return m_; }
    std::size_t n_steps() const noexcept { return n_; }
    std::size_t total_points() const noexcept { return m_ + n_ + 1; }
    std::size_t segment_points() const noexcept { return m_ + 1; }

    /// Absolute index 0 is time -r; index m is time 0.
    double time_at(std::size_t index) const noexcept {
        return (static_cast<double>(index) - static_cast<double>(m_)) * step_;
    }

    /// Absolute index of grid time t in [-r, T].
    std::size_t index_of(double t) const {
        const double k = t / step_;
        const double kr = std::round(k);
        if (std::abs(k - kr) > 1e-9 * std::max(1.0, std::abs(k)))
            throw GridAlignmentError("time " + std::to_string(t) + " is not a grid point");
        const auto rel = static_cast<long long>(kr);
        if (rel < -static_cast<long long>(m_) || rel > static_cast<long long>(n_))
            throw RangeError("time " + std::to_string(t) + " outside [-r, T]");
        return static_cast<std::size_t>(rel + static_cast<long long>(m_));
    }

    /// Same delay and horizon on a grid refined (or coarsened) to the given step.
    TimeGrid with_step(double step) const { return make(dim_, delay_, horizon_, step); }

    bool operator==(const TimeGrid& o) const noexcept {
        return dim_ == o.dim_ && m_ == o.m_ && n_ == o.n_ && step_ == o.step_;
    }

private:
    static std::size_t aligned_count(double length, double step, const char* name) {
        const double k = length / step;
        const double kr = std::round(k);
        if (kr < 1.0 || std::abs(k - kr) > 1e-9 * std::max(1.0, k))
            throw GridAlignmentError(std::string(name) + " = " + std::to_string(length) +
                                     " is not an integer multiple of h = " + std::to_string(step));
        return static_cast<std::size_t>(kr);
    }

    int dim_ = 1;
    double delay_ = 1.0;
    double horizon_ = 1.0;
    double step_ = 1.0;
    std::size_t m_ = 1;
    std::size_t n_ = 1;
};

}  // namespace sdde
