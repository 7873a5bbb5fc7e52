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
#include <span>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/rng/normal.hpp"

namespace sdde {

/// Two-sided coverage of +-3 standard errors.
inline constexpr double kThreeSigmaLevel = 0.99730020393673979;

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            compensation_ += (sum_ - t) + x;
        else
            compensation_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    double confidence_radius = 0.0;
    double confidence_level = kThreeSigmaLevel;

    double upper() const noexcept { return mean + confidence_radius; }
    double lower() const noexcept { return mean - confidence_radius; }
};

/// z with P(|N(0,1)| <= z) = level.
inline double z_for_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
    return rng::normal_quantile(0.5 + 0.5 * level);
}

/// Sample mean and standard error. Samples are reduced in index order with
/// compensated summation, so the result does not depend on how they were
/// produced.
inline McEstimate estimate_mean(std::span<const double> samples, double level = kThreeSigmaLevel) {
    if (samples.empty()) throw DomainError("estimate_mean: no samples");
    CompensatedSum s;
    for (double x : samples) s.add(x);
    const double n = static_cast<double>(samples.size());
    const double mean = s.value() / n;
    CompensatedSum ss;
    for (double x : samples) ss.add((x - mean) * (x - mean));
    const double var = samples.size() > 1 ? ss.value() / (n - 1.0) : 0.0;
    McEstimate e;
    e.mean = mean;
    e.std_error = std::sqrt(var / n);
    e.n_samples = samples.size();
    e.confidence_level = level;
    e.confidence_radius = z_for_level(level) * e.std_error;
    return e;
}

/// Deterministic value reported in McEstimate form.
inline McEstimate exact_estimate(double value, std::size_t n = 1) {
    McEstimate e;
    e.mean = value;
    e.n_samples = n;
    return e;
}

/// |a - b| <= k * sqrt(se_a^2 + se_b^2).
inline bool agree_within(const McEstimate& a, const McEstimate& b, double k = 3.0) noexcept {
    return std::abs(a.mean - b.mean) <= k * std::hypot(a.std_error, b.std_error);
}

/// Every pair of estimates agrees within k combined standard errors and all
/// of them are finite. Used as the stability-in-N diagnostic.
inline bool mutually_consistent(std::span<const McEstimate> ladder, double k = 3.0) noexcept {
    for (const auto& e : ladder)
        if (!std::isfinite(e.mean) || !std::isfinite(e.std_error)) return false;
    for (std::size_t i = 0; i < ladder.size(); ++i)
        for (std::size_t j = i + 1; j < ladder.size(); ++j)
            if (!agree_within(ladder[i], ladder[j], k)) return false;
    return true;
}

/// Estimates on the nested prefixes N, 2N, 4N, ... of one sample vector.
inline std::vector<McEstimate> prefix_ladder(std::span<const double> samples, std::size_t base, int levels,
                                             double level = kThreeSigmaLevel) {
    std::vector<McEstimate> out;
    for (int i = 0; i < levels; ++i) {
        const std::size_t n = base << i;
        if (n > samples.size()) break;
        out.push_back(estimate_mean(samples.first(n), level));
    }
    return out;
}

}  // namespace sdde
