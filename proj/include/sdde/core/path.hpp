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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/core/time_grid.hpp"

namespace sdde {

/// Non-owning window of m+1 consecutive samples, read as a function on [-r, 0].
class SegmentView {
public:
    SegmentView(const double* data, std::size_t points, int dim, double step)
        : data_(data), points_(points), dim_(dim), step_(step) {}

    std::size_t size() const noexcept { return points_; }
    int dim() const noexcept { return dim_; }
    double step() const noexcept { return step_; }
    double delay() const noexcept { return static_cast<double>(points_ - 1) * step_; }

    /// Sample i sits at s = -r + i*h.
    std::span<const double> point(std::size_t i) const noexcept {
        return {data_ + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    std::span<const double> front() const noexcept { return point(0); }
    std::span<const double> back() const noexcept { return point(points_ - 1); }
    double s_at(std::size_t i) const noexcept {
        return (static_cast<double>(i) - static_cast<double>(points_ - 1)) * step_;
    }

private:
    const double* data_;
    std::size_t points_;
    int dim_;
    double step_;
};

/// An element of C([-r,0], R^d) sampled on the delay window of a grid.
class PathSegment {
public:
    PathSegment(TimeGrid grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        const std::size_t expected = grid_.segment_points() * static_cast<std::size_t>(grid_.dim());
        if (values_.size() != expected)
            throw DomainError("PathSegment: expected " + std::to_string(expected) + " values, got " +
                              std::to_string(values_.size()));
        for (double v : values_)
            if (!std::isfinite(v)) throw DomainError("PathSegment: non-finite entry");
    }

    static PathSegment constant(const TimeGrid& grid, std::span<const double> value) {
        if (value.size() != static_cast<std::size_t>(grid.dim()))
            throw DomainError("PathSegment::constant: dimension mismatch");
        std::vector<double> v;
        v.reserve(grid.segment_points() * value.size());
        for (std::size_t i = 0; i < grid.segment_points(); ++i) v.insert(v.end(), value.begin(), value.end());
        return PathSegment(grid, std::move(v));
    }

    static PathSegment constant(const TimeGrid& grid, double value) {
        return constant(grid, std::vector<double>(static_cast<std::size_t>(grid.dim()), value));
    }

    /// Samples f(s, out) at s = -r, -r+h, ..., 0.
    static PathSegment from_function(const TimeGrid& grid,
                                     const std::function<void(double, std::span<double>)>& f) {
        const auto d = static_cast<std::size_t>(grid.dim());
        std::vector<double> v(grid.segment_points() * d);
        for (std::size_t i = 0; i < grid.segment_points(); ++i)
            f(grid.time_at(i), std::span<double>(v.data() + i * d, d));
        return PathSegment(grid, std::move(v));
    }

    const TimeGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.segment_points(); }
    std::span<const double> point(std::size_t i) const noexcept { return view().point(i); }
    const std::vector<double>& values() const noexcept { return values_; }
    SegmentView view() const noexcept {
        return SegmentView(values_.data(), grid_.segment_points(), grid_.dim(), grid_.step());
    }

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

enum class PathRole { solution, driftless, transformed, difference, brownian };

inline const char* to_string(PathRole role) {
    switch (role) {
        case PathRole::solution: return "solution";
        case PathRole::driftless: return "driftless";
        case PathRole::transformed: return "transformed";
        case PathRole::difference: return "difference";
        case PathRole::brownian: return "brownian";
    }
    return "unknown";
}

/// Full trajectory on [-r, T]: absolute index 0 is -r, index m is time 0.
class SamplePath {
public:
    SamplePath(TimeGrid grid, PathRole role, std::vector<double> values)
        : grid_(grid), role_(role), values_(std::move(values)) {
        const std::size_t expected = grid_.total_points() * static_cast<std::size_t>(grid_.dim());
        if (values_.size() != expected)
            throw DomainError("SamplePath: expected " + std::to_string(expected) + " values, got " +
                              std::to_string(values_.size()));
    }

    const TimeGrid& grid() const noexcept { return grid_; }
    PathRole role() const noexcept { return role_; }
    int dim() const noexcept { return grid_.dim(); }
    std::size_t size() const noexcept { return grid_.total_points(); }
    double time(std::size_t index) const noexcept { return grid_.time_at(index); }
    const std::vector<double>& values() const noexcept { return values_; }

    std::span<const double> point(std::size_t index) const noexcept {
        const auto d = static_cast<std::size_t>(grid_.dim());
        return {values_.data() + index * d, d};
    }

    /// Value at step k of [0, T] (absolute index m + k).
    std::span<const double> at_step(std::size_t k) const noexcept {
        return point(grid_.delay_steps() + k);
    }

    /// Segment X_t for t = k*h, as a view into this path.
    SegmentView segment_at_step(std::size_t k) const noexcept {
        return SegmentView(values_.data() + k * static_cast<std::size_t>(grid_.dim()),
                           grid_.segment_points(), grid_.dim(), grid_.step());
    }

private:
    TimeGrid grid_;
    PathRole role_;
    std::vector<double> values_;
};

/// The window of `path` on [t-r, t], reindexed to [-r, 0].
inline PathSegment segment_extract(const SamplePath& path, double t) {
    const TimeGrid& g = path.grid();
    const std::size_t index = g.index_of(t);
    if (index < g.delay_steps())
        throw RangeError("segment_extract: t = " + std::to_string(t) + " < 0");
    const auto d = static_cast<std::size_t>(g.dim());
    const std::size_t first = (index - g.delay_steps()) * d;
    std::vector<double> v(path.values().begin() + static_cast<std::ptrdiff_t>(first),
                          path.values().begin() + static_cast<std::ptrdiff_t>(first + g.segment_points() * d));
    return PathSegment(g, std::move(v));
}

/// Builds a path whose delay window is `initial` and whose [0, T] part is
/// filled by the caller through `values` (n_steps+1 points, the first equal to
/// the last initial sample).
inline std::vector<double> path_storage_from(const PathSegment& initial) {
    const TimeGrid& g = initial.grid();
    std::vector<double> v;
    v.reserve(g.total_points() * static_cast<std::size_t>(g.dim()));
    v.insert(v.end(), initial.values().begin(), initial.values().end());
    return v;
}

}  // namespace sdde
