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
#include <limits>
#include <span>

#include "sdde/core/errors.hpp"
#include "sdde/core/path.hpp"

namespace sdde {

inline double euclidean_norm(std::span<const double> v) noexcept {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double sup_norm(const SegmentView& segment) noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < segment.size(); ++i) best = std::max(best, euclidean_norm(segment.point(i)));
    return best;
}

inline double sup_norm(const PathSegment& segment) noexcept { return sup_norm(segment.view()); }

/// sup-norm distance of two segments sampled on the same window.
inline double sup_distance(const SegmentView& a, const SegmentView& b) noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, euclidean_distance(a.point(i), b.point(i)));
    return best;
}

/// Largest Euclidean norm over every sample of the path.
inline double path_sup_norm(const SamplePath& path) noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) best = std::max(best, euclidean_norm(path.point(i)));
    return best;
}

namespace detail {

// Max over index pairs i<j in [first, last] of |x_j - x_i| / ((j-i) h)^alpha.
template <class PointAt>
double holder_over_indices(PointAt&& point_at, int dim, std::size_t first, std::size_t last, double step,
                           double alpha) {
    double best = 0.0;
    for (std::size_t lag = 1; lag <= last - first; ++lag) {
        double widest = 0.0;
        for (std::size_t i = first; i + lag <= last; ++i) {
            auto a = point_at(i);
            auto b = point_at(i + lag);
            double s = 0.0;
            for (int c = 0; c < dim; ++c) s += (b[c] - a[c]) * (b[c] - a[c]);
            widest = std::max(widest, s);
        }
        best = std::max(best, std::sqrt(widest) / std::pow(static_cast<double>(lag) * step, alpha));
    }
    return best;
}

}  // namespace detail

/// Discrete alpha-Hölder seminorm of the path on the grid window [t1, t2].
inline double holder_seminorm(const SamplePath& path, double alpha, double t1, double t2) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("holder_seminorm: alpha must lie in (0,1)");
    const std::size_t i1 = path.grid().index_of(t1);
    const std::size_t i2 = path.grid().index_of(t2);
    if (i1 >= i2) throw RangeError("holder_seminorm: empty window");
    return detail::holder_over_indices([&](std::size_t i) { return path.point(i); }, path.dim(), i1, i2,
                                       path.grid().step(), alpha);
}

/// Hölder seminorm of a whole segment over [-r, 0].
inline double holder_seminorm(const SegmentView& segment, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("holder_seminorm: alpha must lie in (0,1)");
    if (segment.size() < 2) throw RangeError("holder_seminorm: empty window");
    return detail::holder_over_indices([&](std::size_t i) { return segment.point(i); }, segment.dim(), 0,
                                       segment.size() - 1, segment.step(), alpha);
}

/// Level-n set {x : ||x||_inf + [x]_{holder} <= n} of the localization argument.
struct CompactSetSpec {
    int n = 1;
    double sup_bound = std::numeric_limits<double>::infinity();
    double holder_bound = std::numeric_limits<double>::infinity();
    double holder_exponent = 0.25;
};

inline bool compact_membership(const SegmentView& segment, const CompactSetSpec& spec) {
    const double sup = sup_norm(segment);
    const double holder = holder_seminorm(segment, spec.holder_exponent);
    return sup <= spec.sup_bound && holder <= spec.holder_bound &&
           sup + holder <= static_cast<double>(spec.n);
}

inline bool compact_membership(const PathSegment& segment, const CompactSetSpec& spec) {
    return compact_membership(segment.view(), spec);
}

}  // namespace sdde
