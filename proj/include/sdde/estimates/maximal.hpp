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
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/rng/normal.hpp"

namespace sdde {

/// Piecewise-constant function on n^d cells covering [-L, L]^d, zero outside.
/// values[i + n j] belongs to the cell centred at (c_i, c_j), c_i = -L + (i + 1/2) h.
struct GridFunction {
    int d = 1;
    double halfwidth = 1.0;
    int n = 1;
    std::vector<double> values;

    double cell() const noexcept { return 2.0 * halfwidth / n; }
    double centre(int i) const noexcept { return -halfwidth + (i + 0.5) * cell(); }
    std::size_t size() const noexcept { return values.size(); }
};

inline GridFunction sample_grid_function(int d, double halfwidth, int n,
                                         const std::function<double(std::span<const double>)>& fn) {
    if (d < 1 || d > 2) throw DomainError("GridFunction: d must be 1 or 2");
    if (n < 1 || !(halfwidth > 0.0)) throw DomainError("GridFunction: need n >= 1 and L > 0");
    GridFunction g{d, halfwidth, n, {}};
    const std::size_t total = d == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    g.values.resize(total);
    double x[2] = {0, 0};
    for (std::size_t k = 0; k < total; ++k) {
        x[0] = g.centre(static_cast<int>(k % static_cast<std::size_t>(n)));
        if (d == 2) x[1] = g.centre(static_cast<int>(k / static_cast<std::size_t>(n)));
        g.values[k] = fn(std::span<const double>(x, static_cast<std::size_t>(d)));
    }
    return g;
}

struct RadiiLadder {
    std::vector<double> radii;
};

/// h, h r, h r^2, ... up to the domain width.
inline RadiiLadder geometric_radii(double h, double width, double ratio = std::numbers::sqrt2) {
    RadiiLadder l;
    for (double r = h; r <= width * (1 + 1e-12); r *= ratio) l.radii.push_back(r);
    return l;
}

/// Every multiple of `spacing` up to the domain width.
inline RadiiLadder dense_radii(double spacing, double width) {
    RadiiLadder l;
    const auto count = static_cast<std::size_t>(std::floor(width / spacing + 1e-9));
    for (std::size_t k = 1; k <= count; ++k) l.radii.push_back(static_cast<double>(k) * spacing);
    return l;
}

namespace detail {

inline void check_maximal_inputs(const GridFunction& phi, const RadiiLadder& ladder) {
    if (ladder.radii.empty()) throw ConfigError("maximal_function: empty radii ladder");
    for (double v : phi.values)
        if (v < 0.0) throw DomainError("maximal_function: phi must be nonnegative");
}

// F(y) = integral of phi over (-inf, y].
class Primitive1d {
public:
    explicit Primitive1d(const GridFunction& phi) : phi_(phi), cum_(phi.values.size() + 1, 0.0) {
        for (std::size_t i = 0; i < phi.values.size(); ++i) cum_[i + 1] = cum_[i] + phi.values[i] * phi.cell();
    }
    double operator()(double y) const noexcept {
        const double s = (y + phi_.halfwidth) / phi_.cell();
        if (s <= 0.0) return 0.0;
        if (s >= phi_.n) return cum_.back();
        const auto i = static_cast<std::size_t>(s);
        return cum_[i] + (s - static_cast<double>(i)) * phi_.values[i] * phi_.cell();
    }

private:
    const GridFunction& phi_;
    std::vector<double> cum_;
};

}  // namespace detail

/// max over the ladder of (1/2r) int_{x-r}^{x+r} phi, integrated exactly.
inline double maximal_at(const GridFunction& phi, double x, const RadiiLadder& ladder) {
    if (phi.d != 1) throw DomainError("maximal_at: point evaluation is one-dimensional");
    detail::check_maximal_inputs(phi, ladder);
    const detail::Primitive1d F(phi);
    double best = 0.0;
    for (double r : ladder.radii) best = std::max(best, (F(x + r) - F(x - r)) / (2.0 * r));
    return best;
}

/// Discrete centred maximal function at every cell centre. d = 1 integrates
/// exactly; d = 2 averages over the cells whose centres lie in the disc
/// (cells outside the grid count as zeros).
inline GridFunction maximal_function(const GridFunction& phi, const RadiiLadder& ladder) {
    detail::check_maximal_inputs(phi, ladder);
    GridFunction out{phi.d, phi.halfwidth, phi.n, std::vector<double>(phi.values.size(), 0.0)};
    const int n = phi.n;
    const double h = phi.cell();
    if (phi.d == 1) {
        const detail::Primitive1d F(phi);
        for (int i = 0; i < n; ++i) {
            const double x = phi.centre(i);
            double best = 0.0;
            for (double r : ladder.radii) best = std::max(best, (F(x + r) - F(x - r)) / (2.0 * r));
            out.values[static_cast<std::size_t>(i)] = best;
        }
        return out;
    }
    const auto nu = static_cast<std::size_t>(n);
    std::vector<double> rows(nu * (nu + 1), 0.0);
    for (std::size_t j = 0; j < nu; ++j)
        for (std::size_t i = 0; i < nu; ++i) rows[j * (nu + 1) + i + 1] = rows[j * (nu + 1) + i] + phi.values[i + nu * j];
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double best = 0.0;
            for (double r : ladder.radii) {
                const int reach = static_cast<int>(std::floor(r / h + 1e-9));
                double sum = 0.0, count = 0.0;
                for (int dj = -reach; dj <= reach; ++dj) {
                    const double dy = dj * h;
                    const int w = static_cast<int>(std::floor(std::sqrt(std::max(0.0, r * r - dy * dy)) / h + 1e-9));
                    count += 2.0 * w + 1.0;
                    const int jj = j + dj;
                    if (jj < 0 || jj >= n) continue;
                    const int lo = std::max(0, i - w), hi = std::min(n - 1, i + w);
                    if (lo > hi) continue;
                    const std::size_t base = static_cast<std::size_t>(jj) * (nu + 1);
                    sum += rows[base + static_cast<std::size_t>(hi) + 1] - rows[base + static_cast<std::size_t>(lo)];
                }
                best = std::max(best, sum / count);
            }
            out.values[static_cast<std::size_t>(i) + nu * static_cast<std::size_t>(j)] = best;
        }
    return out;
}

/// Smooth test function with the norm of its gradient.
struct SmoothFunction {
    std::string id;
    int d = 1;
    std::function<double(std::span<const double>)> value;
    std::function<double(std::span<const double>)> grad_norm;
};

inline SmoothFunction constant_function(int d, double c) {
    return {"constant", d, [c](std::span<const double>) { return c; }, [](std::span<const double>) { return 0.0; }};
}

/// exp(-|x|^2 / 2).
inline SmoothFunction gaussian_bump(int d) {
    auto r2 = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    return {"gaussian_bump", d, [r2](std::span<const double> x) { return std::exp(-0.5 * r2(x)); },
            [r2](std::span<const double> x) { return std::sqrt(r2(x)) * std::exp(-0.5 * r2(x)); }};
}

/// phi(x) = x on [-1, 1]; beyond, phi' decays like a Gaussian of width s.
inline SmoothFunction smooth_ramp(double s = 0.25) {
    return {"smooth_ramp", 1,
            [s](std::span<const double> x) {
                const double a = std::abs(x[0]);
                if (a <= 1.0) return x[0];
                const double tail = 1.0 + s * std::sqrt(std::numbers::pi / 2.0) * std::erf((a - 1.0) / (s * std::numbers::sqrt2));
                return x[0] < 0.0 ? -tail : tail;
            },
            [s](std::span<const double> x) {
                const double a = std::abs(x[0]);
                return a <= 1.0 ? 1.0 : std::exp(-(a - 1.0) * (a - 1.0) / (2.0 * s * s));
            }};
}

struct HardyLittlewoodSpec {
    double halfwidth = 4.0;
    int n = 800;
    /// Pairs are drawn among cell centres in [-sample_halfwidth, sample_halfwidth]^d.
    double sample_halfwidth = 1.0;
    std::size_t pairs = 10000;
    std::uint64_t seed = 0;
    /// true: every multiple of h/2 (1-D) or h (2-D); false: geometric sqrt(2).
    bool dense = true;
    std::vector<double> lp_exponents{2.0, 4.0};
};

struct HardyLittlewoodReport {
    std::string id;
    /// Smallest C with |phi(x) - phi(y)| <= C |x - y| (M|grad phi|(x) + M|grad phi|(y)) on the pairs.
    double fitted_constant = 0.0;
    std::size_t pairs = 0;
    /// ||M phi||_p / ||phi||_p on the grid, per exponent.
    std::vector<std::pair<double, double>> lp_ratios;
};

inline HardyLittlewoodReport hardy_littlewood_check(const SmoothFunction& phi, const HardyLittlewoodSpec& spec) {
    const int d = phi.d;
    const GridFunction g = sample_grid_function(d, spec.halfwidth, spec.n, phi.grad_norm);
    const double h = g.cell();
    const RadiiLadder ladder = spec.dense ? dense_radii(d == 1 ? h / 2 : h, 2.0 * spec.halfwidth)
                                          : geometric_radii(h, 2.0 * spec.halfwidth);
    const GridFunction mg = maximal_function(g, ladder);
    HardyLittlewoodReport rep;
    rep.id = phi.id;
    rep.pairs = spec.pairs;
    // admissible index range for the sample box
    const int lo = std::clamp(static_cast<int>(std::ceil((spec.halfwidth - spec.sample_halfwidth) / h - 0.5)), 0, spec.n - 1);
    const int hi = std::clamp(static_cast<int>(std::floor((spec.halfwidth + spec.sample_halfwidth) / h - 0.5)), lo, spec.n - 1);
    const auto span_cells = static_cast<std::size_t>(hi - lo + 1);
    const rng::GaussianStream stream(spec.seed, 11, 0);
    auto pick = [&](std::uint64_t j) {
        return lo + static_cast<int>(std::min<std::size_t>(span_cells - 1,
                                                            static_cast<std::size_t>(stream.uniform(j) * static_cast<double>(span_cells))));
    };
    const auto nu = static_cast<std::size_t>(spec.n);
    for (std::size_t s = 0; s < spec.pairs; ++s) {
        int xi[2] = {pick(4 * s), d == 2 ? pick(4 * s + 1) : 0};
        int yi[2] = {pick(4 * s + 2), d == 2 ? pick(4 * s + 3) : 0};
        if (xi[0] == yi[0] && xi[1] == yi[1]) yi[0] = yi[0] == hi ? hi - 1 : yi[0] + 1;
        double x[2] = {g.centre(xi[0]), g.centre(xi[1])};
        double y[2] = {g.centre(yi[0]), g.centre(yi[1])};
        const std::span<const double> xs(x, static_cast<std::size_t>(d)), ys(y, static_cast<std::size_t>(d));
        const double dist = d == 1 ? std::abs(x[0] - y[0]) : std::hypot(x[0] - y[0], x[1] - y[1]);
        const double lhs = std::abs(phi.value(xs) - phi.value(ys));
        const double m = mg.values[static_cast<std::size_t>(xi[0]) + nu * static_cast<std::size_t>(xi[1])] +
                         mg.values[static_cast<std::size_t>(yi[0]) + nu * static_cast<std::size_t>(yi[1])];
        if (lhs == 0.0) continue;
        rep.fitted_constant = std::max(rep.fitted_constant, m > 0.0 ? lhs / (dist * m) : std::numeric_limits<double>::infinity());
    }
    // L^p boundedness of M on |phi|
    const GridFunction a = sample_grid_function(d, spec.halfwidth, spec.n,
                                                [&](std::span<const double> x) { return std::abs(phi.value(x)); });
    const GridFunction ma = maximal_function(a, ladder);
    for (double p : spec.lp_exponents) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < a.values.size(); ++k) {
            num += std::pow(ma.values[k], p);
            den += std::pow(a.values[k], p);
        }
        rep.lp_ratios.emplace_back(p, den > 0.0 ? std::pow(num / den, 1.0 / p) : 0.0);
    }
    return rep;
}

}  // namespace sdde
