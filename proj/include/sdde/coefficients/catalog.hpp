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
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sdde/coefficients/specs.hpp"
#include "sdde/core/norms.hpp"

// Analytic coefficient catalog. Every entry is a pure function of its
// arguments and safe to evaluate concurrently.
namespace sdde::catalog {

// ---- drifts -------------------------------------------------------------

inline DriftSpec zero_drift(int d) {
    DriftSpec b;
    b.id = "zero";
    b.dim = d;
    b.eval = [](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
    b.cell_average = [](double, std::span<const double>, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    };
    b.p = 2.0 * d + 2.0;
    b.q = 2.0 * d + 2.0;
    b.lqp_norm_analytic = [](double) { return 0.0; };
    b.support_radius = 0.0;
    b.is_zero = true;
    return b;
}

/// b == c. Not in L^q_p(R^d); used for the PDE oracle and sanity checks.
inline DriftSpec constant_drift(std::vector<double> c) {
    DriftSpec b;
    b.id = "constant";
    b.dim = static_cast<int>(c.size());
    b.eval = [c](double, std::span<const double>, std::span<double> out) { std::copy(c.begin(), c.end(), out.begin()); };
    b.cell_average = [c](double, std::span<const double>, std::span<const double>, std::span<double> out) {
        std::copy(c.begin(), c.end(), out.begin());
    };
    b.claims_integrability = false;
    return b;
}

/// Ornstein-Uhlenbeck drift b(x) = -theta x.
inline DriftSpec ou_drift(int d, double theta) {
    DriftSpec b;
    b.id = "ou";
    b.dim = d;
    b.eval = [theta](double, std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -theta * x[i];
    };
    b.cell_average = [theta](double, std::span<const double> lo, std::span<const double> hi, std::span<double> out) {
        for (std::size_t i = 0; i < lo.size(); ++i) out[i] = -theta * 0.5 * (lo[i] + hi[i]);
    };
    b.claims_integrability = false;
    return b;
}

/// Indicator box b = 1_{[0,1]}(t) 1_{[0,1]^d}(x) e_1.
inline DriftSpec box_drift(int d) {
    DriftSpec b;
    b.id = "box";
    b.dim = d;
    b.eval = [](double t, std::span<const double> x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        if (t < 0.0 || t > 1.0) return;
        for (double xi : x)
            if (xi < 0.0 || xi > 1.0) return;
        out[0] = 1.0;
    };
    b.p = 4.0 * d;
    b.q = 4.0;
    b.lqp_norm_analytic = [q = b.q](double T) { return std::pow(std::min(T, 1.0), 1.0 / q); };
    b.support_radius = std::sqrt(static_cast<double>(d));
    b.support_time = 1.0;
    return b;
}

namespace detail {

// Integral of |x|^{-beta} over [a, b] intersected with [-R, R], d = 1.
inline double singular_integral_1d(double a, double b, double beta, double radius) {
    a = std::max(a, -radius);
    b = std::min(b, radius);
    if (a >= b) return 0.0;
    auto F = [beta](double x) {
        const double v = std::pow(std::abs(x), 1.0 - beta) / (1.0 - beta);
        return x < 0.0 ? -v : v;
    };
    return F(b) - F(a);
}

}  // namespace detail

/// b(x) = A |x|^{-beta} 1_{|x| <= R} e_1 with b(0) := 0. Unbounded at the
/// origin but in L^p for beta p < d.
inline DriftSpec singular_drift(int d, double beta, double amplitude, double p, double q, double radius = 1.0) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("singular_drift: beta must lie in (0,1)");
    if (!(beta * p < d)) throw DomainError("singular_drift: beta * p must be below d for |b| in L^p");
    if (d > 2) throw DomainError("singular_drift: catalog supports d <= 2");
    DriftSpec b;
    b.id = "singular";
    b.dim = d;
    b.p = p;
    b.q = q;
    b.singular = true;
    b.support_radius = radius;
    b.eval = [=](double, std::span<const double> x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const double r = euclidean_norm(x);
        if (r == 0.0 || r > radius) return;
        out[0] = amplitude * std::pow(r, -beta);
    };
    const double surface = d == 1 ? 2.0 : 2.0 * std::numbers::pi;
    const double space_norm =
        amplitude * std::pow(surface * std::pow(radius, d - beta * p) / (d - beta * p), 1.0 / p);
    b.lqp_norm_analytic = [space_norm, q](double T) { return space_norm * std::pow(T, 1.0 / q); };
    if (d == 1) {
        b.cell_average = [=](double, std::span<const double> lo, std::span<const double> hi, std::span<double> out) {
            out[0] = amplitude * detail::singular_integral_1d(lo[0], hi[0], beta, radius) / (hi[0] - lo[0]);
        };
    } else {
        // Tensor midpoint sub-sampling; the sub-nodes never hit the origin
        // for cells centered on grid nodes with an even sub-sample count.
        b.cell_average = [=](double, std::span<const double> lo, std::span<const double> hi, std::span<double> out) {
            constexpr int kSub = 8;
            double acc = 0.0;
            for (int i = 0; i < kSub; ++i)
                for (int j = 0; j < kSub; ++j) {
                    const double x = lo[0] + (i + 0.5) * (hi[0] - lo[0]) / kSub;
                    const double y = lo[1] + (j + 0.5) * (hi[1] - lo[1]) / kSub;
                    const double r = std::hypot(x, y);
                    if (r > 0.0 && r <= radius) acc += std::pow(r, -beta);
                }
            out[0] = amplitude * acc / (kSub * kSub);
            out[1] = 0.0;
        };
    }
    return b;
}

// ---- diffusions -----------------------------------------------------------

inline DiffusionSpec scalar_diffusion(int d, double c) {
    if (c == 0.0) throw DomainError("scalar_diffusion: c must be nonzero");
    DiffusionSpec s;
    s.id = c == 1.0 ? "identity" : "scalar";
    s.dim = d;
    s.kappa = std::max(c * c, 1.0 / (c * c));
    s.eval = [d, c](double, std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i * d + i)] = c;
    };
    return s;
}

inline DiffusionSpec identity_diffusion(int d) { return scalar_diffusion(d, 1.0); }

/// sigma == 0. Degenerate (kappa = inf); only for noiseless sanity runs.
inline DiffusionSpec zero_diffusion(int d) {
    DiffusionSpec s;
    s.id = "zero";
    s.dim = d;
    s.kappa = std::numeric_limits<double>::infinity();
    s.eval = [](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
    return s;
}

/// sigma = diag(values) with a declared kappa (not necessarily correct; the
/// ellipticity probe checks it).
inline DiffusionSpec diag_diffusion(std::vector<double> values, double kappa) {
    DiffusionSpec s;
    s.id = "diag";
    s.dim = static_cast<int>(values.size());
    s.kappa = kappa;
    s.eval = [values](double, std::span<const double>, std::span<double> out) {
        const std::size_t d = values.size();
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) out[i * d + i] = values[i];
    };
    return s;
}

/// d = 1: sigma(x) = 1 + min(|x|^{1/2}, 1). Uniformly continuous, not
/// Lipschitz at 0; sigma^2 in [1, 4].
inline DiffusionSpec sqrt_diffusion() {
    DiffusionSpec s;
    s.id = "sqrt";
    s.dim = 1;
    s.kappa = 4.0;
    s.space_independent = false;
    // |sigma'| ~ |x|^{-1/2} near 0 lies in L^p_loc only for p < 2.
    s.grad_integrable = false;
    s.eval = [](double, std::span<const double> x, std::span<double> out) {
        out[0] = 1.0 + std::min(std::sqrt(std::abs(x[0])), 1.0);
    };
    return s;
}

// ---- functional drifts ----------------------------------------------------

inline FunctionalDriftSpec zero_functional(int d) {
    FunctionalDriftSpec v;
    v.id = "zero";
    v.dim = d;
    v.eval = [](double, const SegmentView&, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
    v.growth_g = [](double) { return 0.0; };
    v.lipschitz_K = 0.0;
    v.is_zero = true;
    return v;
}

/// V(t, x) = c x(-r).
inline FunctionalDriftSpec discrete_delay(int d, double c) {
    FunctionalDriftSpec v;
    v.id = "discrete_delay";
    v.dim = d;
    v.eval = [c](double, const SegmentView& x, std::span<double> out) {
        auto front = x.front();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * front[i];
    };
    v.growth_g = [c](double u) { return std::abs(c) * u; };
    v.lipschitz_K = std::abs(c);
    return v;
}

/// V(t, x) = c tanh(x(-r)) componentwise: bounded, hence sublinear.
inline FunctionalDriftSpec tanh_delay(int d, double c) {
    FunctionalDriftSpec v;
    v.id = "tanh_delay";
    v.dim = d;
    v.eval = [c](double, const SegmentView& x, std::span<double> out) {
        auto front = x.front();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * std::tanh(front[i]);
    };
    v.growth_g = [c, d](double u) { return std::abs(c) * std::min(u, std::sqrt(static_cast<double>(d))); };
    v.lipschitz_K = std::abs(c);
    return v;
}

/// V(t, x) = c * integral of x over [-r, 0], trapezoid rule on the samples.
/// |V| <= |c| r ||x||_inf.
inline FunctionalDriftSpec distributed_delay(int d, double c, double r) {
    FunctionalDriftSpec v;
    v.id = "distributed_delay";
    v.dim = d;
    v.eval = [c](double, const SegmentView& x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const std::size_t n = x.size();
        for (std::size_t k = 0; k < n; ++k) {
            const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
            auto p = x.point(k);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * p[i];
        }
        for (double& o : out) o *= c * x.step();
    };
    v.growth_g = [c, r](double u) { return std::abs(c) * r * u; };
    v.lipschitz_K = std::abs(c) * r;
    return v;
}

/// V(t, x) = ||x||_inf^2 e_1, declared with the (false) bound g(u) = u.
/// Exists to exercise the sublinearity probe's failure path.
inline FunctionalDriftSpec quadratic_functional(int d) {
    FunctionalDriftSpec v;
    v.id = "quadratic";
    v.dim = d;
    v.eval = [](double, const SegmentView& x, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const double s = sup_norm(x);
        out[0] = s * s;
    };
    v.growth_g = [](double u) { return u; };
    return v;
}

inline CoefficientSet make_set(DriftSpec b, DiffusionSpec sigma, FunctionalDriftSpec v) {
    CoefficientSet set;
    set.d = b.dim;
    set.drift = std::move(b);
    set.diffusion = std::move(sigma);
    set.functional = std::move(v);
    set.validate();
    return set;
}

/// V = b = 0, sigma = I.
inline CoefficientSet brownian(int d) { return make_set(zero_drift(d), identity_diffusion(d), zero_functional(d)); }

}  // namespace sdde::catalog
