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
#include <functional>
#include <span>
#include <vector>

#include "sdde/coefficients/specs.hpp"
#include "sdde/core/errors.hpp"
#include "sdde/core/norms.hpp"

namespace sdde {

/// Level-n localization data: the radial profile rho^n and the map
/// phi^n : R^d -> B_{n+1}, identity on B_n.
struct LocalizationSpec {
    int n = 1;
    double p_next = 2.0;
    double alpha_n = 0.5;
    std::function<double(double)> rho;

    /// phi^n(x) written into out.
    void phi(std::span<const double> x, std::span<double> out) const {
        const double r = euclidean_norm(x);
        const double nn = static_cast<double>(n);
        if (r <= nn) {
            std::copy(x.begin(), x.end(), out.begin());
            return;
        }
        const double scale = rho(r) / r;
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
    }
};

/// rho^n(t) = n + 1 - (t/alpha_n - n/alpha_n + 1)^{-alpha_n} for t > n, with
/// alpha_n = (p_{n+1} - d) / 2. C^1 at t = n, increasing to n + 1.
inline LocalizationSpec make_localization(int n, double p_next, int d) {
    if (n < 1) throw DomainError("make_localization: level must be positive");
    if (!(p_next > d)) throw DomainError("make_localization: p_{n+1} must exceed d");
    LocalizationSpec loc;
    loc.n = n;
    loc.p_next = p_next;
    loc.alpha_n = (p_next - d) / 2.0;
    const double a = loc.alpha_n;
    const double nn = static_cast<double>(n);
    loc.rho = [a, nn](double t) {
        if (t <= nn) return t;
        return nn + 1.0 - std::pow(t / a - nn / a + 1.0, -a);
    };
    return loc;
}

/// (b^n, sigma^n, V^n): b^n = 1_{t <= n, |x| <= n} b, sigma^n = sigma o phi^n,
/// V^n = (-n) v V ^ n coordinatewise.
inline CoefficientSet truncate_coefficients(const CoefficientSet& coeffs, const LocalizationSpec& loc) {
    CoefficientSet out = coeffs;
    const double nn = static_cast<double>(loc.n);
    const auto b = coeffs.drift.eval;
    out.drift.id = coeffs.drift.id + "^n";
    out.drift.eval = [b, nn](double t, std::span<const double> x, std::span<double> o) {
        if (t > nn || euclidean_norm(x) > nn) {
            std::fill(o.begin(), o.end(), 0.0);
            return;
        }
        b(t, x, o);
    };
    if (coeffs.drift.cell_average) {
        // Cell averages of b^n are only exact for cells inside B_n.
        out.drift.cell_average = nullptr;
    }
    out.drift.support_radius = std::min(coeffs.drift.support_radius, nn);
    out.drift.support_time = std::min(coeffs.drift.support_time, nn);

    const auto sigma = coeffs.diffusion.eval;
    out.diffusion.id = coeffs.diffusion.id + "^n";
    out.diffusion.eval = [sigma, loc](double t, std::span<const double> x, std::span<double> o) {
        std::vector<double> y(x.size());
        loc.phi(x, y);
        sigma(t, y, o);
    };

    const auto v = coeffs.functional.eval;
    out.functional.id = coeffs.functional.id + "^n";
    out.functional.eval = [v, nn](double t, const SegmentView& x, std::span<double> o) {
        v(t, x, o);
        for (double& c : o) c = std::clamp(c, -nn, nn);
    };
    auto g = coeffs.functional.growth_g;
    const double cap = nn * std::sqrt(static_cast<double>(coeffs.d));
    out.functional.growth_g = [g, cap](double u) { return std::min(g(u), cap); };
    return out;
}

}  // namespace sdde
