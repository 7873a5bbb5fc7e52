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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sdde/core/errors.hpp"
#include "sdde/estimates/maximal.hpp"

using namespace sdde;

namespace {

GridFunction interval_indicator(double L = 4.0, int n = 800) {
    return sample_grid_function(1, L, n, [](std::span<const double> x) { return std::abs(x[0]) <= 1.0 ? 1.0 : 0.0; });
}

// brute force: fine midpoint sum of the sampled step function
double brute_average(const GridFunction& g, double x, double r) {
    const int m = 20000;
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
        const double y = x - r + (k + 0.5) * 2.0 * r / m;
        const double u = (y + g.halfwidth) / g.cell();
        if (u < 0.0 || u >= g.n) continue;
        s += g.values[static_cast<std::size_t>(u)];
    }
    return s / m;
}

}  // namespace

TEST(Maximal, IntervalIndicatorValues) {
    const auto g = interval_indicator();
    const auto ladder = dense_radii(g.cell() / 2, 8.0);
    EXPECT_NEAR(maximal_at(g, 0.0, ladder), 1.0, 1e-12);
    // the best radius reaching from 2 over [-1, 1] is 3
    EXPECT_NEAR(maximal_at(g, 2.0, ladder), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(maximal_at(g, -2.0, ladder), 1.0 / 3.0, 1e-12);
    // geometric ladder misses r = 3 and sits slightly below
    const double geo = maximal_at(g, 2.0, geometric_radii(g.cell(), 8.0));
    EXPECT_LE(geo, 1.0 / 3.0 + 1e-12);
    EXPECT_GT(geo, 0.3);
}

TEST(Maximal, MatchesBruteForceAverages) {
    const auto g = sample_grid_function(1, 2.0, 64, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    RadiiLadder ladder{{0.1, 0.37, 1.0, 2.5}};
    for (double x : {-1.3, 0.0, 0.21, 1.9}) {
        double best = 0.0;
        for (double r : ladder.radii) best = std::max(best, brute_average(g, x, r));
        EXPECT_NEAR(maximal_at(g, x, ladder), best, 1e-4);
    }
}

TEST(Maximal, ZeroAndValidation) {
    const auto z = sample_grid_function(1, 1.0, 10, [](std::span<const double>) { return 0.0; });
    const auto ladder = dense_radii(z.cell(), 2.0);
    for (double v : maximal_function(z, ladder).values) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(maximal_function(z, RadiiLadder{}), ConfigError);
    const auto neg = sample_grid_function(1, 1.0, 10, [](std::span<const double> x) { return x[0]; });
    EXPECT_THROW(maximal_function(neg, ladder), DomainError);
    EXPECT_THROW(sample_grid_function(3, 1.0, 4, [](std::span<const double>) { return 1.0; }), DomainError);
}

TEST(Maximal, MonotoneAndDominating) {
    for (int d : {1, 2}) {
        const int n = d == 1 ? 200 : 40;
        auto phi = sample_grid_function(d, 2.0, n, [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return std::exp(-2.0 * s);
        });
        auto psi = phi;
        for (std::size_t k = 0; k < psi.size(); ++k) psi.values[k] += 0.1 * static_cast<double>(k % 3);
        const auto ladder = dense_radii(phi.cell(), 4.0);
        const auto mp = maximal_function(phi, ladder);
        const auto ms = maximal_function(psi, ladder);
        // one-cell modulus of phi bounds the gap below phi
        double modulus = 0.0;
        for (std::size_t k = 1; k < phi.size(); ++k) modulus = std::max(modulus, std::abs(phi.values[k] - phi.values[k - 1]));
        if (d == 2)
            for (std::size_t k = static_cast<std::size_t>(n); k < phi.size(); ++k)
                modulus = std::max(modulus, std::abs(phi.values[k] - phi.values[k - static_cast<std::size_t>(n)]));
        for (std::size_t k = 0; k < phi.size(); ++k) {
            EXPECT_LE(mp.values[k], ms.values[k] + 1e-15);
            EXPECT_GE(mp.values[k], phi.values[k] - modulus);
        }
    }
}

TEST(Maximal, TwoDimensionalConstantAndBall) {
    const auto c = sample_grid_function(2, 1.0, 21, [](std::span<const double>) { return 2.5; });
    const auto mc = maximal_function(c, dense_radii(c.cell(), 2.0));
    // zero padding: the radius-h disc has 5 cells, 4 inside on an edge, 3 in a corner
    for (int j = 0; j < 21; ++j)
        for (int i = 0; i < 21; ++i) {
            const int outside = (i == 0 || i == 20) + (j == 0 || j == 20);
            const double expected = outside == 0 ? 2.5 : outside == 1 ? 2.0 : 1.5;
            EXPECT_NEAR(mc.values[static_cast<std::size_t>(i + 21 * j)], expected, 1e-12) << i << "," << j;
        }
    // disc indicator of radius 1: the centre value is 1, far points decay
    const auto disc =
        sample_grid_function(2, 4.0, 80, [](std::span<const double> x) { return std::hypot(x[0], x[1]) <= 1.0 ? 1.0 : 0.0; });
    const auto md = maximal_function(disc, dense_radii(disc.cell(), 8.0));
    const std::size_t mid = 40 + 80 * 40;
    EXPECT_NEAR(md.values[mid], 1.0, 1e-12);
    const std::size_t corner = 0;
    EXPECT_GT(md.values[corner], 0.0);
    EXPECT_LT(md.values[corner], 0.15);
}

TEST(HardyLittlewood, ConstantHasNoSpread) {
    HardyLittlewoodSpec spec;
    spec.n = 200;
    spec.pairs = 500;
    const auto rep = hardy_littlewood_check(constant_function(1, 3.0), spec);
    EXPECT_EQ(rep.fitted_constant, 0.0);
    for (const auto& [p, ratio] : rep.lp_ratios) EXPECT_NEAR(ratio, 1.0, 0.05) << p;
}

TEST(HardyLittlewood, RampConstant) {
    const auto rep = hardy_littlewood_check(smooth_ramp(), HardyLittlewoodSpec{});
    EXPECT_EQ(rep.pairs, 10000u);
    EXPECT_GE(rep.fitted_constant, 0.5 - 1e-9);
    EXPECT_LE(rep.fitted_constant, 1.05);
}

TEST(HardyLittlewood, GaussianBumpOneAndTwoDimensions) {
    const auto r1 = hardy_littlewood_check(gaussian_bump(1), HardyLittlewoodSpec{});
    EXPECT_GT(r1.fitted_constant, 0.0);
    EXPECT_LE(r1.fitted_constant, 1.05);
    ASSERT_EQ(r1.lp_ratios.size(), 2u);
    for (const auto& [p, ratio] : r1.lp_ratios) {
        EXPECT_TRUE(std::isfinite(ratio));
        EXPECT_GE(ratio, 1.0);
    }
    // L^p ratio is nonincreasing in p for this profile
    EXPECT_GE(r1.lp_ratios[0].second, r1.lp_ratios[1].second);

    HardyLittlewoodSpec s2;
    s2.n = 64;
    s2.pairs = 2000;
    s2.dense = false;
    const auto r2 = hardy_littlewood_check(gaussian_bump(2), s2);
    EXPECT_TRUE(std::isfinite(r2.fitted_constant));
    EXPECT_GT(r2.fitted_constant, 0.0);
    for (const auto& [p, ratio] : r2.lp_ratios) EXPECT_TRUE(std::isfinite(ratio));
}

TEST(HardyLittlewood, SeedDeterminism) {
    HardyLittlewoodSpec spec;
    spec.n = 200;
    spec.pairs = 300;
    spec.seed = 9;
    const auto a = hardy_littlewood_check(gaussian_bump(1), spec);
    const auto b = hardy_littlewood_check(gaussian_bump(1), spec);
    EXPECT_EQ(a.fitted_constant, b.fitted_constant);
}
