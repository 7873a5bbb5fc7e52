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

#include "sdde/coefficients/catalog.hpp"
#include "sdde/girsanov/weights.hpp"
#include "sdde/sde/ensemble.hpp"

using namespace sdde;

namespace {

SimulationConfig make_config(const TimeGrid& g, CoefficientSet co, double x0, std::uint64_t seed = 17) {
    return SimulationConfig{g, std::move(co), PathSegment::constant(g, x0), seed, std::nullopt, std::nullopt};
}

const ThetaFn kTanh = [](std::size_t k, const SamplePath& p, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(p.at_step(k)[i]);
};

bool agree(const McEstimate& a, const McEstimate& b) {
    return std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error);
}

}  // namespace

TEST(Weight, ZeroThetaIsOne) {
    const auto g = TimeGrid::make(2, 0.5, 1.0, 1.0 / 32);
    const auto r = simulate_path(make_config(g, catalog::brownian(2), 0.0), 1);
    const auto w = weight_along_path(r.path, r.increments, constant_theta({0.0, 0.0}));
    for (std::size_t k = 0; k < w.log_weight.size(); ++k) EXPECT_EQ(w.weight(k), 1.0);
}

TEST(Weight, ConstantThetaTelescopes) {
    const auto g = TimeGrid::make(1, 0.5, 2.0, 1.0 / 128);
    for (std::size_t i = 0; i < 20; ++i) {
        const auto r = simulate_path(make_config(g, catalog::brownian(1), 0.0), i);
        const double c = 0.7;
        const auto w = weight_along_path(r.path, r.increments, constant_theta({c}));
        const double wT = brownian_path(g, r.increments).at_step(g.n_steps())[0];
        EXPECT_NEAR(w.final_log_weight(), c * wT - c * c * 2.0 / 2.0, 1e-12);
        EXPECT_DOUBLE_EQ(w.quadratic_term.back(), c * c * 2.0);
    }
}

TEST(Weight, DefinitionalIdentityAndPositivity) {
    const auto g = TimeGrid::make(2, 0.25, 1.0, 1.0 / 64);
    const auto co = catalog::make_set(catalog::ou_drift(2, 1.5), catalog::diag_diffusion({1.0, 2.0}, 4.0),
                                      catalog::discrete_delay(2, 0.3));
    const auto theta = drift_theta(co, {.drift = true, .functional = true});
    for (std::size_t i = 0; i < 50; ++i) {
        const auto r = simulate_driftless(make_config(g, co, 2.0), i);
        const auto w = weight_along_path(r.path, r.increments, theta);
        EXPECT_EQ(w.log_weight[0], 0.0);
        for (std::size_t k = 0; k < w.log_weight.size(); ++k) {
            EXPECT_EQ(w.log_weight[k], w.stochastic_part[k] - 0.5 * w.quadratic_term[k]);
            EXPECT_GT(w.weight(k), 0.0);
        }
    }
}

TEST(Weight, MartingaleMeanOne) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 16);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.5), 100000, 0, EnsembleMode::driftless);
    const auto means = weight_means(ens, kTanh, {4, 8, 16});
    for (const auto& e : means) EXPECT_LE(std::abs(e.mean - 1.0), 3.0 * e.std_error);
}

TEST(Weight, RoundTripCancels) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 256);
    const auto co = catalog::make_set(catalog::singular_drift(1, 0.2, 1.0, 4.0, 4.0), catalog::sqrt_diffusion(),
                                      catalog::tanh_delay(1, 1.0));
    const auto plus = drift_theta(co, {.drift = true, .functional = true, .sign = 1.0});
    const auto minus = drift_theta(co, {.drift = true, .functional = true, .sign = -1.0});
    for (std::size_t i = 0; i < 30; ++i) {
        const auto r = simulate_path(make_config(g, co, 0.1), i);
        const auto removed = weight_along_path(r.path, r.increments, minus);
        const auto readded = weight_along_path(r.path, shift_increments(r.path, r.increments, plus), plus);
        const auto total = compose(removed, readded);
        for (double lw : total.log_weight) EXPECT_LE(std::abs(lw), 1e-8 * static_cast<double>(g.n_steps()));
    }
}

TEST(Weight, SingularDiffusionIsReported) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 0.25);
    auto co = catalog::make_set(catalog::ou_drift(1, 1.0), catalog::zero_diffusion(1), catalog::zero_functional(1));
    const auto r = simulate_path(make_config(g, co, 1.0), 0);
    EXPECT_THROW(weight_along_path(r.path, r.increments, drift_theta(co, {})), LinearAlgebraError);

    const auto g2 = TimeGrid::make(2, 0.5, 1.0, 0.25);
    auto co2 = catalog::make_set(catalog::ou_drift(2, 1.0), catalog::diag_diffusion({1.0, 0.0}, 4.0),
                                 catalog::zero_functional(2));
    const auto r2 = simulate_path(make_config(g2, co2, 1.0), 0);
    EXPECT_THROW(weight_along_path(r2.path, r2.increments, drift_theta(co2, {})), LinearAlgebraError);
}

TEST(Weight, TwoDimensionalSolveMatchesInverse) {
    const auto g = TimeGrid::make(2, 0.5, 1.0, 0.25);
    const auto co = catalog::make_set(catalog::constant_drift({2.0, -3.0}), catalog::diag_diffusion({4.0, 0.5}, 16.0),
                                      catalog::zero_functional(2));
    const auto r = simulate_driftless(make_config(g, co, 0.0), 0);
    std::vector<double> th(2);
    drift_theta(co, {})(1, r.path, th);
    EXPECT_DOUBLE_EQ(th[0], 0.5);
    EXPECT_DOUBLE_EQ(th[1], -6.0);
}

TEST(Novikov, ZeroThetaExact) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 16);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.0), 10, 1, EnsembleMode::driftless);
    const auto rep = novikov_estimate(ens, constant_theta({0.0}), 100);
    EXPECT_EQ(rep.estimate.mean, 1.0);
    EXPECT_EQ(rep.estimate.std_error, 0.0);
    EXPECT_TRUE(rep.stable);
}

TEST(Novikov, ConstantThetaAnalytic) {
    const auto g = TimeGrid::make(1, 0.5, 2.0, 1.0 / 16);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.0), 10, 1, EnsembleMode::driftless);
    const double c = 1.3;
    const auto rep = novikov_estimate(ens, constant_theta({c}), 50);
    EXPECT_NEAR(rep.estimate.mean, std::exp(c * c * 2.0 / 2.0), 1e-12);
    EXPECT_TRUE(rep.stable);
}

TEST(Novikov, SingularDriftIsStable) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 128);
    const auto co = catalog::make_set(catalog::singular_drift(1, 0.2, 1.0, 4.0, 4.0), catalog::identity_diffusion(1),
                                      catalog::zero_functional(1));
    const Ensemble ens(make_config(g, co, 0.0), 10, 0, EnsembleMode::driftless);
    // factor 6 as in the exponential-moment hypothesis of the weak-existence argument
    const auto rep = novikov_estimate(ens, drift_theta(co, {}), 4000, 6.0, 3);
    EXPECT_TRUE(std::isfinite(rep.estimate.mean));
    EXPECT_GT(rep.estimate.mean, 1.0);
    EXPECT_TRUE(rep.stable);
    EXPECT_EQ(rep.ladder.size(), 3u);
}

TEST(Reweighted, NormalizationAndSymmetry) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 32);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.0), 40000, 0, EnsembleMode::driftless);
    const auto one = reweighted_expectation(ens, kTanh, [](const SamplePath&) { return 1.0; });
    EXPECT_LE(std::abs(one.mean - 1.0), 3.0 * one.std_error);
    const auto half = reweighted_expectation(ens, constant_theta({0.0}), [](const SamplePath& p) {
        return p.at_step(p.grid().n_steps())[0] > 0.0 ? 1.0 : 0.0;
    });
    EXPECT_LE(std::abs(half.mean - 0.5), 3.0 * half.std_error);
    EXPECT_THROW(reweighted_expectation(ens.with_mode(EnsembleMode::drifted), kTanh,
                                        [](const SamplePath&) { return 1.0; }),
                 ConfigError);
}

TEST(Reweighted, AgreesWithDirectSimulation) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 32);
    const PathPayoff endpoint = [](const SamplePath& p) { return p.at_step(p.grid().n_steps())[0]; };
    const PathPayoff positive = [](const SamplePath& p) { return p.at_step(p.grid().n_steps())[0] > 0.5 ? 1.0 : 0.0; };
    struct Case {
        CoefficientSet co;
        ThetaParts parts;
    };
    const std::vector<Case> cases{
        {catalog::make_set(catalog::ou_drift(1, 1.0), catalog::identity_diffusion(1), catalog::zero_functional(1)),
         {.drift = true}},
        {catalog::make_set(catalog::zero_drift(1), catalog::scalar_diffusion(1, 1.5), catalog::tanh_delay(1, -1.0)),
         {.drift = false, .functional = true}},
    };
    for (const auto& c : cases) {
        const Ensemble direct(make_config(g, c.co, 1.0, 3), 20000, 0);
        const Ensemble driftless_ens(make_config(g, c.co, 1.0, 4), 20000, 0, EnsembleMode::driftless);
        for (const auto& f : {endpoint, positive}) {
            const auto a = direct_expectation(direct, f);
            const auto b = reweighted_expectation(driftless_ens, drift_theta(c.co, c.parts), f);
            EXPECT_TRUE(agree(a, b)) << c.co.drift.id << "/" << c.co.functional.id << " " << a.mean << " vs " << b.mean;
        }
    }
}

TEST(Reweighted, ThreadCountInvariant) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 16);
    const auto cfg = make_config(g, catalog::brownian(1), 0.2);
    auto run = [&](unsigned t) {
        return reweighted_expectation(Ensemble(cfg, 3000, t, EnsembleMode::driftless), kTanh,
                                      [](const SamplePath& p) { return p.at_step(4)[0]; });
    };
    const auto a = run(1), b = run(4);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}
