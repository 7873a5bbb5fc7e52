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
#include "sdde/estimates/bound_report.hpp"
#include "sdde/estimates/gronwall.hpp"
#include "sdde/estimates/krylov.hpp"
#include "sdde/estimates/moments.hpp"
#include "sdde/estimates/regularity.hpp"
#include "sdde/zvonkin/pde.hpp"
#include "sdde/zvonkin/transform.hpp"

using namespace sdde;

namespace {

SimulationConfig make_config(const TimeGrid& g, CoefficientSet co, double x0, std::uint64_t seed = 31) {
    return SimulationConfig{g, std::move(co), PathSegment::constant(g, x0), seed, std::nullopt, std::nullopt};
}

CoefficientSet singular_coeffs() {
    return catalog::make_set(catalog::singular_drift(1, 0.2, 1.0, 4.0, 4.0), catalog::identity_diffusion(1),
                             catalog::zero_functional(1));
}

}  // namespace

// ---- bound report ------------------------------------------------------------

TEST(BoundReport, SatisfiedIsDerived) {
    BoundReport r;
    r.lhs = exact_estimate(1.0);
    EXPECT_FALSE(r.has_rhs());
    EXPECT_TRUE(r.satisfied());
    r.rhs = 1.0;
    EXPECT_TRUE(r.satisfied());
    r.lhs.confidence_radius = 0.1;
    EXPECT_FALSE(r.satisfied());
    r.lhs.mean = NAN;
    r.rhs = INFINITY;
    EXPECT_FALSE(r.satisfied());
}

// ---- exponential sup moments ------------------------------------------------

TEST(ExpSupMoment, DriftlessExample) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 256);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.0), 20000, 0, EnsembleMode::driftless);
    const auto rep = exp_sup_moment_check(ens, 0.2, MomentVariant::driftless_explicit, 0.99);
    EXPECT_NEAR(rep.rhs, 4.0 / std::sqrt(0.6) - 3.0, 1e-12);
    EXPECT_NEAR(rep.rhs, 2.1640, 1e-4);
    EXPECT_TRUE(rep.satisfied()) << rep.lhs.mean << " + " << rep.lhs.confidence_radius;
    // one-sided oracle sits below the two-sided left side
    const double oracle = one_sided_sup_oracle(0.2, 1.0, 1.0);
    EXPECT_NEAR(oracle, 1.0 / std::sqrt(0.6), 1e-12);
    EXPECT_LT(oracle, rep.lhs.mean - 3.0 * rep.lhs.std_error);
    EXPECT_TRUE(rep.stable());
}

TEST(ExpSupMoment, ZeroAlphaIsEqualityBoundary) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 16);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.7), 100, 1, EnsembleMode::driftless);
    const auto rep = exp_sup_moment_check(ens, 0.0, MomentVariant::driftless_explicit);
    EXPECT_EQ(rep.lhs.mean, 1.0);
    EXPECT_EQ(rep.lhs.std_error, 0.0);
    EXPECT_DOUBLE_EQ(rep.rhs, 1.0);
    EXPECT_TRUE(rep.satisfied());
}

TEST(ExpSupMoment, InitialValueEntersRhs) {
    const auto g = TimeGrid::make(2, 0.25, 0.5, 1.0 / 64);
    const Ensemble ens(make_config(g, catalog::brownian(2), 0.5), 20000, 0, EnsembleMode::driftless);
    const auto rep = exp_sup_moment_check(ens, 0.3, MomentVariant::driftless_explicit);
    const double s = 1.0 - 2.0 * 0.3 * 2 * 0.5;
    EXPECT_NEAR(rep.rhs, 4.0 / std::sqrt(s) * std::exp(0.3 * 0.5 / s) - 3.0, 1e-12);
    EXPECT_TRUE(rep.satisfied());
}

TEST(ExpSupMoment, RangeAndLawChecks) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 16);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.0), 10, 1, EnsembleMode::driftless);
    EXPECT_THROW(exp_sup_moment_check(ens, 0.5, MomentVariant::driftless_explicit), DomainError);
    EXPECT_THROW(exp_sup_moment_check(ens, -0.1, MomentVariant::driftless_explicit), DomainError);
    EXPECT_THROW(exp_sup_moment_check(ens, 0.3, MomentVariant::singular_drift), DomainError);
    EXPECT_THROW(exp_sup_moment_check(ens, 0.13, MomentVariant::functional_drift), DomainError);
    const Ensemble drifted(make_config(g, singular_coeffs(), 0.0), 10, 1);
    EXPECT_THROW(exp_sup_moment_check(drifted, 0.1, MomentVariant::driftless_explicit), ConfigError);
    EXPECT_NO_THROW(exp_sup_moment_check(drifted.with_mode(EnsembleMode::driftless), 0.1,
                                         MomentVariant::driftless_explicit));
}

TEST(ExpSupMoment, DriftedVariantsBoundedAndStable) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 128);
    const Ensemble sing(make_config(g, singular_coeffs(), 0.0), 8000, 0);
    const auto a = exp_sup_moment_check(sing, 0.2, MomentVariant::singular_drift);
    EXPECT_FALSE(a.has_rhs());
    EXPECT_TRUE(std::isfinite(a.lhs.mean));
    EXPECT_TRUE(a.stable());
    EXPECT_GT(a.parameters.at("empirical_constant"), 0.0);

    const auto co = catalog::make_set(catalog::singular_drift(1, 0.2, 1.0, 4.0, 4.0), catalog::identity_diffusion(1),
                                      catalog::tanh_delay(1, 1.0));
    const Ensemble func(make_config(g, co, 0.0), 8000, 0);
    const auto b = exp_sup_moment_check(func, 0.1, MomentVariant::functional_drift);
    // squared form: recompute the plain mean independently
    const auto plain = func.map<double>([](const PathResult& r, std::size_t) {
        double best = 0.0;
        for (double v : r.path.values()) best = std::max(best, v * v);
        return std::exp(0.1 * best);
    });
    const double m = estimate_mean(plain).mean;
    EXPECT_NEAR(b.lhs.mean, m * m, 1e-12 * m * m);
    EXPECT_TRUE(b.stable());
}

// ---- Krylov ------------------------------------------------------------------

TEST(Krylov, ZeroAndConstantFunctions) {
    const double T = 1.0;
    const auto g = TimeGrid::make(1, 0.25, T, 1.0 / 64);
    const Ensemble ens(make_config(g, singular_coeffs(), 0.0), 200, 1);
    const auto rep = krylov_check(ens, {zero_test_function(1), box_indicator(1, 1e6, T)});
    EXPECT_EQ(rep.bounds[0].lhs.mean, 0.0);
    EXPECT_NEAR(rep.bounds[1].lhs.mean, T, 1e-12);
    EXPECT_LT(rep.bounds[1].lhs.std_error, 1e-12);
    for (const auto& b : rep.bounds) EXPECT_TRUE(b.satisfied());
}

TEST(Krylov, ShrinkingFamilyBounded) {
    const double T = 1.0;
    const auto g = TimeGrid::make(1, 0.25, T, 1.0 / 1024);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.0), 4000, 0, EnsembleMode::driftless);
    const auto fam = shrinking_family(1, {1.0, 0.5, 0.25, 0.125}, T);
    for (const auto& f : fam) EXPECT_NEAR(f.norm_analytic, fam[0].norm_analytic, 1e-12);
    const auto rep = krylov_check(ens, fam);
    EXPECT_TRUE(std::isfinite(rep.fitted_constant));
    EXPECT_GT(rep.fitted_constant, 0.0);
    for (const auto& b : rep.bounds) EXPECT_TRUE(b.satisfied());
    // occupation does not grow as the support shrinks
    EXPECT_LE(rep.bounds.back().lhs.mean, rep.bounds.front().lhs.upper());
    EXPECT_TRUE(rep.exp_stable);
}

TEST(Krylov, ConstantIsAboutTheLaw) {
    const double T = 1.0;
    const auto fam = shrinking_family(1, {1.0, 0.5, 0.25}, T);
    std::vector<double> cs;
    for (double h : {1.0 / 256, 1.0 / 512}) {
        const auto g = TimeGrid::make(1, 0.25, T, h);
        cs.push_back(krylov_check(Ensemble(make_config(g, singular_coeffs(), 0.0), 4000, 0), fam).fitted_constant);
    }
    EXPECT_NEAR(cs[1] / cs[0], 1.0, 0.2);
}

TEST(Krylov, RejectsBadExponents) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 16);
    const Ensemble ens(make_config(g, catalog::brownian(1), 0.0), 4, 1);
    auto f = box_indicator(1, 1.0, 1.0, 1.2, 1.2);  // 1/1.2 + 2/1.2 = 2.5
    EXPECT_THROW(krylov_check(ens, {f}), DomainError);
    EXPECT_THROW(krylov_check(ens, {}), ConfigError);
    EXPECT_THROW(krylov_check(ens, {box_indicator(2, 1.0, 1.0, 4.0, 4.0)}), ConfigError);
}

// ---- stability ---------------------------------------------------------------

TEST(Stability, ZeroPerturbationGivesZero) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 64);
    const auto cfg = make_config(g, singular_coeffs(), 0.0);
    const auto rep = stability_experiment(cfg, PathSegment::constant(g, 1.0), 1.0, {0.0, 0.1, 0.2}, 50, 1);
    EXPECT_EQ(rep.moments[0].mean, 0.0);
    EXPECT_EQ(rep.moments[0].std_error, 0.0);
    EXPECT_THROW(stability_experiment(cfg, PathSegment::constant(g, 1.0), 1.0, {0.1, 0.1}, 10, 1), ConfigError);
    EXPECT_THROW(stability_experiment(cfg, PathSegment::constant(g, 1.0), 0.0, {0.1, 0.2}, 10, 1), DomainError);
}

TEST(Stability, LipschitzSlopeEqualsGamma) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 64);
    // additive noise: the difference is deterministic and linear in eps
    const auto co = catalog::make_set(catalog::ou_drift(1, 1.0), catalog::identity_diffusion(1),
                                      catalog::discrete_delay(1, 0.5));
    const auto rep = stability_experiment(make_config(g, co, 0.5), PathSegment::constant(g, 1.0), 2.0,
                                          {0.4, 0.2, 0.1, 0.05, 0.025}, 10000);
    EXPECT_NEAR(rep.slope, 2.0, 0.1);
    EXPECT_GT(rep.empirical_constant(), 0.0);
}

TEST(Stability, SingularDriftSlope) {
    // started off the singular point: at x0 = 0 the scheme carries an
    // h eps^{-beta} first-step floor
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 512);
    const auto rep = stability_experiment(make_config(g, singular_coeffs(), 0.5), PathSegment::constant(g, 1.0), 1.0,
                                          {0.2, 0.1, 0.05, 0.025}, 2000);
    EXPECT_GE(rep.slope, 0.9);
}

TEST(Stability, FitLine) {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto [s, c] = fit_line(x, y);
    EXPECT_DOUBLE_EQ(s, 2.0);
    EXPECT_DOUBLE_EQ(c, 1.0);
    const std::vector<double> flat{1, 1};
    EXPECT_THROW(fit_line(flat, flat), ConfigError);
}

// ---- Hölder ------------------------------------------------------------------

TEST(Holder, SmoothPathStable) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 1024);
    const auto co = catalog::make_set(catalog::ou_drift(1, 1.0), catalog::zero_diffusion(1), catalog::zero_functional(1));
    const auto rep = holder_experiment(make_config(g, co, 1.0), {0.2, 0.5, 0.9}, 4, 4, 2);
    for (auto v : rep.verdicts) EXPECT_EQ(v, HolderVerdict::stable);
}

TEST(Holder, BrownianRefinement) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 1024);
    const auto rep = holder_experiment(make_config(g, catalog::brownian(1), 0.0), {0.4, 0.6}, 400, 4, 2);
    EXPECT_EQ(rep.verdicts[0], HolderVerdict::stable);
    // above one half the seminorm keeps growing under refinement
    EXPECT_GT(rep.ratios[1], rep.stable_threshold);
    EXPECT_GT(rep.ratios[1], rep.ratios[0]);
    EXPECT_EQ(rep.steps.size(), 2u);
    EXPECT_DOUBLE_EQ(rep.steps[0], 4.0 / 1024);
}

TEST(Holder, SingularDriftStableBelowHalf) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 1024);
    const auto rep = holder_experiment(make_config(g, singular_coeffs(), 0.0), {0.4}, 400, 4, 2);
    EXPECT_EQ(rep.verdicts[0], HolderVerdict::stable);
}

TEST(Holder, Validation) {
    const auto g = TimeGrid::make(1, 0.25, 1.0, 1.0 / 64);
    const auto cfg = make_config(g, catalog::brownian(1), 0.0);
    EXPECT_THROW(holder_experiment(cfg, {0.4}, 4, 4, 1), ConfigError);
    EXPECT_THROW(holder_experiment(cfg, {1.2}, 4, 4, 2), DomainError);
    EXPECT_THROW(holder_experiment(cfg, {0.4}, 4, 3, 2), GridAlignmentError);
}

// ---- Gronwall multiplier -------------------------------------------------------

TEST(Multiplier, VanishesForConstantGradient) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 64);
    const auto co =
        catalog::make_set(catalog::constant_drift({0.5}), catalog::identity_diffusion(1), catalog::zero_functional(1));
    const auto sol = solve_zvonkin(co, PdeGrid{1, 10.0, 201, 0.0, 1.0, 64}, BoundaryKind::neumann_zero);
    const auto rep = gronwall_multiplier(make_config(g, co, 0.0), PathSegment::constant(g, 0.5), &sol, 0.0, 1.0, 50, 5, 1);
    EXPECT_EQ(rep.paths.size(), 5u);
    for (const auto& p : rep.paths)
        for (double a : p.A_values) EXPECT_LT(a, 1e-12);
    EXPECT_NEAR(rep.exp_half.lhs.mean, 1.0, 1e-12);
}

TEST(Multiplier, IdenticalStartsGiveZero) {
    const auto g = TimeGrid::make(1, 0.5, 1.0, 1.0 / 64);
    const auto co = singular_coeffs();
    const auto sol = solve_zvonkin(co, PdeGrid{1, 6.0, 241, 0.0, 1.0, 64});
    const auto cfg = make_config(g, co, 0.0);
    const auto rep = gronwall_multiplier(cfg, cfg.initial_segment, &sol, 0.0, 1.0, 30, 30, 1);
    for (const auto& p : rep.paths)
        for (double a : p.A_values) EXPECT_EQ(a, 0.0);
    EXPECT_EQ(rep.exp_half.lhs.mean, 1.0);
    EXPECT_THROW(gronwall_multiplier(cfg, cfg.initial_segment, nullptr, 0.0, 1.0, 3), DependencyError);
}

TEST(Multiplier, SingularFixtureMonotoneAndStable) {
    const double T = 1.0;
    const auto co = catalog::make_set(catalog::singular_drift(1, 0.2, 1.0, 4.0, 4.0), catalog::identity_diffusion(1),
                                      catalog::tanh_delay(1, 1.0));
    const auto sol = solve_zvonkin(co, PdeGrid{1, suggested_halfwidth(co, T), 401, 0.0, T, 256});
    const auto w = contraction_window(sol);
    const auto g = TimeGrid::make(1, 0.5, T, T / 256);
    const auto rep =
        gronwall_multiplier(make_config(g, co, 0.0), PathSegment::constant(g, 0.2), &sol, w.start(), 1.0, 4000, 20);
    for (const auto& p : rep.paths) {
        ASSERT_FALSE(p.A_values.empty());
        EXPECT_EQ(p.A_values.front(), 0.0);
        EXPECT_DOUBLE_EQ(p.times.front(), w.start());
        for (std::size_t k = 1; k < p.A_values.size(); ++k) EXPECT_GE(p.A_values[k], p.A_values[k - 1]);
    }
    EXPECT_TRUE(std::isfinite(rep.exp_half.lhs.mean));
    EXPECT_TRUE(rep.exp_half.stable());
}

// ---- Khasminskii -------------------------------------------------------------

TEST(Khasminskii, DeterministicExamples) {
    const auto a = khasminskii_constant(0.5, 1.0);
    EXPECT_NEAR(a.lhs.mean, std::exp(0.5), 1e-15);
    EXPECT_DOUBLE_EQ(a.rhs, 2.0);
    EXPECT_TRUE(a.satisfied());
    const auto z = khasminskii_constant(0.0, 3.0);
    EXPECT_EQ(z.lhs.mean, 1.0);
    EXPECT_EQ(z.rhs, 1.0);
    EXPECT_TRUE(z.satisfied());
    const auto lin = khasminskii_check([](double t) { return t; }, 1.0);
    EXPECT_NEAR(lin.parameters.at("alpha"), 0.5, 1e-14);
    EXPECT_TRUE(lin.satisfied());
    EXPECT_THROW(khasminskii_constant(1.0, 1.0), DomainError);
    EXPECT_THROW(khasminskii_rhs(-0.1), DomainError);
    EXPECT_THROW(khasminskii_check([](double) { return -1.0; }, 1.0, 8), DomainError);
}

TEST(Khasminskii, IndicatorProcess) {
    const double alpha = indicator_alpha_certificate(2.0, 0.1, 1.0);
    EXPECT_NEAR(alpha, 0.306, 1e-3);
    // small horizons: the certificate is c T
    EXPECT_DOUBLE_EQ(indicator_alpha_certificate(2.0, 0.1, 1e-4), 2e-4);
    IndicatorBetaSpec spec;
    spec.c = 2.0;
    spec.eps = 0.1;
    spec.n_paths = 20000;
    spec.step = 1.0 / 512;
    const auto rep = khasminskii_check(spec);
    EXPECT_NEAR(rep.rhs, 1.0 / (1.0 - alpha), 1e-12);
    EXPECT_TRUE(rep.satisfied());
    EXPECT_TRUE(rep.stable());
    EXPECT_GT(rep.lhs.mean, 1.0);
}

// ---- stochastic Gronwall -------------------------------------------------------

TEST(StochasticGronwall, DeterministicCases) {
    GronwallHarnessSpec s;
    s.process = GronwallProcess::deterministic;
    s.C = 2.0;
    s.K = 0.0;
    s.p = 0.5;
    auto r = stochastic_gronwall_harness(s);
    EXPECT_DOUBLE_EQ(r.sup_moment.mean, std::sqrt(2.0));
    EXPECT_LE(r.sup_moment.mean, std::pow(s.C, s.p));
    s.K = 1.5;
    r = stochastic_gronwall_harness(s);
    EXPECT_NEAR(r.sup_moment.mean, r.reference, 1e-12 * r.reference);
    EXPECT_NEAR(r.reference, std::pow(2.0, 0.5) * std::exp(0.5 * 1.5), 1e-12);
    EXPECT_LT(r.hypothesis_residual, 1e-12);
    EXPECT_NEAR(r.growth_rate, s.p * s.K, 1e-9);
    EXPECT_LT(r.scaling_error, 1e-12);
}

TEST(StochasticGronwall, GeometricProcess) {
    GronwallHarnessSpec s;
    s.process = GronwallProcess::geometric;
    s.C = 1.5;
    s.p = 0.5;
    s.n_paths = 8000;
    const auto r = stochastic_gronwall_harness(s);
    EXPECT_TRUE(r.stable());
    EXPECT_LT(r.scaling_error, 1e-12);
    EXPECT_LE(r.sup_moment.mean - 3.0 * r.sup_moment.std_error, r.reference);
    EXPECT_GE(r.sup_moment.mean, std::pow(s.C, s.p));
    // the discrete construction meets the hypothesis up to discretization
    EXPECT_LT(r.hypothesis_residual, 0.5);
    GronwallHarnessSpec k = s;
    k.K = 1.0;
    const auto rk = stochastic_gronwall_harness(k);
    EXPECT_GT(rk.growth_rate, r.growth_rate);
    EXPECT_LE(rk.growth_rate, k.p * k.K + 0.5);
}

TEST(StochasticGronwall, ReflectedFiniteAndValidation) {
    GronwallHarnessSpec s;
    s.process = GronwallProcess::reflected;
    s.n_paths = 4000;
    const auto r = stochastic_gronwall_harness(s);
    EXPECT_TRUE(r.stable());
    EXPECT_TRUE(std::isfinite(r.sup_moment.mean));
    EXPECT_TRUE(std::isnan(r.reference));
    s.p = 1.0;
    EXPECT_THROW(stochastic_gronwall_harness(s), DomainError);
    s.p = 0.5;
    s.step = 1.0 / 6;
    EXPECT_THROW(stochastic_gronwall_harness(s), GridAlignmentError);
}
