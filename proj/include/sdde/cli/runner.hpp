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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdde/cli/config.hpp"
#include "sdde/cli/output.hpp"
#include "sdde/coefficients/catalog.hpp"
#include "sdde/core/errors.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/estimates/gronwall.hpp"
#include "sdde/estimates/krylov.hpp"
#include "sdde/estimates/maximal.hpp"
#include "sdde/estimates/moments.hpp"
#include "sdde/estimates/regularity.hpp"
#include "sdde/girsanov/weights.hpp"
#include "sdde/sde/ensemble.hpp"
#include "sdde/zvonkin/pde.hpp"
#include "sdde/zvonkin/transform.hpp"

namespace sdde::cli {

struct RunOptions {
    std::filesystem::path out_dir = "runs";
    /// 0: SDDE_LAB_THREADS, then the hardware count.
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
};

struct RunOutcome {
    /// 0 success, 1 experiment failure, 2 invalid config.
    int exit_code = 0;
    std::filesystem::path run_dir;
    /// Machine-readable summary (or the violation list).
    json summary;
};

inline std::string config_hash(const json& cfg) { return hex64(fnv1a64(cfg.dump())); }

inline std::string error_type(const std::exception& e) {
    if (dynamic_cast<const ParseFailure*>(&e)) return "ParseFailure";
    if (dynamic_cast<const GridAlignmentError*>(&e)) return "GridAlignmentError";
    if (dynamic_cast<const RangeError*>(&e)) return "RangeError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const IntegrationError*>(&e)) return "IntegrationError";
    if (dynamic_cast<const DependencyError*>(&e)) return "DependencyError";
    if (dynamic_cast<const LinearAlgebraError*>(&e)) return "LinearAlgebraError";
    if (dynamic_cast<const SimulationDiverged*>(&e)) return "SimulationDiverged";
    if (dynamic_cast<const SolverError*>(&e)) return "SolverError";
    if (dynamic_cast<const WindowNotFoundError*>(&e)) return "WindowNotFoundError";
    if (dynamic_cast<const PartialEnsembleError*>(&e)) return "PartialEnsembleError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "std::exception";
}

namespace detail {

inline std::vector<std::size_t> checkpoint_steps(std::size_t n_steps, std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t j = 1; j <= count; ++j) out.push_back(j * n_steps / count);
    return out;
}

inline MomentVariant moment_variant(const std::string& s) {
    if (s == "driftless_explicit") return MomentVariant::driftless_explicit;
    if (s == "singular_drift") return MomentVariant::singular_drift;
    return MomentVariant::functional_drift;
}

inline std::string label(const std::string& base, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return base + "=" + buf;
}

// ---- experiments ------------------------------------------------------------

inline void run_simulate(const json& cfg, unsigned threads, Artifacts& art) {
    const SimulationConfig sc = build_simulation(cfg);
    const auto n = cfg.at("mc").at("n_paths").get<std::size_t>();
    const double level = confidence_level(cfg);
    const Ensemble ens(sc, n, threads);
    const TimeGrid& g = sc.grid;
    const auto steps = checkpoint_steps(g.n_steps(), cfg.at("params").at("checkpoints").get<std::size_t>());
    const std::size_t K = steps.size();
    // per path: x1, |x|^2, sup |x|^2 at each checkpoint, then the explosion flag
    const auto per = ens.map<std::vector<double>>([&](const PathResult& r, std::size_t) {
        std::vector<double> out(3 * K + 1);
        double sup = 0.0;
        std::size_t j = 0;
        for (std::size_t k = 0; k <= g.n_steps() && j < K; ++k) {
            const double s = std::pow(euclidean_norm(r.path.at_step(k)), 2);
            sup = std::max(sup, s);
            if (k == steps[j]) {
                out[3 * j] = r.path.at_step(k)[0];
                out[3 * j + 1] = s;
                out[3 * j + 2] = sup;
                ++j;
            }
        }
        out[3 * K] = r.stop.exploded ? 1.0 : 0.0;
        return out;
    });
    std::vector<double> col(n);
    auto column = [&](std::size_t c) {
        for (std::size_t i = 0; i < n; ++i) col[i] = per[i][c];
        return estimate_mean(col, level);
    };
    auto& plot = art.plot("sup_moment", "t E[sup_{s<=t} |X(s)|^2]");
    json checkpoints = json::array();
    for (std::size_t j = 0; j < K; ++j) {
        const double t = static_cast<double>(steps[j]) * g.step();
        const McEstimate x1 = column(3 * j), sq = column(3 * j + 1), sup = column(3 * j + 2);
        art.series.add(t, "mean_x1", x1);
        art.series.add(t, "mean_sq_norm", sq);
        art.series.add(t, "mean_sup_sq_norm", sup);
        plot.rows.emplace_back(t, sup.mean);
        checkpoints.push_back({{"t", t}, {"mean_x1", to_json(x1)}, {"mean_sq_norm", to_json(sq)}, {"mean_sup_sq_norm", to_json(sup)}});
    }
    art.report["n_paths"] = n;
    art.report["checkpoints"] = checkpoints;
    art.report["exploded_fraction"] = to_json(column(3 * K));
}

inline void run_exp_sup_moment(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    const SimulationConfig sc = build_simulation(cfg);
    const auto n = cfg.at("mc").at("n_paths").get<std::size_t>();
    const double level = confidence_level(cfg);
    const double alpha = p.at("alpha").get<double>();
    const MomentVariant variant = moment_variant(p.at("variant").get<std::string>());
    // the explicit bound concerns the driftless part M of the dynamics
    const EnsembleMode mode =
        variant == MomentVariant::driftless_explicit ? EnsembleMode::driftless : EnsembleMode::drifted;
    const Ensemble ens(sc, n, threads, mode);
    const BoundReport rep = exp_sup_moment_check(ens, alpha, variant, level);
    art.report["bound"] = to_json(rep);
    art.report["ensemble_mode"] = mode == EnsembleMode::driftless ? "driftless" : "drifted";
    if (variant == MomentVariant::driftless_explicit) {
        art.report["rhs_formula"] = "4 / sqrt(1 - 2 alpha d kappa T) * exp(alpha |x0|^2 / (1 - 2 alpha d kappa T)) - 3";
        const bool from_origin = euclidean_norm(sc.initial_segment.view().back()) == 0.0;
        if (sc.grid.dim() == 1 && from_origin && sc.coefficients.diffusion.space_independent) {
            const double oracle = one_sided_sup_oracle(alpha, sc.coefficients.diffusion.kappa, sc.grid.horizon());
            art.report["one_sided_oracle"] = {{"value", oracle},
                                              {"formula", "1 / sqrt(1 - 2 alpha kappa T), one-sided running maximum"},
                                              {"exceeded", rep.lhs.upper() >= oracle}};
        }
    }
    // sup-moment curve over checkpoints, same sup window as the check
    const TimeGrid& g = sc.grid;
    const auto steps = checkpoint_steps(g.n_steps(), p.at("checkpoints").get<std::size_t>());
    const std::size_t first = variant == MomentVariant::driftless_explicit ? g.delay_steps() : 0;
    const auto per = ens.map<std::vector<double>>([&](const PathResult& r, std::size_t) {
        std::vector<double> out;
        double best = 0.0;
        std::size_t j = 0;
        for (std::size_t i = first; i < r.path.size() && j < steps.size(); ++i) {
            best = std::max(best, std::pow(euclidean_norm(r.path.point(i)), 2));
            if (i == g.delay_steps() + steps[j]) {
                out.push_back(std::exp(alpha * best));
                ++j;
            }
        }
        return out;
    });
    auto& plot = art.plot("sup_moment", "t E[exp(alpha sup_{s<=t} |X(s)|^2)]");
    std::vector<double> col(n);
    for (std::size_t j = 0; j < steps.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = per[i][j];
        const McEstimate e = estimate_mean(col, level);
        const double t = static_cast<double>(steps[j]) * g.step();
        art.series.add(t, "exp_sup_moment", e);
        plot.rows.emplace_back(t, e.mean);
    }
    for (const auto& e : rep.ladder) art.series.add(g.horizon(), "ladder_n=" + std::to_string(e.n_samples), e);
}

inline void run_girsanov(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    const SimulationConfig sc = build_simulation(cfg);
    const auto n = cfg.at("mc").at("n_paths").get<std::size_t>();
    const double level = confidence_level(cfg);
    const Ensemble drifted(sc, n, threads);
    const Ensemble driftless = drifted.with_mode(EnsembleMode::driftless);
    const ThetaFn theta = drift_theta(sc.coefficients, {.drift = true, .functional = true, .sign = 1.0,
                                                         .drift_cutoff_level = sc.drift_cutoff_level});
    const std::size_t last = sc.grid.n_steps();
    PathPayoff payoff;
    if (p.at("payoff") == "terminal") {
        payoff = [last](const SamplePath& x) { return x.at_step(last)[0]; };
    } else {
        const double thr = p.at("threshold").get<double>();
        payoff = [last, thr](const SamplePath& x) { return x.at_step(last)[0] > thr ? 1.0 : 0.0; };
    }
    McEstimate direct = direct_expectation(drifted, payoff);
    McEstimate reweighted = reweighted_expectation(driftless, theta, payoff);
    const double z = z_for_level(level);
    direct.confidence_radius = z * direct.std_error;
    direct.confidence_level = level;
    reweighted.confidence_radius = z * reweighted.std_error;
    reweighted.confidence_level = level;
    const double combined = std::hypot(direct.std_error, reweighted.std_error);
    art.report["direct"] = to_json(direct);
    art.report["reweighted"] = to_json(reweighted);
    art.report["difference"] = num(direct.mean - reweighted.mean);
    art.report["combined_std_error"] = num(combined);
    art.report["agree_within_3_combined_se"] = std::abs(direct.mean - reweighted.mean) <= 3.0 * combined;
    art.series.add(sc.grid.horizon(), "direct", direct);
    art.series.add(sc.grid.horizon(), "reweighted", reweighted);

    const auto steps = checkpoint_steps(last, p.at("checkpoints").get<std::size_t>());
    const auto means = weight_means(driftless, theta, steps);
    auto& plot = art.plot("weight_mean", "t E[W(t)]");
    json wm = json::array();
    bool all_one = true;
    for (std::size_t j = 0; j < steps.size(); ++j) {
        const double t = static_cast<double>(steps[j]) * sc.grid.step();
        art.series.add(t, "weight_mean", means[j]);
        plot.rows.emplace_back(t, means[j].mean);
        const bool ok = std::abs(means[j].mean - 1.0) <= 3.0 * means[j].std_error;
        all_one = all_one && ok;
        wm.push_back({{"t", t}, {"estimate", to_json(means[j])}, {"within_3_se_of_one", ok}});
    }
    art.report["weight_means"] = wm;
    art.report["weight_means_consistent"] = all_one;
    const NovikovReport nov = novikov_estimate(driftless, theta, std::max<std::size_t>(1, n / 4));
    art.report["novikov"] = {{"factor", nov.factor}, {"estimate", to_json(nov.estimate)},
                             {"ladder", to_json(nov.ladder)}, {"stable", nov.stable}};
}

inline void run_holder(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    const SimulationConfig sc = build_simulation(cfg);
    const auto n = cfg.at("mc").at("n_paths").get<std::size_t>();
    const auto alphas = p.at("alphas").get<std::vector<double>>();
    const HolderReport rep = holder_experiment(sc, alphas, n, p.at("factor").get<std::size_t>(), p.at("levels").get<int>(),
                                               p.at("driftless").get<bool>(), threads);
    json per = json::array();
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        auto& plot = art.plot("holder_" + std::to_string(a), "step median_seminorm (alpha = " + g17(alphas[a]) + ")");
        for (std::size_t l = 0; l < rep.steps.size(); ++l) {
            art.series.add(rep.steps[l], label("holder_median_alpha", alphas[a]), rep.medians[a][l]);
            plot.rows.emplace_back(rep.steps[l], rep.medians[a][l]);
        }
        per.push_back({{"alpha", alphas[a]}, {"medians", rep.medians[a]}, {"ratio", num(rep.ratios[a])},
                       {"verdict", to_string(rep.verdicts[a])}});
    }
    art.report["steps"] = rep.steps;
    art.report["alphas"] = per;
    art.report["stable_threshold"] = rep.stable_threshold;
    art.report["diverging_threshold"] = rep.diverging_threshold;
    art.report["statistic"] = "median over paths of the discrete seminorm";
}

inline void run_khasminskii(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    const double c = p.at("c").get<double>();
    const double T = p.at("T").get<double>();
    const BoundReport constant = khasminskii_constant(c, T);
    art.report["constant_beta"] = to_json(constant);
    art.report["rhs_formula"] = "1 / (1 - alpha)";
    IndicatorBetaSpec spec;
    spec.c = c;
    spec.eps = p.at("eps").get<double>();
    spec.T = T;
    spec.step = p.at("step").get<double>();
    spec.n_paths = cfg.at("mc").at("n_paths").get<std::size_t>();
    spec.seed = cfg.at("mc").at("seed").get<std::uint64_t>();
    spec.threads = threads;
    const BoundReport ind = khasminskii_check(spec);
    art.report["indicator_beta"] = to_json(ind);
    art.series.add(T, "constant_beta_lhs", constant.lhs);
    art.series.add(T, "indicator_beta_lhs", ind.lhs);
    auto& plot = art.plot("khasminskii_ladder", "n_paths E[exp(int beta)]");
    for (const auto& e : ind.ladder) {
        art.series.add(T, "indicator_ladder_n=" + std::to_string(e.n_samples), e);
        plot.rows.emplace_back(static_cast<double>(e.n_samples), e.mean);
    }
}

inline void run_verify_bound(const json& cfg, unsigned threads, Artifacts& art) {
    const auto bound = cfg.at("params").at("bound").get<std::string>();
    art.report["bound_kind"] = bound;
    if (bound == "exp_sup_moment") run_exp_sup_moment(cfg, threads, art);
    else if (bound == "girsanov") run_girsanov(cfg, threads, art);
    else if (bound == "holder") run_holder(cfg, threads, art);
    else run_khasminskii(cfg, threads, art);
}

inline void run_stability(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    const SimulationConfig sc = build_simulation(cfg);
    const auto n = cfg.at("mc").at("n_paths").get<std::size_t>();
    const PathSegment dir = PathSegment::constant(sc.grid, p.at("direction").get<double>());
    const auto eps = p.at("eps").get<std::vector<double>>();
    const StabilityReport rep = stability_experiment(sc, dir, p.at("gamma").get<double>(), eps, n, threads);
    auto& plot = art.plot("stability", "log(eps) log(E ||X_T - X^_T||^gamma)");
    for (std::size_t j = 0; j < eps.size(); ++j) {
        art.series.add(eps[j], "moment", rep.moments[j]);
        if (eps[j] > 0.0 && rep.moments[j].mean > 0.0) plot.rows.emplace_back(std::log(eps[j]), std::log(rep.moments[j].mean));
    }
    art.report["gamma"] = rep.gamma;
    art.report["eps"] = eps;
    art.report["moments"] = to_json(rep.moments);
    art.report["slope"] = num(rep.slope);
    art.report["intercept"] = num(rep.intercept);
    art.report["empirical_constant"] = num(rep.empirical_constant());
}

inline void run_krylov(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    const SimulationConfig sc = build_simulation(cfg);
    const auto n = cfg.at("mc").at("n_paths").get<std::size_t>();
    const Ensemble ens(sc, n, threads);
    const auto eps = p.at("eps").get<std::vector<double>>();
    const auto fam = shrinking_family(sc.grid.dim(), eps, sc.grid.horizon(), p.at("p_prime").get<double>(),
                                      p.at("q_prime").get<double>());
    const KrylovReport rep = krylov_check(ens, fam);
    auto& plot = art.plot("krylov", "eps E[int f_eps] / ||f_eps||");
    json bounds = json::array();
    for (std::size_t i = 0; i < fam.size(); ++i) {
        art.series.add(eps[i], "occupation", rep.bounds[i].lhs);
        plot.rows.emplace_back(eps[i], rep.bounds[i].lhs.mean / fam[i].norm_analytic);
        json b = to_json(rep.bounds[i]);
        b["eps"] = eps[i];
        b["norm"] = fam[i].norm_analytic;
        bounds.push_back(b);
    }
    art.report["bounds"] = bounds;
    art.report["fitted_constant"] = num(rep.fitted_constant);
    art.report["exp_stable"] = rep.exp_stable;
    art.report["note"] = "unconditional form; C is fitted from upper confidence limits, not asserted";
}

inline void run_zvonkin(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    const SimulationConfig sc = build_simulation(cfg);
    const auto n = cfg.at("mc").at("n_paths").get<std::size_t>();
    const double T = sc.grid.horizon();
    const double L = p.at("halfwidth").is_string() ? suggested_halfwidth(sc.coefficients, T) : p.at("halfwidth").get<double>();
    const PdeGrid pg{sc.grid.dim(), L, p.at("nx").get<int>(), 0.0, T, p.at("n_time").get<int>()};
    const BoundaryKind bc = p.at("boundary") == "neumann" ? BoundaryKind::neumann_zero : BoundaryKind::dirichlet_zero;
    const PdeSolution sol = solve_zvonkin(sc.coefficients, pg, bc);
    std::ostringstream grid_file;
    write_grid_file(sol, grid_file);
    art.files.emplace_back("pde_grid.txt", grid_file.str());
    art.report["pde"] = {{"d", pg.d}, {"halfwidth", pg.halfwidth}, {"nx", pg.nx}, {"n_time", pg.n_time},
                         {"boundary", bc == BoundaryKind::neumann_zero ? "neumann" : "dirichlet"}};
    auto& plot = art.plot("lipschitz", "t Lip(u~(t, .))");
    for (int level = 0; level < sol.levels(); ++level) {
        const double lip = grid_lipschitz(sol, level);
        art.series.add(pg.time(level), "grid_lipschitz", lip);
        plot.rows.emplace_back(pg.time(level), lip);
    }
    const ContractionWindow w = contraction_window(sol, p.at("target").get<double>());
    art.report["window"] = {{"start", w.start()}, {"delta", w.delta}, {"terminal", w.terminal},
                            {"achieved_lipschitz", w.achieved_lipschitz}, {"target", w.target}};
    const PathSegment perturbed =
        shifted_segment(sc.initial_segment, PathSegment::constant(sc.grid, 1.0), p.at("perturbation").get<double>());
    const SandwichReport s = sandwich_check(sc, perturbed, sol, w, n, threads);
    const double lip = w.achieved_lipschitz;
    art.report["sandwich"] = {{"pairs", s.pairs},
                              {"pairs_ok", s.pairs_ok},
                              {"points_checked", s.points_checked},
                              {"min_ratio", num(s.min_ratio)},
                              {"max_ratio", num(s.max_ratio)},
                              {"lower", s.lower},
                              {"upper", s.upper},
                              {"all_hold", s.all_hold()},
                              {"implied_lower", 1.0 / (1.0 + lip)},
                              {"implied_upper", lip < 1.0 ? num(1.0 / (1.0 - lip)) : json(nullptr)}};
    art.series.add(T, "sandwich_min_ratio", s.min_ratio);
    art.series.add(T, "sandwich_max_ratio", s.max_ratio);
    const MultiplierReport m =
        gronwall_multiplier(sc, perturbed, &sol, w.start(), p.at("multiplier_c").get<double>(), n, 0, threads);
    art.report["multiplier"] = to_json(m.exp_half);
    art.series.add(T, "multiplier_exp_half", m.exp_half.lhs);
}

inline void run_maximal(const json& cfg, unsigned, Artifacts& art) {
    const json& p = cfg.at("params");
    const int d = p.at("dim").get<int>();
    const auto id = p.at("function").get<std::string>();
    const SmoothFunction fn = id == "constant" ? constant_function(d, 1.0) : id == "gaussian_bump" ? gaussian_bump(d) : smooth_ramp();
    HardyLittlewoodSpec spec;
    spec.halfwidth = p.at("halfwidth").get<double>();
    spec.n = p.at("n").get<int>();
    spec.sample_halfwidth = p.at("sample_halfwidth").get<double>();
    spec.pairs = p.at("pairs").get<std::size_t>();
    spec.seed = p.at("seed").get<std::uint64_t>();
    spec.dense = p.at("ladder") == "dense";
    spec.lp_exponents = p.at("lp").get<std::vector<double>>();
    const HardyLittlewoodReport rep = hardy_littlewood_check(fn, spec);
    art.report["function"] = rep.id;
    art.report["fitted_constant"] = num(rep.fitted_constant);
    art.report["pairs"] = rep.pairs;
    art.series.add(0.0, "fitted_constant", rep.fitted_constant);
    json lp = json::array();
    for (const auto& [q, r] : rep.lp_ratios) {
        lp.push_back({{"p", q}, {"ratio", num(r)}});
        art.series.add(q, "lp_ratio", r);
    }
    art.report["lp_ratios"] = lp;

    // M|grad phi| along the first axis
    const GridFunction g = sample_grid_function(d, spec.halfwidth, spec.n, fn.grad_norm);
    const double h = g.cell();
    const RadiiLadder ladder = spec.dense ? dense_radii(d == 1 ? h / 2 : h, 2.0 * spec.halfwidth)
                                          : geometric_radii(h, 2.0 * spec.halfwidth);
    const GridFunction mg = maximal_function(g, ladder);
    auto& plot = art.plot("maximal", "x M|grad phi|(x)");
    const std::size_t row = d == 1 ? 0 : static_cast<std::size_t>(spec.n / 2) * static_cast<std::size_t>(spec.n);
    for (int i = 0; i < spec.n; ++i) plot.rows.emplace_back(g.centre(i), mg.values[row + static_cast<std::size_t>(i)]);

    if (d == 1) {
        // interval oracle on the same grid: M 1_{[-1,1]}(2) = 1/3
        const GridFunction ind = sample_grid_function(1, spec.halfwidth, spec.n,
                                                      [](std::span<const double> x) { return std::abs(x[0]) <= 1.0 ? 1.0 : 0.0; });
        const double m2 = maximal_at(ind, 2.0, dense_radii(h / 2, 2.0 * spec.halfwidth));
        art.report["interval_oracle"] = {{"value", m2}, {"exact", 1.0 / 3.0}, {"cell", h},
                                         {"within_one_cell", std::abs(m2 - 1.0 / 3.0) <= h}};
        art.series.add(2.0, "interval_maximal", m2);
    }
}

inline void run_gronwall(const json& cfg, unsigned threads, Artifacts& art) {
    const json& p = cfg.at("params");
    GronwallHarnessSpec s;
    const auto proc = p.at("process").get<std::string>();
    s.process = proc == "deterministic" ? GronwallProcess::deterministic
                : proc == "geometric"   ? GronwallProcess::geometric
                                        : GronwallProcess::reflected;
    s.C = p.at("C").get<double>();
    s.K = p.at("K").get<double>();
    s.p = p.at("p").get<double>();
    s.T = p.at("T").get<double>();
    s.step = p.at("step").get<double>();
    s.scale = p.at("scale").get<double>();
    s.n_paths = cfg.at("mc").at("n_paths").get<std::size_t>();
    s.seed = cfg.at("mc").at("seed").get<std::uint64_t>();
    s.threads = threads;
    const GronwallHarnessReport r = stochastic_gronwall_harness(s);
    art.report["process"] = proc;
    art.report["sup_moment"] = to_json(r.sup_moment);
    art.report["scaled_sup_moment"] = to_json(r.scaled_sup_moment);
    art.report["scaling_error"] = num(r.scaling_error);
    art.report["hypothesis_residual"] = num(r.hypothesis_residual);
    art.report["reference"] = num(r.reference);
    art.report["growth_rate"] = num(r.growth_rate);
    art.report["ladder"] = to_json(r.ladder);
    art.report["stable"] = r.stable();
    art.report["note"] = "c1(p), c2(p) are not asserted; structural checks only";
    art.series.add(s.T, "sup_moment", r.sup_moment);
    art.series.add(s.T, "scaled_sup_moment", r.scaled_sup_moment);
    auto& plot = art.plot("gronwall_ladder", "n_paths E[sup Z^p]");
    for (const auto& e : r.ladder) {
        art.series.add(s.T, "ladder_n=" + std::to_string(e.n_samples), e);
        plot.rows.emplace_back(static_cast<double>(e.n_samples), e.mean);
    }
}

inline void dispatch(Experiment e, const json& cfg, unsigned threads, Artifacts& art) {
    switch (e) {
        case Experiment::simulate: run_simulate(cfg, threads, art); break;
        case Experiment::verify_bound: run_verify_bound(cfg, threads, art); break;
        case Experiment::stability: run_stability(cfg, threads, art); break;
        case Experiment::zvonkin: run_zvonkin(cfg, threads, art); break;
        case Experiment::maximal: run_maximal(cfg, threads, art); break;
        case Experiment::gronwall: run_gronwall(cfg, threads, art); break;
        case Experiment::krylov: run_krylov(cfg, threads, art); break;
    }
}

inline void apply_seed(json& cfg, std::uint64_t seed) {
    if (!cfg.is_object()) return;
    if (cfg.value("experiment", std::string()) == "maximal") {
        if (cfg.contains("params") && cfg["params"].is_object()) cfg["params"]["seed"] = seed;
    } else if (cfg.contains("mc") && cfg["mc"].is_object()) {
        cfg["mc"]["seed"] = seed;
    }
}

inline json seed_of(const json& cfg) {
    if (cfg.contains("mc") && cfg.at("mc").contains("seed")) return cfg.at("mc").at("seed");
    if (cfg.contains("params") && cfg.at("params").contains("seed")) return cfg.at("params").at("seed");
    return nullptr;
}

}  // namespace detail

inline json invalid_summary(const std::vector<std::string>& violations) {
    return {{"status", "invalid"}, {"violations", violations}};
}

/// Validates, runs and persists one experiment under <out>/<experiment>-<hash>.
inline RunOutcome run_experiment(json cfg, Experiment expected, const RunOptions& opt) {
    if (opt.seed) detail::apply_seed(cfg, *opt.seed);
    const ValidationResult v = validate_config(cfg, expected);
    if (!v.ok()) return {2, {}, invalid_summary(v.violations)};

    const std::string hash = config_hash(cfg);
    const std::filesystem::path dir = opt.out_dir / (to_string(expected) + "-" + hash);
    std::filesystem::create_directories(dir);
    const unsigned threads = opt.threads == 0 ? default_thread_count() : opt.threads;

    Artifacts art;
    art.report["experiment"] = to_string(expected);
    art.report["config_hash"] = hash;
    art.report["config"] = cfg;
    const auto t0 = std::chrono::steady_clock::now();
    json failure;
    try {
        detail::dispatch(expected, cfg, threads, art);
        art.report["status"] = "ok";
    } catch (const std::exception& e) {
        failure = {{"status", "failed"}, {"experiment", to_string(expected)}, {"error_type", error_type(e)}, {"message", e.what()}};
        art.report["status"] = "failed";
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<std::string> files = flush_artifacts(art, dir);
    if (!failure.is_null()) {
        write_file(dir / "failure.json", failure.dump(2) + "\n");
        files.push_back("failure.json");
    }
    const json manifest{{"config_hash", hash},
                        {"code_version", kCodeVersion},
                        {"experiment", to_string(expected)},
                        {"wall_time_seconds", wall},
                        {"seed", detail::seed_of(cfg)},
                        {"threads", threads},
                        {"status", failure.is_null() ? "ok" : "failed"},
                        {"files", files}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    RunOutcome out;
    out.exit_code = failure.is_null() ? 0 : 1;
    out.run_dir = dir;
    out.summary = failure.is_null() ? json{{"status", "ok"}, {"run_dir", dir.string()}, {"files", files}}
                                    : json{{"status", "failed"}, {"run_dir", dir.string()}, {"failure", failure}};
    return out;
}

}  // namespace sdde::cli
