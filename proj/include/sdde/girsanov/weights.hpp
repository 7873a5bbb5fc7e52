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

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sdde/coefficients/specs.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/sde/engine.hpp"
#include "sdde/sde/ensemble.hpp"

namespace sdde {

/// theta at step k of a path; may read the path up to and including step k.
using ThetaFn = std::function<void(std::size_t, const SamplePath&, std::span<double>)>;
using PathPayoff = std::function<double(const SamplePath&)>;

/// Running stochastic exponential in log space.
struct WeightPath {
    std::vector<double> times;
    std::vector<double> log_weight;
    /// sum of theta_k . dW_k
    std::vector<double> stochastic_part;
    /// sum of |theta_k|^2 h
    std::vector<double> quadratic_term;

    double weight(std::size_t k) const { return std::exp(log_weight[k]); }
    double final_log_weight() const { return log_weight.back(); }
};

/// log W(t+h) = log W(t) + theta . dW - |theta|^2 h / 2 with theta read at the
/// left end point. log_weight is stored as stochastic_part - quadratic_term/2.
inline WeightPath weight_along_path(const SamplePath& path, const BrownianIncrements& increments,
                                    const ThetaFn& theta) {
    const TimeGrid& g = path.grid();
    const std::size_t n = g.n_steps();
    if (increments.n_steps() != n) throw ConfigError("weight_along_path: increments do not match the path grid");
    const auto d = static_cast<std::size_t>(g.dim());
    WeightPath w;
    w.times.resize(n + 1);
    w.log_weight.assign(n + 1, 0.0);
    w.stochastic_part.assign(n + 1, 0.0);
    w.quadratic_term.assign(n + 1, 0.0);
    std::vector<double> th(d);
    CompensatedSum stoch, quad;
    w.times[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        theta(k, path, th);
        const auto dw = increments.at(k);
        double dot = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            dot += th[i] * dw[i];
            sq += th[i] * th[i];
        }
        stoch.add(dot);
        quad.add(sq * g.step());
        w.times[k + 1] = static_cast<double>(k + 1) * g.step();
        w.stochastic_part[k + 1] = stoch.value();
        w.quadratic_term[k + 1] = quad.value();
        w.log_weight[k + 1] = w.stochastic_part[k + 1] - 0.5 * w.quadratic_term[k + 1];
    }
    return w;
}

/// Sum of log weights along the same noise (e.g. theta and -theta).
inline WeightPath compose(const WeightPath& a, const WeightPath& b) {
    WeightPath out = a;
    for (std::size_t k = 0; k < out.log_weight.size(); ++k) {
        out.stochastic_part[k] += b.stochastic_part[k];
        out.quadratic_term[k] += b.quadratic_term[k];
        out.log_weight[k] = a.log_weight[k] + b.log_weight[k];
    }
    return out;
}

/// Delta W~ = Delta W + theta h: the increments of the Brownian motion under
/// the measure that absorbs the drift theta. Weighting with theta against
/// these undoes a weight with -theta against the original noise.
inline BrownianIncrements shift_increments(const SamplePath& path, const BrownianIncrements& increments,
                                           const ThetaFn& theta) {
    const TimeGrid& g = path.grid();
    if (increments.n_steps() != g.n_steps()) throw ConfigError("shift_increments: increments do not match the path grid");
    BrownianIncrements out = increments;
    const auto d = static_cast<std::size_t>(g.dim());
    std::vector<double> th(d);
    for (std::size_t k = 0; k < g.n_steps(); ++k) {
        theta(k, path, th);
        for (std::size_t i = 0; i < d; ++i) out.values[k * d + i] += th[i] * g.step();
    }
    return out;
}

struct ThetaParts {
    bool drift = true;
    bool functional = false;
    double sign = 1.0;
    /// Apply the level-n truncation to b, as the engine does.
    std::optional<int> drift_cutoff_level;
};

/// theta = sign * sigma^{-1} (b + V) evaluated along the path.
inline ThetaFn drift_theta(const CoefficientSet& coeffs, ThetaParts parts) {
    return [coeffs, parts](std::size_t k, const SamplePath& path, std::span<double> out) {
        const TimeGrid& g = path.grid();
        const int d = g.dim();
        const auto du = static_cast<std::size_t>(d);
        const double t = static_cast<double>(k) * g.step();
        const auto x = path.at_step(k);
        std::vector<double> rhs(du, 0.0), tmp(du, 0.0), sigma(du * du);
        if (parts.drift && !coeffs.drift.is_zero) {
            const double cutoff = parts.drift_cutoff_level ? static_cast<double>(*parts.drift_cutoff_level)
                                                           : std::numeric_limits<double>::infinity();
            if (!(t > cutoff || euclidean_norm(x) > cutoff)) {
                coeffs.drift.eval(t, x, tmp);
                for (std::size_t i = 0; i < du; ++i) rhs[i] += tmp[i];
            }
        }
        if (parts.functional && !coeffs.functional.is_zero) {
            coeffs.functional.eval(t, path.segment_at_step(k), tmp);
            for (std::size_t i = 0; i < du; ++i) rhs[i] += tmp[i];
        }
        coeffs.diffusion.eval(t, x, sigma);
        if (d == 1) {
            if (sigma[0] == 0.0) throw LinearAlgebraError("drift_theta: singular diffusion matrix", t);
            out[0] = parts.sign * rhs[0] / sigma[0];
            return;
        }
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> s(sigma.data(), d, d);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
        if (!lu.isInvertible()) throw LinearAlgebraError("drift_theta: singular diffusion matrix", t);
        Eigen::Map<const Eigen::VectorXd> r(rhs.data(), d);
        const Eigen::VectorXd sol = lu.solve(r);
        for (std::size_t i = 0; i < du; ++i) out[i] = parts.sign * sol[static_cast<Eigen::Index>(i)];
    };
}

/// theta == c (deterministic constant vector).
inline ThetaFn constant_theta(std::vector<double> c) {
    return [c](std::size_t, const SamplePath&, std::span<double> out) { std::copy(c.begin(), c.end(), out.begin()); };
}

struct NovikovReport {
    /// Estimates of E exp(factor * int |theta|^2) on N, 2N, 4N paths.
    std::vector<McEstimate> ladder;
    McEstimate estimate;
    bool stable = false;
    double factor = 0.5;
};

/// Monte-Carlo Novikov diagnostic. The expectation is finite-stable when the
/// nested estimates agree within mutual 3-SE bands.
inline NovikovReport novikov_estimate(const Ensemble& ensemble, const ThetaFn& theta, std::size_t base_n,
                                      double factor = 0.5, int levels = 3) {
    const std::size_t need = base_n << (levels - 1);
    const Ensemble sized = ensemble.with_size(need);
    const auto samples = sized.map<double>([&](const PathResult& r, std::size_t) {
        const WeightPath w = weight_along_path(r.path, r.increments, theta);
        return std::exp(factor * w.quadratic_term.back());
    });
    NovikovReport rep;
    rep.factor = factor;
    rep.ladder = prefix_ladder(samples, base_n, levels);
    rep.estimate = rep.ladder.back();
    rep.stable = mutually_consistent(rep.ladder);
    return rep;
}

/// E[f(X)] under the drifted law as E[W(T) f(M)] over the driftless ensemble.
inline McEstimate reweighted_expectation(const Ensemble& driftless, const ThetaFn& theta, const PathPayoff& payoff) {
    if (driftless.mode() != EnsembleMode::driftless)
        throw ConfigError("reweighted_expectation: ensemble must be driftless");
    const auto samples = driftless.map<double>([&](const PathResult& r, std::size_t) {
        const WeightPath w = weight_along_path(r.path, r.increments, theta);
        return w.weight(w.log_weight.size() - 1) * payoff(r.path);
    });
    return estimate_mean(samples);
}

/// Plain Monte-Carlo estimate of E[f(X)].
inline McEstimate direct_expectation(const Ensemble& ensemble, const PathPayoff& payoff) {
    const auto samples = ensemble.map<double>([&](const PathResult& r, std::size_t) { return payoff(r.path); });
    return estimate_mean(samples);
}

/// E[W(t)] at the given steps; each should be 1 within its confidence band.
inline std::vector<McEstimate> weight_means(const Ensemble& ensemble, const ThetaFn& theta,
                                            const std::vector<std::size_t>& steps) {
    const auto per_path = ensemble.map<std::vector<double>>([&](const PathResult& r, std::size_t) {
        const WeightPath w = weight_along_path(r.path, r.increments, theta);
        std::vector<double> out;
        for (std::size_t k : steps) out.push_back(w.weight(k));
        return out;
    });
    std::vector<McEstimate> out;
    std::vector<double> col(per_path.size());
    for (std::size_t j = 0; j < steps.size(); ++j) {
        for (std::size_t i = 0; i < per_path.size(); ++i) col[i] = per_path[i][j];
        out.push_back(estimate_mean(col));
    }
    return out;
}

}  // namespace sdde
