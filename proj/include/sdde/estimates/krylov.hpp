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
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sdde/core/conditions.hpp"
#include "sdde/core/errors.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/estimates/bound_report.hpp"
#include "sdde/sde/ensemble.hpp"

namespace sdde {

/// Nonnegative test function f(t, x) with its mixed norm over [0, T].
struct KrylovTestFunction {
    std::string id;
    int dim = 1;
    std::function<double(double, std::span<const double>)> eval;
    double p_prime = 2.0;
    double q_prime = 2.0;
    double norm_analytic = 0.0;

    void validate() const {
        if (!eval) throw ConfigError("KrylovTestFunction: missing evaluation handle");
        if (!validate_pq(dim, p_prime, q_prime, 2.0))
            throw DomainError("KrylovTestFunction " + id + ": d/p' + 2/q' = " +
                              std::to_string(pq_exponent(dim, p_prime, q_prime)) + " >= 2");
    }
};

inline double unit_ball_volume(int d) {
    if (d == 1) return 2.0;
    if (d == 2) return std::numbers::pi;
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

inline KrylovTestFunction zero_test_function(int d) {
    return {"zero", d, [](double, std::span<const double>) { return 0.0; }, 2.0, 2.0, 0.0};
}

/// 1 on [0, T] x [-R, R]^d.
inline KrylovTestFunction box_indicator(int d, double R, double T, double p_prime = 2.0, double q_prime = 2.0) {
    const double vol = std::pow(2.0 * R, d);
    return {"box_indicator", d,
            [R](double, std::span<const double> x) {
                for (double v : x)
                    if (std::abs(v) > R) return 0.0;
                return 1.0;
            },
            p_prime, q_prime, std::pow(vol, 1.0 / p_prime) * std::pow(T, 1.0 / q_prime)};
}

/// eps^{-d/p'} 1_{|x| <= eps/2}: mixed norm independent of eps.
inline KrylovTestFunction shrinking_indicator(int d, double eps, double T, double p_prime, double q_prime) {
    const double height = std::pow(eps, -d / p_prime);
    const double radius = eps / 2.0;
    const double norm = std::pow(unit_ball_volume(d) * std::pow(0.5, d), 1.0 / p_prime) * std::pow(T, 1.0 / q_prime);
    return {"shrinking_indicator_eps_" + std::to_string(eps), d,
            [height, radius](double, std::span<const double> x) { return euclidean_norm(x) <= radius ? height : 0.0; },
            p_prime, q_prime, norm};
}

inline std::vector<KrylovTestFunction> shrinking_family(int d, const std::vector<double>& eps, double T,
                                                        double p_prime = 2.0, double q_prime = 2.0) {
    std::vector<KrylovTestFunction> out;
    for (double e : eps) out.push_back(shrinking_indicator(d, e, T, p_prime, q_prime));
    return out;
}

struct KrylovReport {
    /// One occupation bound per test function; rhs is fitted_constant * norm.
    std::vector<BoundReport> bounds;
    /// Smallest C with the upper confidence limit of E int f_i dt at most C ||f_i||.
    double fitted_constant = 0.0;
    /// E exp(int f) on N, 2N, 4N paths, per test function.
    std::vector<std::vector<McEstimate>> exp_ladders;
    bool exp_stable = true;
};

/// Occupation integrals int_0^T f(t, X(t)) dt (left rule) over the ensemble.
inline KrylovReport krylov_check(const Ensemble& ensemble, const std::vector<KrylovTestFunction>& family) {
    if (family.empty()) throw ConfigError("krylov_check: empty test-function family");
    for (const auto& f : family) {
        f.validate();
        if (f.dim != ensemble.config().grid.dim()) throw ConfigError("krylov_check: dimension mismatch");
    }
    const TimeGrid& g = ensemble.config().grid;
    const std::size_t nf = family.size();
    const auto occ = ensemble.map<std::vector<double>>([&](const PathResult& r, std::size_t) {
        std::vector<double> acc(nf, 0.0);
        for (std::size_t k = 0; k < g.n_steps(); ++k) {
            const double t = static_cast<double>(k) * g.step();
            const auto x = r.path.at_step(k);
            for (std::size_t i = 0; i < nf; ++i) acc[i] += family[i].eval(t, x) * g.step();
        }
        return acc;
    });
    KrylovReport rep;
    std::vector<double> col(occ.size()), ecol(occ.size());
    for (std::size_t i = 0; i < nf; ++i) {
        for (std::size_t j = 0; j < occ.size(); ++j) {
            col[j] = occ[j][i];
            ecol[j] = std::exp(occ[j][i]);
        }
        BoundReport b;
        b.name = "krylov_occupation_" + family[i].id;
        b.lhs = estimate_mean(col);
        b.parameters = {{"p_prime", family[i].p_prime}, {"q_prime", family[i].q_prime},
                        {"norm", family[i].norm_analytic}, {"T", g.horizon()}, {"h", g.step()}};
        rep.bounds.push_back(b);
        if (family[i].norm_analytic > 0.0)
            rep.fitted_constant = std::max(rep.fitted_constant, b.lhs.upper() / family[i].norm_analytic);
        if (ecol.size() >= 4) {
            rep.exp_ladders.push_back(prefix_ladder(ecol, ecol.size() / 4, 3));
            rep.exp_stable = rep.exp_stable && mutually_consistent(rep.exp_ladders.back());
        }
    }
    for (std::size_t i = 0; i < nf; ++i) {
        rep.bounds[i].rhs = rep.fitted_constant * family[i].norm_analytic;
        rep.bounds[i].parameters["fitted_constant"] = rep.fitted_constant;
    }
    return rep;
}

}  // namespace sdde
