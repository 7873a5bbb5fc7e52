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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sdde/coefficients/specs.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/norms.hpp"

namespace sdde {

struct QuadratureResolution {
    std::size_t time_cells = 16;
    std::size_t space_cells = 4096;  // per axis
    /// Half-width of the spatial box; defaults to 1.25 x the declared support.
    std::optional<double> halfwidth;
};

/// Tensor midpoint approximation of (int_0^T (int |b|^p dx)^{q/p} dt)^{1/q}.
/// Throws IntegrationError when the outer shell of the box still carries
/// mass, i.e. the box does not contain the effective support.
inline double lqp_norm_numeric(const DriftSpec& drift, double T, const QuadratureResolution& res = {}) {
    if (!(T > 0.0)) throw DomainError("lqp_norm_numeric: T must be positive");
    if (drift.is_zero) return 0.0;
    const int d = drift.dim;
    if (d > 2) throw DomainError("lqp_norm_numeric: d <= 2 supported");
    double L;
    if (res.halfwidth) {
        L = *res.halfwidth;
    } else if (std::isfinite(drift.support_radius)) {
        L = 1.25 * std::max(drift.support_radius, 1e-12);
    } else {
        throw IntegrationError("lqp_norm_numeric: drift '" + drift.id +
                               "' has unbounded support and no box was given");
    }
    const std::size_t nx = res.space_cells;
    const double dx = 2.0 * L / static_cast<double>(nx);
    const double dt = T / static_cast<double>(res.time_cells);
    const double p = drift.p;
    const double q = drift.q;
    std::vector<double> x(static_cast<std::size_t>(d)), v(static_cast<std::size_t>(d));

    auto shell = [&](std::size_t i) { return i < nx / 20 || i >= nx - nx / 20; };

    CompensatedSum time_sum;
    CompensatedSum total_mass;
    CompensatedSum shell_mass;
    for (std::size_t it = 0; it < res.time_cells; ++it) {
        const double t = (static_cast<double>(it) + 0.5) * dt;
        CompensatedSum space;
        auto visit = [&](bool on_shell) {
            drift.eval(t, x, v);
            const double mag = euclidean_norm(v);
            const double w = std::pow(mag, p);
            space.add(w);
            total_mass.add(w);
            if (on_shell) shell_mass.add(w);
        };
        if (d == 1) {
            for (std::size_t i = 0; i < nx; ++i) {
                x[0] = -L + (static_cast<double>(i) + 0.5) * dx;
                visit(shell(i));
            }
        } else {
            for (std::size_t i = 0; i < nx; ++i)
                for (std::size_t j = 0; j < nx; ++j) {
                    x[0] = -L + (static_cast<double>(i) + 0.5) * dx;
                    x[1] = -L + (static_cast<double>(j) + 0.5) * dx;
                    visit(shell(i) || shell(j));
                }
        }
        const double lp_p = space.value() * std::pow(dx, d);
        time_sum.add(std::pow(lp_p, q / p) * dt);
    }
    if (!std::isfinite(total_mass.value()))
        throw IntegrationError("lqp_norm_numeric: non-finite integrand for drift '" + drift.id + "'");
    if (total_mass.value() > 0.0 && shell_mass.value() > 1e-10 * total_mass.value())
        throw IntegrationError("lqp_norm_numeric: tail does not vanish on the outer 5% of [-" + std::to_string(L) +
                               ", " + std::to_string(L) + "]^d (shell fraction " +
                               std::to_string(shell_mass.value() / total_mass.value()) + ")");
    return std::pow(time_sum.value(), 1.0 / q);
}

struct EllipticityReport {
    double min_eig = std::numeric_limits<double>::infinity();
    double max_eig = 0.0;
    bool pass = false;
};

struct Probe {
    double t;
    std::vector<double> x;
};

/// Extreme eigenvalues of sigma sigma^T over the probe set; pass iff they lie
/// in [1/kappa, kappa].
inline EllipticityReport ellipticity_probe(const DiffusionSpec& diffusion, std::span<const Probe> probes) {
    const int d = diffusion.dim;
    EllipticityReport rep;
    std::vector<double> buf(static_cast<std::size_t>(d * d));
    for (const auto& pr : probes) {
        diffusion.eval(pr.t, pr.x, buf);
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> s(buf.data(), d, d);
        const Eigen::MatrixXd a = s * s.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        rep.min_eig = std::min(rep.min_eig, es.eigenvalues().minCoeff());
        rep.max_eig = std::max(rep.max_eig, es.eigenvalues().maxCoeff());
    }
    const double tol = 1e-12;
    rep.pass = !probes.empty() && rep.min_eig >= 1.0 / diffusion.kappa - tol && rep.max_eig <= diffusion.kappa + tol;
    return rep;
}

/// Probe set on a regular lattice of [-R, R]^d at the given times.
inline std::vector<Probe> lattice_probes(int d, double R, int per_axis, std::span<const double> times) {
    std::vector<Probe> out;
    const int total = d == 1 ? per_axis : per_axis * per_axis;
    for (double t : times)
        for (int k = 0; k < total; ++k) {
            Probe p{t, std::vector<double>(static_cast<std::size_t>(d))};
            int rem = k;
            for (int c = 0; c < d; ++c) {
                const int i = rem % per_axis;
                rem /= per_axis;
                p.x[static_cast<std::size_t>(c)] = -R + 2.0 * R * i / std::max(per_axis - 1, 1);
            }
            out.push_back(std::move(p));
        }
    return out;
}

struct SublinearityReport {
    bool pass = true;
    /// max |V| / (1 + ||x||_inf)
    double worst_ratio = 0.0;
    std::optional<std::size_t> witness;
    double witness_value = 0.0;
    double witness_bound = 0.0;
};

/// Checks |V(t, x)| <= g(||x||_inf) on every sample; the first violation is
/// reported as witness.
inline SublinearityReport sublinearity_probe(const FunctionalDriftSpec& functional,
                                             std::span<const PathSegment> segments, double t = 0.0) {
    SublinearityReport rep;
    std::vector<double> v(static_cast<std::size_t>(functional.dim));
    for (std::size_t i = 0; i < segments.size(); ++i) {
        functional.eval(t, segments[i].view(), v);
        const double mag = euclidean_norm(v);
        const double norm = sup_norm(segments[i]);
        const double bound = functional.growth_g(norm);
        rep.worst_ratio = std::max(rep.worst_ratio, mag / (1.0 + norm));
        if (mag > bound * (1.0 + 1e-12) + 1e-300 && !rep.witness) {
            rep.pass = false;
            rep.witness = i;
            rep.witness_value = mag;
            rep.witness_bound = bound;
        }
    }
    return rep;
}

struct LipschitzReport {
    bool pass = true;
    double worst_ratio = 0.0;
    std::optional<std::size_t> witness;
};

/// Checks |V(t,x) - V(t,y)| <= K ||x - y||_inf on the given pairs.
inline LipschitzReport lipschitz_probe(const FunctionalDriftSpec& functional,
                                       std::span<const std::pair<PathSegment, PathSegment>> pairs, double t = 0.0) {
    LipschitzReport rep;
    if (!functional.lipschitz_K) throw DomainError("lipschitz_probe: functional declares no Lipschitz constant");
    const double K = *functional.lipschitz_K;
    std::vector<double> a(static_cast<std::size_t>(functional.dim)), b(a.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        functional.eval(t, pairs[i].first.view(), a);
        functional.eval(t, pairs[i].second.view(), b);
        const double diff = euclidean_distance(a, b);
        const double dist = sup_distance(pairs[i].first.view(), pairs[i].second.view());
        if (dist > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, diff / dist);
        if (diff > K * dist * (1.0 + 1e-12) + 1e-14 && !rep.witness) {
            rep.pass = false;
            rep.witness = i;
        }
    }
    return rep;
}

}  // namespace sdde
