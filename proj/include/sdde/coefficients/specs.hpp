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

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "sdde/core/conditions.hpp"
#include "sdde/core/errors.hpp"
#include "sdde/core/path.hpp"

namespace sdde {

/// (t, x, out): writes a vector in R^d.
using VectorField = std::function<void(double, std::span<const double>, std::span<double>)>;
/// (t, x, out): writes a d x d matrix, row-major.
using MatrixField = std::function<void(double, std::span<const double>, std::span<double>)>;
/// (t, lower corner, upper corner, out): cell average of a vector field.
using CellAverage =
    std::function<void(double, std::span<const double>, std::span<const double>, std::span<double>)>;
/// (t, segment, out): functional drift on C([-r,0], R^d).
using SegmentFunctional = std::function<void(double, const SegmentView&, std::span<double>)>;

/// Pointwise drift b with its declared mixed-norm integrability.
struct DriftSpec {
    std::string id = "zero";
    int dim = 1;
    VectorField eval;
    double p = 2.0;
    double q = 2.0;
    /// Closed-form ||b||_{L^q_p(0,T)} as a function of T, when known.
    std::function<double(double)> lqp_norm_analytic;
    bool singular = false;
    /// Declares d/p + 2/q < 1.
    bool claims_integrability = true;
    /// Optional exact cell averages; used by the PDE discretization.
    CellAverage cell_average;
    /// Radius outside which b vanishes (infinite when unbounded support).
    double support_radius = std::numeric_limits<double>::infinity();
    /// Time after which b vanishes.
    double support_time = std::numeric_limits<double>::infinity();
    bool is_zero = false;
};

/// sigma with ellipticity constant kappa.
struct DiffusionSpec {
    std::string id = "identity";
    int dim = 1;
    MatrixField eval;
    double kappa = 1.0;
    bool space_independent = true;
    /// Declared |grad sigma| in L^q_loc(L^p); recorded, not certified.
    bool grad_integrable = true;
};

/// Functional drift V with its growth bound g and optional Lipschitz constant.
struct FunctionalDriftSpec {
    std::string id = "zero";
    int dim = 1;
    SegmentFunctional eval;
    std::function<double(double)> growth_g;
    std::optional<double> lipschitz_K;
    bool is_zero = false;
};

struct CoefficientSet {
    DriftSpec drift;
    DiffusionSpec diffusion;
    FunctionalDriftSpec functional;
    int d = 1;

    void validate() const {
        if (drift.dim != d || diffusion.dim != d || functional.dim != d)
            throw DomainError("CoefficientSet: dimension mismatch between b, sigma and V");
        if (!drift.eval || !diffusion.eval || !functional.eval)
            throw DomainError("CoefficientSet: missing evaluation handle");
        if (!(diffusion.kappa >= 1.0)) throw DomainError("CoefficientSet: kappa must be >= 1");
        if (drift.claims_integrability && !validate_pq(d, drift.p, drift.q, 1.0))
            throw DomainError("CoefficientSet: drift claims integrability but d/p + 2/q >= 1");
    }
};

}  // namespace sdde
