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

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sdde/core/mc_estimate.hpp"

namespace sdde {

/// A left-hand side estimate against an analytic right-hand side.
struct BoundReport {
    std::string name;
    McEstimate lhs;
    /// +inf when only boundedness is checked.
    double rhs = std::numeric_limits<double>::infinity();
    std::map<std::string, double> parameters;
    /// Nested-prefix estimates (N, 2N, 4N) when available.
    std::vector<McEstimate> ladder;
    std::string note;

    bool has_rhs() const noexcept { return std::isfinite(rhs); }
    bool satisfied() const noexcept { return std::isfinite(lhs.mean) && lhs.upper() <= rhs; }
    bool stable() const noexcept { return ladder.empty() || mutually_consistent(ladder); }
};

}  // namespace sdde
