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

#include <string>

#include "sdde/core/errors.hpp"

namespace sdde {

/// d/p + 2/q < threshold. Threshold 1 is the drift integrability condition,
/// threshold 2 the admissible range of Krylov test functions.
inline bool validate_pq(int d, double p, double q, double threshold) {
    if (!(p > 1.0) || !(q > 1.0)) throw DomainError("validate_pq: p and q must exceed 1");
    if (threshold != 1.0 && threshold != 2.0) throw DomainError("validate_pq: threshold must be 1 or 2");
    if (d < 1) throw DomainError("validate_pq: dimension must be positive");
    return static_cast<double>(d) / p + 2.0 / q < threshold;
}

inline double pq_exponent(int d, double p, double q) { return static_cast<double>(d) / p + 2.0 / q; }

}  // namespace sdde
