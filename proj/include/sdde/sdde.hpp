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

#include "sdde/core/conditions.hpp"
#include "sdde/core/errors.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/norms.hpp"
#include "sdde/core/parallel.hpp"
#include "sdde/core/path.hpp"
#include "sdde/core/time_grid.hpp"
#include "sdde/rng/normal.hpp"
#include "sdde/rng/philox.hpp"
#include "sdde/coefficients/catalog.hpp"
#include "sdde/coefficients/probes.hpp"
#include "sdde/coefficients/specs.hpp"
#include "sdde/sde/engine.hpp"
#include "sdde/sde/ensemble.hpp"
#include "sdde/sde/localization.hpp"
#include "sdde/sde/stopping.hpp"
#include "sdde/girsanov/weights.hpp"
#include "sdde/zvonkin/pde.hpp"
#include "sdde/zvonkin/transform.hpp"
#include "sdde/estimates/bound_report.hpp"
#include "sdde/estimates/gronwall.hpp"
#include "sdde/estimates/krylov.hpp"
#include "sdde/estimates/maximal.hpp"
#include "sdde/estimates/moments.hpp"
#include "sdde/estimates/regularity.hpp"
