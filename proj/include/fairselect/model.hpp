// Copyright 2026 The fairselect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSELECT_MODEL_HPP_
#define FAIRSELECT_MODEL_HPP_

#include <array>
#include <optional>
#include <utility>

#include "fairselect/types.hpp"

namespace fairselect {

// Tolerance on PMF normalization at input; PMFs are re-normalized after
// validation to remove residual error (CSV round-trips leave ~1e-12 dust).
inline constexpr double kPmfTolerance = 1e-9;

// Validates all inputs and returns a model with re-normalized PMFs.
//
// Throws UnsortedSupport, OutOfRangeProbability, or NonNormalizedPmf. PMF
// errors name the offending component as "score_pmf.a<A>_y<Y>".
PopulationModel build_model(ScoreSupport support, double prior_a0,
                            std::array<double, 2> qual_rates,
                            std::array<std::array<VectorXd, 2>, 2> score_pmfs);

// All marginals the rest of the system needs, by the law of total
// probability over (A, Y). Deterministic: identical inputs give identical
// outputs bit for bit.
DerivedMarginals derive_marginals(const PopulationModel& model);

struct MlrResult {
  bool holds = false;
  // On failure, the violating support values (rho, rho') with rho > rho' and
  // ratio(rho) < ratio(rho').
  std::optional<std::pair<double, double>> witness;
};

// Monotone likelihood ratio check between f_{R|Y=1} and f_{R|Y=0}: true iff
// the ratio is nondecreasing over support points where f_{R|Y=0} > 0.
// Points with f_{R|Y=0} = 0 but f_{R|Y=1} > 0 are an infinite ratio and must
// only appear above every finite-ratio point; points with both zero carry no
// mass and impose no constraint.
MlrResult check_mlr(const PopulationModel& model);

}  // namespace fairselect

#endif  // FAIRSELECT_MODEL_HPP_
