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

#ifndef FAIRSELECT_ORACLE_HPP_
#define FAIRSELECT_ORACLE_HPP_

#include <vector>

#include "fairselect/types.hpp"

// Brute-force ground truth by literal enumeration over all score vectors in
// R^n (and, for accuracy, all joint qualification states) with explicit
// subset probabilities. No combinatorial shortcuts, no compensated
// summation: only meant for tiny instances, where any disagreement with the
// engine beyond 1e-10 is an engine bug. Shares nothing with the exact engine
// except the model types.

namespace fairselect::oracle {

struct OracleLimits {
  double max_joint_states = 1e7;  // cap on enumerated joint score states
  double max_subsets = 1e5;       // cap on C(n, m)
};

struct OracleResult {
  FairnessGap gap;
  Accuracy acc;
  // Unconditional per-applicant selection probabilities (each must be m/n by
  // exchangeability; a nontrivial check of the summation machinery).
  VectorXd selection_prob;
};

// Exponential-mechanism values by literal summation. Throws LimitExceeded.
OracleResult oracle_gamma_theta(const PopulationModel& model,
                                const SelectionConfig& config,
                                FairnessNotion notion,
                                const OracleLimits& limits = {});

// Argmax-baseline values (uniform tie-breaking over the top set/subsets) by
// the same literal enumeration.
OracleResult oracle_limit(const PopulationModel& model,
                          const SelectionConfig& config,
                          FairnessNotion notion,
                          const OracleLimits& limits = {});

// Per-applicant inclusion probabilities for one realized score vector
// (indices into the support), by explicit subset enumeration. Used by the
// sampler's distributional tests.
VectorXd selection_probabilities(const ScoreSupport& support,
                                 const std::vector<int>& score_levels,
                                 const SelectionConfig& config,
                                 const OracleLimits& limits = {});

// Same for the argmax baseline: uniform over the exact-tie top set.
VectorXd argmax_probabilities(const ScoreSupport& support,
                              const std::vector<int>& score_levels,
                              const SelectionConfig& config,
                              const OracleLimits& limits = {});

}  // namespace fairselect::oracle

#endif  // FAIRSELECT_ORACLE_HPP_
