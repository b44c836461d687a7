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

#ifndef FAIRSELECT_MONTE_CARLO_HPP_
#define FAIRSELECT_MONTE_CARLO_HPP_

#include <cstdint>
#include <vector>

#include "fairselect/types.hpp"

// Conditional Monte Carlo estimators: each draw realizes the score vector
// and evaluates the inclusion probability Z / W analytically (a
// Rao-Blackwellized estimator), rather than drawing a selection. Curves use
// common random numbers across the epsilon grid and across groups, so
// differences and root finding see smooth noise.

namespace fairselect::mc {

enum class EstimatorKind {
  kGammaEo,
  kGammaDp,
  kTheta,
  kEZCond,
  kEWCond,
  kERCond,
};

struct Estimate {
  double mean = 0.0;
  double half_width_95 = 0.0;  // 1.96 * sample std / sqrt(samples)
  long samples = 0;
  EstimatorKind estimator = EstimatorKind::kEZCond;
};

enum class Condition { kA0Y1, kA1Y1, kA0, kA1, kY1 };
enum class Target { kZ, kW, kR };

struct McOptions {
  long samples = 10000;  // the experiment convention elsewhere in the repo
  std::uint64_t seed = 1;
  int chunks = 32;
  // Evaluate the argmax-baseline variable (the eps -> infinity limit)
  // instead of the finite-eps mechanism.
  bool argmax_limit = false;
};

// Unbiased estimate of E{target | condition}: the conditioned applicant's
// score is drawn from the conditional PMF, the n-1 peers iid from the
// marginal, and the target is evaluated exactly per draw. Throws
// BudgetExceeded for non-mean kinds past the enumeration limit and Error for
// samples < 1000.
Estimate estimate_conditional_expectation(const PopulationModel& model,
                                          const SelectionConfig& config,
                                          Condition condition, Target target,
                                          const McOptions& options);

struct TradeoffPoint {
  double epsilon = 0.0;
  double gamma = 0.0;
  double gamma_ci = 0.0;  // 95% half width; 0 for exact points
  double theta = 0.0;
  double theta_ci = 0.0;
  bool exact = false;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
  int n = 0;
  int m = 1;
  FairnessNotion notion = FairnessNotion::kEqualOpportunity;
  ScoreKind score_kind = ScoreKind::kMean;
};

// Monte Carlo trade-off curve over an ascending epsilon grid with shared
// draws across grid points.
TradeoffCurve estimate_tradeoff_curve(const PopulationModel& model,
                                      const SelectionConfig& config,
                                      FairnessNotion notion,
                                      const std::vector<double>& epsilon_grid,
                                      const McOptions& options);

// Exact-engine curve over the same grid (ci = 0, exact = true).
TradeoffCurve exact_tradeoff_curve(const PopulationModel& model,
                                   const SelectionConfig& config,
                                   FairnessNotion notion,
                                   const std::vector<double>& epsilon_grid);

}  // namespace fairselect::mc

#endif  // FAIRSELECT_MONTE_CARLO_HPP_
