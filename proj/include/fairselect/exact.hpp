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

#ifndef FAIRSELECT_EXACT_HPP_
#define FAIRSELECT_EXACT_HPP_

#include <array>

#include "fairselect/types.hpp"

// Exact evaluation of the fairness gap gamma(eps), the accuracy theta(eps),
// and their argmax-baseline limits, by combinatorial summation over peer
// count vectors on the finite support.
//
// For m = 1 the summand depends on the n-1 iid peer scores only through
// their counts per support level, so the sum runs over C(n-2+n', n'-1)
// multinomially weighted count vectors instead of (n')^(n-1) sequences. For
// m > 1 with the mean kind, subset weights factor into per-member products,
// and inclusion probabilities come from elementary-symmetric-polynomial
// recurrences in O(n*m) per count vector. Non-mean kinds (rms/min/max) are
// evaluated by enumerating member-count compositions of the realized score
// multiset, within a hard budget.

namespace fairselect::exact {

struct ExactBudget {
  double max_m1_count = 5e6;   // count vectors, m = 1 path
  double max_mean_ops = 1e8;   // count vectors * (n*m + n'), mean-kind path
  double max_subsets = 2e6;    // C(n, m), non-mean kinds
  // Beyond this pool size the multinomial level factors leave the range
  // where the double-precision path is trustworthy; callers should use
  // Monte Carlo.
  int max_n = 1000;
};

// True when the instance fits the exact path (used by the CLI's engine
// auto-selection).
bool within_budget(const PopulationModel& model, const SelectionConfig& config,
                   const ExactBudget& budget = {});

// One enumeration pass yields all three quantities.
struct ExactPoint {
  double gamma_eo = 0.0;  // E{sel|A=0,Y=1} - E{sel|A=1,Y=1}
  double gamma_dp = 0.0;  // E{sel|A=0}     - E{sel|A=1}
  double theta = 0.0;     // Pr{Y=1} * (n/m) * E{sel|Y=1}
};

// Throws BudgetExceeded when the instance is too large for the exact path
// and EngineInvariantViolation if the internal normalization check
// (sum of inclusion probabilities = m within 1e-12 relative) fails.
ExactPoint evaluate(const PopulationModel& model, const SelectionConfig& config,
                    const ExactBudget& budget = {});

FairnessGap gamma_exact(const PopulationModel& model,
                        const SelectionConfig& config,
                        FairnessNotion notion = FairnessNotion::kEqualOpportunity,
                        const ExactBudget& budget = {});

Accuracy theta_exact(const PopulationModel& model,
                     const SelectionConfig& config,
                     const ExactBudget& budget = {});

FairnessGap demographic_parity_gap(const PopulationModel& model,
                                   const SelectionConfig& config,
                                   const ExactBudget& budget = {});

// Non-private argmax baseline (uniform tie-breaking over the top set for
// m = 1, over the top subsets for m > 1), computed by enumeration over
// support count vectors, not by driving epsilon large.
struct LimitReport {
  std::array<double, 2> e_sel_given_ay1{};  // E{Z or W | A=a, Y=1}
  std::array<double, 2> e_sel_given_a{};    // E{Z or W | A=a}
  double gamma_eo = 0.0;
  double gamma_dp = 0.0;
  double theta = 0.0;
};

LimitReport limit_gamma_theta(const PopulationModel& model,
                              const SelectionConfig& config,
                              const ExactBudget& budget = {});

// d(gamma)/d(eps) at eps = 0. Closed form for the mean kind:
//   m * coeff(n, m) * (E{R|A=0,Y=1} - E{R|A=1,Y=1}) / range
// (see gamma_prime_zero_coefficient). Non-mean kinds route to central
// finite differences of the exact curve.
double gamma_prime_zero(const PopulationModel& model,
                        const SelectionConfig& config,
                        FairnessNotion notion = FairnessNotion::kEqualOpportunity,
                        const ExactBudget& budget = {});

// C(n-1,m-1) * C(n-1,m) / (2m * C(n,m)^2), which simplifies to
// (n-m)/(2n^2). The slope of gamma at 0 for the mean-kind mechanism is m
// times this value per unit of group mean difference: the subset mechanism's
// exponent scales member scores by eps/2 each, so the per-member slope
// aggregates m-fold.
double gamma_prime_zero_coefficient(int n, int m);

}  // namespace fairselect::exact

#endif  // FAIRSELECT_EXACT_HPP_
