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

#ifndef FAIRSELECT_DETAIL_SUBSETS_HPP_
#define FAIRSELECT_DETAIL_SUBSETS_HPP_

#include <span>
#include <vector>

#include "fairselect/types.hpp"

// Inclusion probabilities of one distinguished applicant among a realized
// score multiset, grouped by support level. Applicants at the same level are
// exchangeable, so subsets reduce to per-level member-count compositions
// with hypergeometric sharing: among subsets with composition k, a specific
// applicant at level t belongs to the fraction k[t]/total[t].

namespace fairselect::detail {

using int128 = __int128;

// Aggregate score of a subset given member counts per level.
double subset_value_from_counts(const ScoreSupport& support,
                                const std::vector<int>& k, int m,
                                ScoreKind kind);

// Exact integer tie key ordered like subset_value_from_counts.
int128 subset_key_from_counts(const ScoreSupport& support,
                              const std::vector<int>& k, ScoreKind kind);

struct SubsetWork {
  std::vector<double> mult, val;
  std::vector<int> k_at_t;
};

// Exponential-mechanism inclusion probability of a specific applicant at
// level t; total_counts covers all n applicants (t included).
double enumerated_mechanism_inclusion(const ScoreSupport& support,
                                      std::span<const int> total_counts, int t,
                                      int m, ScoreKind kind, double eps,
                                      double delta, SubsetWork& work);

// Argmax-baseline analogue: uniform over the subsets attaining the maximal
// aggregate, ties decided on exact integer keys.
double enumerated_baseline_inclusion(const ScoreSupport& support,
                                     std::span<const int> total_counts, int t,
                                     int m, ScoreKind kind, SubsetWork& work);

// Baseline inclusion for aggregates strictly increasing in each member's
// score (mean, rms on a nonnegative support): every maximal subset takes all
// applicants strictly above the threshold level plus d of the c tied at it.
double topm_inclusion_from_counts(std::span<const int> total_counts, int t,
                                  int m);

}  // namespace fairselect::detail

#endif  // FAIRSELECT_DETAIL_SUBSETS_HPP_
