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

#ifndef FAIRSELECT_SAMPLER_HPP_
#define FAIRSELECT_SAMPLER_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "fairselect/types.hpp"

namespace fairselect {

// Seedable deterministic generator. The identity "mt19937_64/u53" (Mersenne
// twister with 53-bit mantissa uniforms) is part of the file-format contract
// so golden outputs are portable; std distributions are never used because
// their output is not pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) by rejection; exact for n <= 2^63.
  std::uint64_t next_below(std::uint64_t n);

  // Stream derivation for chunked work: mixes (seed, stream) through
  // splitmix64 so chunk generators are decorrelated and order-independent.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  static constexpr const char* kIdentity = "mt19937_64/u53";

 private:
  std::mt19937_64 gen_;
};

// A realized database: n support indices.
struct ScoreVector {
  std::vector<int> levels;
  int n() const { return static_cast<int>(levels.size()); }
};

enum class Mechanism { kExponential, kArgmax };

struct SelectionOutcome {
  std::vector<int> chosen;  // sorted, distinct, in [0, n)
  Mechanism mechanism = Mechanism::kExponential;
  std::uint64_t seed = 0;
};

// Draws n iid levels from the given PMF.
ScoreVector draw_scores(const VectorXd& pmf, int n, Rng& rng);

// Single selection with probability proportional to exp(eps * r_i / (2*Delta)).
SelectionOutcome select_one(const ScoreSupport& support,
                            const ScoreVector& scores, double epsilon,
                            std::uint64_t seed);

// m-subset selection with probability proportional to
// exp(eps * v(G) / (2*Delta)). The mean kind samples sequentially through a
// log-space elementary-symmetric-polynomial table in O(n*m) without
// enumerating subsets; other kinds enumerate within a budget
// (throws BudgetExceeded).
SelectionOutcome select_subset(const ScoreSupport& support,
                               const ScoreVector& scores,
                               const SelectionConfig& config,
                               std::uint64_t seed);

// Non-private baseline: uniform over the exactly-tied argmax set (m = 1) or
// over the subsets attaining the maximal aggregate (m > 1). Tie detection
// uses the exact integer score keys.
SelectionOutcome select_argmax(const ScoreSupport& support,
                               const ScoreVector& scores,
                               const SelectionConfig& config,
                               std::uint64_t seed);

// Exact per-applicant inclusion probabilities for one realized score vector
// under the exponential mechanism (the quantity the samplers above draw
// from). Non-mean kinds enumerate within budget.
VectorXd selection_probabilities(const ScoreSupport& support,
                                 const ScoreVector& scores,
                                 const SelectionConfig& config);

struct DPReport {
  double epsilon = 0.0;
  double max_ratio = 1.0;       // worst Pr{out|D} / Pr{out|D'} observed
  double bound = 1.0;           // exp(epsilon)
  int trials = 0;
  long neighbor_pairs = 0;
  bool pass = false;            // max_ratio <= bound * (1 + 1e-9)
};

// Empirical differential-privacy audit: for `trials` random score vectors
// and every single-coordinate neighbor (each coordinate changed to each
// other support value), computes the exact outcome distributions of the
// mechanism and the worst probability ratio in both directions. Uses exact
// probabilities, not sampled frequencies: the bound is about the mechanism's
// distribution, and sampling noise would force loose assertions.
DPReport verify_dp(const PopulationModel& model, const SelectionConfig& config,
                   int trials, std::uint64_t seed);

}  // namespace fairselect

#endif  // FAIRSELECT_SAMPLER_HPP_
