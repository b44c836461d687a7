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

#ifndef FAIRSELECT_ANALYSIS_HPP_
#define FAIRSELECT_ANALYSIS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairselect/types.hpp"

// Solvers on the gamma(eps) curve (perfect-fairness root, constrained
// accuracy optimum, fairer-than-baseline threshold) and checkers for the
// sufficient conditions under which each regime is guaranteed.

namespace fairselect::analysis {

enum class Theorem {
  kRootExists,        // m=1: opposite signs of selection and score advantages
  kAlwaysBiased,      // structured PMFs force gamma > 0 for all eps > 0
  kRootExistsSubset,  // m>1 analogue via subset inclusion probabilities
  kRootExistsScoreFn, // m>1 with rms/min/max aggregate conditions
  kRootExistsDp,      // demographic-parity analogue (unconditional on Y)
};

enum class Verdict { kSatisfied, kViolated, kNearViolation };

const char* to_string(Theorem t);
const char* to_string(Verdict v);

struct ConditionReport {
  Theorem theorem = Theorem::kRootExists;
  std::map<std::string, double> condition_values;
  Verdict verdict = Verdict::kViolated;
  // Group favored in scores (the "a" of the conditions); -1 when none.
  int direction = -1;
  std::string notes;
};

enum class EnginePath { kAuto, kExact, kMonteCarlo };

struct AnalysisOptions {
  EnginePath engine = EnginePath::kAuto;
  long samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-6;       // |gamma| tolerance at a root
  double hi = 32768.0;     // upper end of the bracket scan
  FairnessNotion notion = FairnessNotion::kEqualOpportunity;
};

// Evaluates one theorem's sufficient conditions. Expected values come from
// the exact engine when the instance fits the budget, otherwise from Monte
// Carlo; with Monte Carlo a confidence interval straddling an inequality
// yields kNearViolation.
ConditionReport check_conditions(const PopulationModel& model,
                                 const SelectionConfig& config, Theorem theorem,
                                 const AnalysisOptions& options = {});

// All theorems applicable to the given config.
std::vector<ConditionReport> check_all_conditions(
    const PopulationModel& model, const SelectionConfig& config,
    const AnalysisOptions& options = {});

enum class SolveKind {
  kPerfectFairnessRoot,
  kConstrainedOptimum,
  kFairnessThreshold,
};

enum class SolveStatus {
  kFound,
  kNoRootBracketed,
  kDegenerate,   // gamma identically zero on the scan
  kInfeasible,
};

const char* to_string(SolveKind k);
const char* to_string(SolveStatus s);

struct SolveResult {
  double epsilon_star = 0.0;
  SolveKind kind = SolveKind::kPerfectFairnessRoot;
  SolveStatus status = SolveStatus::kFound;
  double achieved_gamma = 0.0;
  double achieved_theta = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  long evaluations = 0;
  bool degenerate_identically_zero = false;
  bool mlr_holds = false;
  bool theta_monotonicity_guaranteed = false;
  bool non_monotone_gamma = false;  // multiple feasibility transitions seen
  bool hit_ci_floor = false;        // Monte Carlo could not resolve the sign
  double gamma_ci_at_root = 0.0;
  // All sign-change brackets found on the scan grid (smallest root returned).
  std::vector<std::pair<double, double>> sign_changes;
};

// Finds eps_o > 0 with |gamma(eps_o)| <= tol by a geometric bracket scan
// (0.01 * 2^k up to options.hi) followed by bisection. Returns the smallest
// positive root; all bracketed sign changes are reported. Status
// kNoRootBracketed when gamma never crosses zero on the scanned range, and
// kDegenerate with the identically-zero flag when gamma vanishes everywhere.
SolveResult solve_perfect_fairness(const PopulationModel& model,
                                   const SelectionConfig& config,
                                   const AnalysisOptions& options = {});

// eps* = eps_max when |gamma(eps_max)| <= gamma_max, otherwise the largest
// eps <= eps_max with |gamma(eps)| = gamma_max. When the monotone likelihood
// ratio check fails, theta monotonicity is not guaranteed and the solver
// falls back to a feasible grid search maximizing theta; the result carries
// both flags.
SolveResult solve_constrained_optimum(const PopulationModel& model,
                                      const SelectionConfig& config,
                                      double epsilon_max, double gamma_max,
                                      const AnalysisOptions& options = {});

// Largest scanned eps with |gamma(eps)| < |gamma_inf| - tol (the region
// strictly fairer than the argmax baseline). Monotone-gamma models return
// the full scanned range; gamma_inf = 0 reports kDegenerate.
SolveResult fairness_threshold(const PopulationModel& model,
                               const SelectionConfig& config,
                               const AnalysisOptions& options = {});

struct Table1Row {
  int m = 1;
  double eps_o = 0.0;
  double theta_at_eps_o = 0.0;
  double theta_inf = 0.0;
  double reduction_pct = 0.0;  // (theta_inf - theta(eps_o)) / theta_inf * 100
  SolveStatus status = SolveStatus::kFound;
};

// Accuracy/privacy-under-perfect-fairness rows, one per m. When no positive
// root exists the row reports eps_o = 0 and theta(0), by convention.
std::vector<Table1Row> accuracy_reduction_table(
    const PopulationModel& model, const SelectionConfig& base_config,
    const std::vector<int>& m_list, const AnalysisOptions& options = {});

}  // namespace fairselect::analysis

#endif  // FAIRSELECT_ANALYSIS_HPP_
