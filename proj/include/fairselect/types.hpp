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

#ifndef FAIRSELECT_TYPES_HPP_
#define FAIRSELECT_TYPES_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fairselect {

using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonNormalizedPmf : Error { using Error::Error; };
struct UnsortedSupport : Error { using Error::Error; };
struct OutOfRangeProbability : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
// Oracle-side cap; distinct from BudgetExceeded so tests can tell the two
// enumeration guards apart.
struct LimitExceeded : Error { using Error::Error; };
struct EngineInvariantViolation : Error { using Error::Error; };

struct ParseError : Error {
  ParseError(const std::string& msg, int line_, int column_)
      : Error(msg), line(line_), column(column_) {}
  int line = 0;
  int column = 0;
};

struct SchemaError : Error {
  SchemaError(const std::string& msg, std::string field_)
      : Error(msg), field(std::move(field_)) {}
  std::string field;
};

struct NonMonotoneCdf : Error { using Error::Error; };
struct InconsistentSupport : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Score support
// ---------------------------------------------------------------------------

// Finite, strictly increasing set of score levels in [0, 1]. Values are
// quantized to a fixed number of fractional decimal digits so that equality
// of scores (and of subset aggregates, via the integer keys) is exact.
class ScoreSupport {
 public:
  static constexpr int kDefaultDigits = 6;

  ScoreSupport() = default;
  explicit ScoreSupport(VectorXd values, int digits = kDefaultDigits);

  int size() const { return static_cast<int>(values_.size()); }
  const VectorXd& values() const { return values_; }
  double value(int i) const { return values_[i]; }
  // Integer key: value(i) == key(i) / 10^digits exactly.
  std::int64_t key(int i) const { return keys_[i]; }
  int digits() const { return digits_; }
  double scale() const { return scale_; }  // 10^digits

  double min_value() const { return values_[0]; }
  double max_value() const { return values_[values_.size() - 1]; }
  double range() const { return max_value() - min_value(); }

 private:
  VectorXd values_;
  std::vector<std::int64_t> keys_;
  int digits_ = kDefaultDigits;
  double scale_ = 1e6;
};

// ---------------------------------------------------------------------------
// Population model
// ---------------------------------------------------------------------------

// Joint distribution of (A, Y, R): binary protected attribute A, binary
// qualification state Y, and qualification score R over a finite support.
struct PopulationModel {
  ScoreSupport support;
  double prior_a0 = 0.5;                // Pr{A=0}
  std::array<double, 2> qual_rate{};    // Pr{Y=1|A=a}
  // score_pmf[a][y] = f_{R|A=a,Y=y}
  std::array<std::array<VectorXd, 2>, 2> score_pmf;

  const VectorXd& pmf(int a, int y) const { return score_pmf[a][y]; }
  double pr_a(int a) const { return a == 0 ? prior_a0 : 1.0 - prior_a0; }
  // f_{R|A=a} = sum_y Pr{Y=y|A=a} f_{R|A=a,Y=y}
  VectorXd pmf_given_a(int a) const;
};

// Marginals derived from a PopulationModel by the law of total probability.
struct DerivedMarginals {
  VectorXd f_r;            // marginal PMF of R
  VectorXd f_r_given_y1;   // f_{R|Y=1}
  VectorXd f_r_given_y0;   // f_{R|Y=0}
  std::array<double, 2> mean_r_qualified{};  // E{R|A=a,Y=1}
  double pr_y1 = 0.0;      // Pr{Y=1}
};

// ---------------------------------------------------------------------------
// Selection configuration
// ---------------------------------------------------------------------------

enum class ScoreKind { kMean, kRms, kMin, kMax };
enum class FairnessNotion { kEqualOpportunity, kDemographicParity };

const char* to_string(ScoreKind kind);
const char* to_string(FairnessNotion notion);

struct SelectionConfig {
  int n = 2;                              // pool size
  int m = 1;                              // number of selections
  ScoreKind score_kind = ScoreKind::kMean;
  double epsilon = 0.0;

  // Throws Error on violated invariants (m >= n, non-finite epsilon, ...).
  void validate() const;
};

// Sensitivity of the aggregate score function under a single-coordinate
// change, by kind. For m = 1 all kinds coincide with the identity score and
// the sensitivity is the support range. For the mean kind it is range/m; for
// min/max the range; for rms the conservative bound max_value.
double sensitivity(const ScoreSupport& support, const SelectionConfig& config);

// ---------------------------------------------------------------------------
// Result value types
// ---------------------------------------------------------------------------

struct FairnessGap {
  double gamma = 0.0;
  FairnessNotion notion = FairnessNotion::kEqualOpportunity;
};

struct Accuracy {
  double theta = 0.0;
};

}  // namespace fairselect

#endif  // FAIRSELECT_TYPES_HPP_
