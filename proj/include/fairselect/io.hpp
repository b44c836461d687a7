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

#ifndef FAIRSELECT_IO_HPP_
#define FAIRSELECT_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fairselect/monte_carlo.hpp"
#include "fairselect/types.hpp"

// Text-only serialization: the versioned JSON model file ("v1"), CSV group
// score tables (per-group CDF and performance columns), and trade-off curve
// emission. Formats are documented in the README.

namespace fairselect::io {

struct ModelMetadata {
  std::string source;
  std::vector<std::string> group_labels;  // empty or exactly two
};

// Parses and validates a v1 model file. Throws ParseError (with line and
// column), SchemaError (naming the field), or the model-invariant errors
// from build_model.
PopulationModel load_model(const std::filesystem::path& path);
PopulationModel load_model(std::istream& in, const std::string& source_name);

// Lossless round-trip: numbers are written with shortest-round-trip
// precision and keys in a fixed order.
std::string emit_model(const PopulationModel& model,
                       const ModelMetadata& metadata = {});
void save_model(const PopulationModel& model, const std::filesystem::path& path,
                const ModelMetadata& metadata = {});

// One group's columns from a score table: cumulative score distribution and
// non-default rate Pr{Y=1 | R=rho, A=group} at each support point.
struct GroupColumns {
  std::string label;
  VectorXd cdf;
  VectorXd perf;
};

struct GroupScoreTable {
  VectorXd raw_scores;  // ascending, as in the file
  VectorXd support;     // normalized to [0,1] via (s - raw_min)/(raw_max - raw_min)
  std::vector<GroupColumns> groups;

  const GroupColumns& group(const std::string& label) const;
};

struct GroupTableOptions {
  double raw_min = 350.0;  // credit-score convention; set 0/1 for unit data
  double raw_max = 850.0;
  bool percent = false;    // divide cdf and perf columns by 100
  int digits = ScoreSupport::kDefaultDigits;
};

// Loads matching CDF and performance CSVs (header: score,<g1>,<g2>,...).
// Throws ParseError, NonMonotoneCdf, or InconsistentSupport.
GroupScoreTable load_group_tables(const std::filesystem::path& cdf_csv,
                                  const std::filesystem::path& perf_csv,
                                  const GroupTableOptions& options = {});

// How to assemble a two-group model from named table columns. Each side may
// merge several groups by mixture weights (e.g. 0.64/0.36); prior_a0 is
// Pr{A = group-0 side} and must be supplied explicitly.
struct GroupMergeSpec {
  std::vector<std::string> group0;
  std::vector<double> weights0;  // same length as group0, summing to 1
  std::vector<std::string> group1;
  std::vector<double> weights1;
  double prior_a0 = 0.5;
};

// PMFs from CDF first differences; qualified/unqualified conditionals by
// Bayes from the non-default rates:
//   f_{R|A,Y=1} proportional to perf(rho) * f_{R|A}(rho),
//   qual_rate   = sum_rho perf(rho) * f_{R|A}(rho).
// The output always satisfies the model invariants or throws.
PopulationModel from_group_tables(const GroupScoreTable& table,
                                  const GroupMergeSpec& spec);

enum class CurveFormat { kCsv, kJson };

// Stable column order epsilon,gamma,gamma_ci,theta,theta_ci,m,notion,
// exact_flag; numbers at 12 significant digits; byte-stable across platforms.
std::string emit_curve(const mc::TradeoffCurve& curve, CurveFormat format);

}  // namespace fairselect::io

#endif  // FAIRSELECT_IO_HPP_
