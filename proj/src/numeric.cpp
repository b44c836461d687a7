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

#include "fairselect/detail/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace fairselect::detail {

double choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= static_cast<double>(n - k + i);
    r /= static_cast<double>(i);
  }
  return r;
}

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double binomial_level_factor(int consumed, int c, double p) {
  if (c == 0) return 1.0;
  if (p == 0.0) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= c; ++i) {
    r *= static_cast<double>(consumed + i) / static_cast<double>(i) * p;
  }
  return r;
}

double count_vector_cardinality(int total, int levels) {
  return choose(static_cast<std::int64_t>(total) + levels - 1, levels - 1);
}

bool esp_counts(std::span<const double> weights, std::span<const int> counts,
                int m, std::vector<double>& e) {
  e.assign(m + 1, 0.0);
  e[0] = 1.0;
  int done = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    double w = weights[j];
    for (int rep = 0; rep < counts[j]; ++rep) {
      ++done;
      int hi = std::min(m, done);
      for (int k = hi; k >= 1; --k) e[k] += w * e[k - 1];
    }
  }
  // Subnormal e_m or e_{m-1} would wreck the inclusion ratio; signal the
  // caller to redo this vector in log space.
  constexpr double kFloor = 1e-280;
  return e[m] >= kFloor && (m == 0 || e[m - 1] >= kFloor);
}

void esp_counts_log(std::span<const double> log_weights,
                    std::span<const int> counts, int m,
                    std::vector<double>& l) {
  l.assign(m + 1, kNegInf);
  l[0] = 0.0;
  int done = 0;
  for (std::size_t j = 0; j < log_weights.size(); ++j) {
    double x = log_weights[j];
    for (int rep = 0; rep < counts[j]; ++rep) {
      ++done;
      int hi = std::min(m, done);
      for (int k = hi; k >= 1; --k) l[k] = log_add_exp(l[k], x + l[k - 1]);
    }
  }
}

}  // namespace fairselect::detail
