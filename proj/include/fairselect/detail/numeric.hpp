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

#ifndef FAIRSELECT_DETAIL_NUMERIC_HPP_
#define FAIRSELECT_DETAIL_NUMERIC_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fairselect::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Neumaier compensated accumulator. The enumeration sums mix terms spanning
// hundreds of orders of magnitude; plain accumulation loses the small ones.
class Kahan {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// Logistic function, safe for any finite or infinite argument.
inline double sigmoid(double x) {
  if (x >= 0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

// Binomial coefficient as a double. Exact for results below 2^53; the
// multiplicative loop keeps intermediates bounded by the result.
double choose(std::int64_t n, std::int64_t k);
double log_choose(std::int64_t n, std::int64_t k);

// C(consumed + c, c) * p^c with multiplications interleaved so intermediates
// stay bounded (consumed + c <= ~1000 keeps everything in double range).
double binomial_level_factor(int consumed, int c, double p);

// Visits every count vector c (length = pmf.size(), sum = total) together
// with its probability weight multinomial(total; c) * prod_j pmf[j]^{c[j]}.
// Zero-probability levels are pinned to zero count. Callback signature:
// fn(const std::vector<int>& counts, double weight).
template <typename F>
void for_each_score_count(const Eigen::VectorXd& pmf, int total, F&& fn) {
  const int levels = static_cast<int>(pmf.size());
  std::vector<int> counts(levels, 0);
  // DFS over levels; weight carried as a product of per-level factors.
  auto rec = [&](auto&& self, int level, int left, int consumed,
                 double weight) -> void {
    if (weight == 0.0) return;
    if (level == levels - 1) {
      if (pmf[level] == 0.0 && left > 0) return;
      counts[level] = left;
      fn(static_cast<const std::vector<int>&>(counts),
         weight * binomial_level_factor(consumed, left, pmf[level]));
      counts[level] = 0;
      return;
    }
    if (pmf[level] == 0.0) {
      counts[level] = 0;
      self(self, level + 1, left, consumed, weight);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[level] = c;
      self(self, level + 1, left - c, consumed + c,
           weight * binomial_level_factor(consumed, c, pmf[level]));
    }
    counts[level] = 0;
  };
  rec(rec, 0, total, 0, 1.0);
}

// Number of count vectors of `total` items over `levels` levels,
// C(total + levels - 1, levels - 1), saturating in double.
double count_vector_cardinality(int total, int levels);

// Elementary symmetric polynomials e_0..e_m of a weight multiset given as
// (weight, multiplicity) pairs. Linear-space variant; returns false when
// e_{m-1} or e_m underflowed so callers can fall back to log space.
bool esp_counts(std::span<const double> weights, std::span<const int> counts,
                int m, std::vector<double>& e);

// Log-space variant: l[k] = log e_k, robust for any weight spread.
void esp_counts_log(std::span<const double> log_weights,
                    std::span<const int> counts, int m,
                    std::vector<double>& l);

// Visits every composition k (0 <= k[j] <= cap[j], sum = m): the subset
// choices of a score multiset grouped by level. fn(const std::vector<int>&).
template <typename F>
void for_each_composition(std::span<const int> cap, int m, F&& fn) {
  const int levels = static_cast<int>(cap.size());
  std::vector<int> k(levels, 0);
  std::vector<int> suffix_cap(levels + 1, 0);
  for (int j = levels - 1; j >= 0; --j) suffix_cap[j] = suffix_cap[j + 1] + cap[j];
  auto rec = [&](auto&& self, int level, int left) -> void {
    if (level == levels) {
      if (left == 0) fn(static_cast<const std::vector<int>&>(k));
      return;
    }
    if (left > suffix_cap[level]) return;
    int hi = left < cap[level] ? left : cap[level];
    for (int c = 0; c <= hi; ++c) {
      k[level] = c;
      self(self, level + 1, left - c);
    }
    k[level] = 0;
  };
  rec(rec, 0, m);
}

// 97.5% normal quantile used by the 95% confidence interval convention.
inline constexpr double kZ95 = 1.96;

}  // namespace fairselect::detail

#endif  // FAIRSELECT_DETAIL_NUMERIC_HPP_
