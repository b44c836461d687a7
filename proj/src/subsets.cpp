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

#include "fairselect/detail/subsets.hpp"

#include <algorithm>
#include <cmath>

#include "fairselect/detail/numeric.hpp"

namespace fairselect::detail {

double subset_value_from_counts(const ScoreSupport& support,
                                const std::vector<int>& k, int m,
                                ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kMean: {
      double s = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) s += k[j] * support.value(static_cast<int>(j));
      }
      return s / m;
    }
    case ScoreKind::kRms: {
      double s = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) {
          double v = support.value(static_cast<int>(j));
          s += k[j] * v * v;
        }
      }
      return std::sqrt(s / m);
    }
    case ScoreKind::kMin: {
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) return support.value(static_cast<int>(j));
      }
      return 0.0;
    }
    case ScoreKind::kMax: {
      for (std::size_t j = k.size(); j-- > 0;) {
        if (k[j]) return support.value(static_cast<int>(j));
      }
      return 0.0;
    }
  }
  return 0.0;
}

int128 subset_key_from_counts(const ScoreSupport& support,
                              const std::vector<int>& k, ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kMean: {
      int128 s = 0;
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) {
          s += static_cast<int128>(k[j]) * support.key(static_cast<int>(j));
        }
      }
      return s;
    }
    case ScoreKind::kRms: {
      int128 s = 0;
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) {
          int128 key = support.key(static_cast<int>(j));
          s += static_cast<int128>(k[j]) * key * key;
        }
      }
      return s;
    }
    case ScoreKind::kMin: {
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j]) return support.key(static_cast<int>(j));
      }
      return 0;
    }
    case ScoreKind::kMax: {
      for (std::size_t j = k.size(); j-- > 0;) {
        if (k[j]) return support.key(static_cast<int>(j));
      }
      return 0;
    }
  }
  return 0;
}

double enumerated_mechanism_inclusion(const ScoreSupport& support,
                                      std::span<const int> total_counts, int t,
                                      int m, ScoreKind kind, double eps,
                                      double delta, SubsetWork& work) {
  const int levels = static_cast<int>(total_counts.size());
  work.mult.clear();
  work.val.clear();
  work.k_at_t.clear();
  double vmax = -2.0;
  for_each_composition(total_counts, m, [&](const std::vector<int>& k) {
    double mult = 1.0;
    for (int j = 0; j < levels; ++j) {
      if (k[j]) mult *= choose(total_counts[j], k[j]);
    }
    double v = subset_value_from_counts(support, k, m, kind);
    work.mult.push_back(mult);
    work.val.push_back(v);
    work.k_at_t.push_back(k[t]);
    vmax = std::max(vmax, v);
  });
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < work.mult.size(); ++s) {
    double w = work.mult[s] * std::exp(eps * (work.val[s] - vmax) / (2.0 * delta));
    den += w;
    if (work.k_at_t[s]) num += w * work.k_at_t[s] / total_counts[t];
  }
  return num / den;
}

double enumerated_baseline_inclusion(const ScoreSupport& support,
                                     std::span<const int> total_counts, int t,
                                     int m, ScoreKind kind, SubsetWork& work) {
  const int levels = static_cast<int>(total_counts.size());
  int128 best = 0;
  bool first = true;
  double smax_size = 0.0;
  double smax_with_t = 0.0;
  for_each_composition(total_counts, m, [&](const std::vector<int>& k) {
    int128 key = subset_key_from_counts(support, k, kind);
    if (!first && key < best) return;
    double mult = 1.0;
    for (int j = 0; j < levels; ++j) {
      if (k[j]) mult *= choose(total_counts[j], k[j]);
    }
    double with_t = mult * k[t] / total_counts[t];
    if (first || key > best) {
      best = key;
      first = false;
      smax_size = mult;
      smax_with_t = with_t;
    } else {  // key == best
      smax_size += mult;
      smax_with_t += with_t;
    }
  });
  (void)work;
  return smax_with_t / smax_size;
}

double topm_inclusion_from_counts(std::span<const int> total_counts, int t,
                                  int m) {
  int cum = 0;
  int threshold = static_cast<int>(total_counts.size()) - 1;
  for (int j = threshold; j >= 0; --j) {
    cum += total_counts[j];
    if (cum >= m) {
      threshold = j;
      break;
    }
  }
  if (t > threshold) return 1.0;
  if (t < threshold) return 0.0;
  int c_at = total_counts[threshold];
  int above = cum - c_at;
  return static_cast<double>(m - above) / c_at;
}

}  // namespace fairselect::detail
