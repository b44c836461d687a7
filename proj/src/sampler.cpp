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

#include "fairselect/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "fairselect/detail/numeric.hpp"
#include "fairselect/model.hpp"

namespace fairselect {

namespace {

constexpr double kSubsetEnumerationCap = 2e6;

double splitmix64(std::uint64_t& z) {
  z += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = z;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<double>(x ^ (x >> 31));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed;
  (void)splitmix64(z);
  z ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
  (void)splitmix64(z);
  return z;
}

std::vector<std::vector<int>> all_subsets(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int j = m - 1;
    while (j >= 0 && idx[j] == n - m + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int k = j + 1; k < m; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

void require_subset_budget(const SelectionConfig& config) {
  if (detail::choose(config.n, config.m) > kSubsetEnumerationCap) {
    std::ostringstream os;
    os << "C(" << config.n << "," << config.m
       << ") exceeds the subset enumeration cap " << kSubsetEnumerationCap
       << " for score kind " << to_string(config.score_kind);
    throw BudgetExceeded(os.str());
  }
}

double subset_value(const ScoreSupport& support, const ScoreVector& scores,
                    const std::vector<int>& subset, ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kMean: {
      double s = 0.0;
      for (int i : subset) s += support.value(scores.levels[i]);
      return s / static_cast<double>(subset.size());
    }
    case ScoreKind::kRms: {
      double s = 0.0;
      for (int i : subset) {
        double v = support.value(scores.levels[i]);
        s += v * v;
      }
      return std::sqrt(s / static_cast<double>(subset.size()));
    }
    case ScoreKind::kMin: {
      double v = 2.0;
      for (int i : subset) v = std::min(v, support.value(scores.levels[i]));
      return v;
    }
    case ScoreKind::kMax: {
      double v = -1.0;
      for (int i : subset) v = std::max(v, support.value(scores.levels[i]));
      return v;
    }
  }
  return 0.0;
}

// Uniform k-subset of `pool` by partial Fisher-Yates; appends to out.
void sample_without_replacement(std::vector<int>& pool, int k, Rng& rng,
                                std::vector<int>& out) {
  for (int i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(
                            rng.next_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

// Outcome distribution over applicants (m = 1) or subsets (m > 1) for one
// realized score vector; used by the DP audit.
std::vector<double> outcome_distribution(
    const ScoreSupport& support, const ScoreVector& scores,
    const SelectionConfig& config, const std::vector<std::vector<int>>& subsets) {
  const double delta = sensitivity(support, config);
  std::vector<double> probs;
  if (config.m == 1) {
    double shift = -1.0;
    for (int lev : scores.levels) shift = std::max(shift, support.value(lev));
    probs.resize(scores.levels.size());
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      probs[i] = std::exp(config.epsilon *
                          (support.value(scores.levels[i]) - shift) /
                          (2.0 * delta));
      total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
  }
  probs.resize(subsets.size());
  double vmax = -2.0;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    probs[s] = subset_value(support, scores, subsets[s], config.score_kind);
    vmax = std::max(vmax, probs[s]);
  }
  double total = 0.0;
  for (double& p : probs) {
    p = std::exp(config.epsilon * (p - vmax) / (2.0 * delta));
    total += p;
  }
  for (double& p : probs) p /= total;
  return probs;
}

}  // namespace

std::uint64_t Rng::next_below(std::uint64_t n) {
  if (n <= 1) return 0;
  std::uint64_t limit = ~0ULL - (~0ULL % n + 1) % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x > limit);
  return x % n;
}

Rng Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix_seed(seed, stream));
}

ScoreVector draw_scores(const VectorXd& pmf, int n, Rng& rng) {
  ScoreVector sv;
  sv.levels.resize(n);
  for (int i = 0; i < n; ++i) {
    double u = rng.next_double();
    double cum = 0.0;
    int pick = static_cast<int>(pmf.size()) - 1;
    for (Eigen::Index j = 0; j < pmf.size(); ++j) {
      cum += pmf[j];
      if (u < cum) {
        pick = static_cast<int>(j);
        break;
      }
    }
    sv.levels[i] = pick;
  }
  return sv;
}

SelectionOutcome select_one(const ScoreSupport& support,
                            const ScoreVector& scores, double epsilon,
                            std::uint64_t seed) {
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
    throw Error("epsilon must be finite and >= 0");
  }
  SelectionConfig cfg{scores.n(), 1, ScoreKind::kMean, epsilon};
  Rng rng(seed);
  std::vector<double> probs = outcome_distribution(support, scores, cfg, {});
  double u = rng.next_double();
  double cum = 0.0;
  int pick = scores.n() - 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) {
      pick = static_cast<int>(i);
      break;
    }
  }
  return {{pick}, Mechanism::kExponential, seed};
}

SelectionOutcome select_subset(const ScoreSupport& support,
                               const ScoreVector& scores,
                               const SelectionConfig& config,
                               std::uint64_t seed) {
  config.validate();
  if (scores.n() != config.n) throw Error("score vector length != n");
  if (config.m == 1) {
    return select_one(support, scores, config.epsilon, seed);
  }
  Rng rng(seed);
  const int n = config.n;
  const int m = config.m;
  const double delta = sensitivity(support, config);

  if (config.score_kind != ScoreKind::kMean) {
    require_subset_budget(config);
    auto subsets = all_subsets(n, m);
    std::vector<double> probs =
        outcome_distribution(support, scores, config, subsets);
    double u = rng.next_double();
    double cum = 0.0;
    std::size_t pick = subsets.size() - 1;
    for (std::size_t s = 0; s < probs.size(); ++s) {
      cum += probs[s];
      if (u < cum) {
        pick = s;
        break;
      }
    }
    return {subsets[pick], Mechanism::kExponential, seed};
  }

  // Mean kind: sequential conditional sampling. Include applicant j with
  // probability w_j * e_{k-1}(rest) / e_k(current..), both read off a
  // log-space suffix table of elementary symmetric polynomials. The
  // per-member log weight is eps*r/(2*delta*m), the mean aggregate's factor.
  double ref = -1.0;
  for (int lev : scores.levels) ref = std::max(ref, support.value(lev));
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = config.epsilon * (support.value(scores.levels[i]) - ref) /
           (2.0 * delta * m);
  }
  // suffix[j][k] = log e_k(x_j..x_{n-1})
  std::vector<std::vector<double>> suffix(
      n + 1, std::vector<double>(m + 1, detail::kNegInf));
  suffix[n][0] = 0.0;
  for (int j = n - 1; j >= 0; --j) {
    suffix[j][0] = 0.0;
    int hi = std::min(m, n - j);
    for (int k = 1; k <= hi; ++k) {
      suffix[j][k] =
          detail::log_add_exp(suffix[j + 1][k], x[j] + suffix[j + 1][k - 1]);
    }
  }
  std::vector<int> chosen;
  int remaining = m;
  for (int j = 0; j < n && remaining > 0; ++j) {
    if (n - j == remaining) {
      chosen.push_back(j);  // forced: exactly enough applicants left
      --remaining;
      continue;
    }
    double log_p = x[j] + suffix[j + 1][remaining - 1] - suffix[j][remaining];
    double p = std::exp(std::min(log_p, 0.0));
    if (rng.next_double() < p) {
      chosen.push_back(j);
      --remaining;
    }
  }
  return {chosen, Mechanism::kExponential, seed};
}

SelectionOutcome select_argmax(const ScoreSupport& support,
                               const ScoreVector& scores,
                               const SelectionConfig& config,
                               std::uint64_t seed) {
  SelectionConfig cfg = config;
  cfg.epsilon = 0.0;
  cfg.validate();
  if (scores.n() != cfg.n) throw Error("score vector length != n");
  Rng rng(seed);
  const int n = cfg.n;
  const int m = cfg.m;

  std::vector<std::int64_t> keys(n);
  for (int i = 0; i < n; ++i) keys[i] = support.key(scores.levels[i]);

  if (m == 1) {
    std::int64_t best = *std::max_element(keys.begin(), keys.end());
    std::vector<int> ties;
    for (int i = 0; i < n; ++i) {
      if (keys[i] == best) ties.push_back(i);
    }
    int pick = ties[static_cast<std::size_t>(rng.next_below(ties.size()))];
    return {{pick}, Mechanism::kArgmax, seed};
  }

  std::vector<int> chosen;
  switch (cfg.score_kind) {
    case ScoreKind::kMean:
    case ScoreKind::kRms: {
      // Top-m by score: everyone strictly above the m-th key is in; the
      // remaining slots go to a uniform draw among the tied.
      std::vector<std::int64_t> sorted = keys;
      std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end(),
                       std::greater<>());
      std::int64_t tkey = sorted[m - 1];
      std::vector<int> tied;
      for (int i = 0; i < n; ++i) {
        if (keys[i] > tkey) {
          chosen.push_back(i);
        } else if (keys[i] == tkey) {
          tied.push_back(i);
        }
      }
      int d = m - static_cast<int>(chosen.size());
      sample_without_replacement(tied, d, rng, chosen);
      break;
    }
    case ScoreKind::kMin: {
      // Maximal minimum = m-th largest key; every m-subset of the at-or-above
      // group attains it, so the selection is a uniform m-subset of that
      // group.
      std::vector<std::int64_t> sorted = keys;
      std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end(),
                       std::greater<>());
      std::int64_t tkey = sorted[m - 1];
      std::vector<int> group;
      for (int i = 0; i < n; ++i) {
        if (keys[i] >= tkey) group.push_back(i);
      }
      sample_without_replacement(group, m, rng, chosen);
      break;
    }
    case ScoreKind::kMax: {
      // Maximal subsets are exactly those containing at least one top-key
      // applicant. Draw the number of top members from the conditional
      // hypergeometric weights, then fill uniformly.
      std::int64_t best = *std::max_element(keys.begin(), keys.end());
      std::vector<int> top, rest;
      for (int i = 0; i < n; ++i) {
        (keys[i] == best ? top : rest).push_back(i);
      }
      int c = static_cast<int>(top.size());
      int r = static_cast<int>(rest.size());
      // weights[k] proportional to C(c, k) * C(r, m - k), k = 1..min(c, m).
      int k_max = std::min(c, m);
      std::vector<double> wts(k_max);
      for (int k = 1; k <= k_max; ++k) {
        wts[k - 1] = detail::choose(c, k) * detail::choose(r, m - k);
      }
      double total = std::accumulate(wts.begin(), wts.end(), 0.0);
      double u = rng.next_double() * total;
      int k_pick = k_max;
      double cum = 0.0;
      for (int k = 1; k <= k_max; ++k) {
        cum += wts[k - 1];
        if (u < cum) {
          k_pick = k;
          break;
        }
      }
      sample_without_replacement(top, k_pick, rng, chosen);
      sample_without_replacement(rest, m - k_pick, rng, chosen);
      break;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return {chosen, Mechanism::kArgmax, seed};
}

VectorXd selection_probabilities(const ScoreSupport& support,
                                 const ScoreVector& scores,
                                 const SelectionConfig& config) {
  config.validate();
  if (scores.n() != config.n) throw Error("score vector length != n");
  const int n = config.n;
  const int m = config.m;
  VectorXd probs = VectorXd::Zero(n);
  if (m == 1) {
    std::vector<double> p = outcome_distribution(support, scores, config, {});
    for (int i = 0; i < n; ++i) probs[i] = p[i];
    return probs;
  }
  if (config.score_kind == ScoreKind::kMean) {
    const double delta = sensitivity(support, config);
    double ref = -1.0;
    for (int lev : scores.levels) ref = std::max(ref, support.value(lev));
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
      x[i] = config.epsilon * (support.value(scores.levels[i]) - ref) /
             (2.0 * delta * m);
      w[i] = std::exp(x[i]);
    }
    // Leave-one-out: p_i = w_i e_{m-1}(w without i) / e_m(w); the rebuild per
    // i is O(n m), fine at sampling scale.
    std::vector<double> e, l;
    auto log_e = [&](const std::vector<double>& wv, const std::vector<double>& xv,
                     int k) {
      if (detail::esp_counts(wv, std::vector<int>(wv.size(), 1), k, e)) {
        return std::log(e[k]);
      }
      detail::esp_counts_log(xv, std::vector<int>(xv.size(), 1), k, l);
      return l[k];
    };
    double log_em = log_e(w, x, m);
    for (int i = 0; i < n; ++i) {
      std::vector<double> w_rest, x_rest;
      w_rest.reserve(n - 1);
      x_rest.reserve(n - 1);
      for (int j = 0; j < n; ++j) {
        if (j != i) {
          w_rest.push_back(w[j]);
          x_rest.push_back(x[j]);
        }
      }
      probs[i] = std::exp(x[i] + log_e(w_rest, x_rest, m - 1) - log_em);
    }
    return probs;
  }
  require_subset_budget(config);
  auto subsets = all_subsets(n, m);
  std::vector<double> p = outcome_distribution(support, scores, config, subsets);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (int i : subsets[s]) probs[i] += p[s];
  }
  return probs;
}

DPReport verify_dp(const PopulationModel& model, const SelectionConfig& config,
                   int trials, std::uint64_t seed) {
  config.validate();
  if (trials < 1) throw Error("trials must be >= 1");
  const int n = config.n;
  const int levels = model.support.size();
  std::vector<std::vector<int>> subsets;
  if (config.m > 1) {
    require_subset_budget(config);
    subsets = all_subsets(n, config.m);
  }
  const VectorXd f_r = derive_marginals(model).f_r;
  Rng rng(seed);
  DPReport report;
  report.epsilon = config.epsilon;
  report.bound = std::exp(config.epsilon);
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    ScoreVector scores = draw_scores(f_r, n, rng);
    std::vector<double> base =
        outcome_distribution(model.support, scores, config, subsets);
    for (int i = 0; i < n; ++i) {
      int original = scores.levels[i];
      for (int alt = 0; alt < levels; ++alt) {
        if (alt == original) continue;
        ScoreVector neighbor = scores;
        neighbor.levels[i] = alt;
        std::vector<double> other =
            outcome_distribution(model.support, neighbor, config, subsets);
        ++report.neighbor_pairs;
        for (std::size_t o = 0; o < base.size(); ++o) {
          double r1 = base[o] / other[o];
          double r2 = other[o] / base[o];
          report.max_ratio = std::max({report.max_ratio, r1, r2});
        }
      }
    }
  }
  report.pass = report.max_ratio <= report.bound * (1.0 + 1e-9);
  return report;
}

}  // namespace fairselect
