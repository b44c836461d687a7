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

#include "fairselect/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "fairselect/model.hpp"

namespace fairselect::oracle {

namespace {

using int128 = __int128;

// Plain-double sensitivity rule, restated here rather than shared: the
// mechanism definition is part of the contract, the code is not.
double delta_for(const ScoreSupport& support, const SelectionConfig& config) {
  if (config.m == 1) return support.range();
  switch (config.score_kind) {
    case ScoreKind::kMean: return support.range() / config.m;
    case ScoreKind::kMin:
    case ScoreKind::kMax: return support.range();
    case ScoreKind::kRms: return support.max_value();
  }
  return support.range();
}

// All m-combinations of {0..n-1}, in lexicographic order.
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

double subset_value(const ScoreSupport& support, const std::vector<int>& levels,
                    const std::vector<int>& subset, ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kMean: {
      double s = 0.0;
      for (int i : subset) s += support.value(levels[i]);
      return s / static_cast<double>(subset.size());
    }
    case ScoreKind::kRms: {
      double s = 0.0;
      for (int i : subset) {
        double v = support.value(levels[i]);
        s += v * v;
      }
      return std::sqrt(s / static_cast<double>(subset.size()));
    }
    case ScoreKind::kMin: {
      double v = 2.0;
      for (int i : subset) v = std::min(v, support.value(levels[i]));
      return v;
    }
    case ScoreKind::kMax: {
      double v = -1.0;
      for (int i : subset) v = std::max(v, support.value(levels[i]));
      return v;
    }
  }
  return 0.0;
}

// Exact integer tie key for a subset aggregate. Order matches subset_value.
int128 subset_key(const ScoreSupport& support, const std::vector<int>& levels,
                  const std::vector<int>& subset, ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kMean: {
      int128 s = 0;
      for (int i : subset) s += support.key(levels[i]);
      return s;
    }
    case ScoreKind::kRms: {
      int128 s = 0;
      for (int i : subset) {
        int128 k = support.key(levels[i]);
        s += k * k;
      }
      return s;
    }
    case ScoreKind::kMin: {
      int128 v = support.key(levels[subset[0]]);
      for (int i : subset) v = std::min<int128>(v, support.key(levels[i]));
      return v;
    }
    case ScoreKind::kMax: {
      int128 v = 0;
      for (int i : subset) v = std::max<int128>(v, support.key(levels[i]));
      return v;
    }
  }
  return 0;
}

void check_subset_limit(const SelectionConfig& config,
                        const OracleLimits& limits) {
  double c = 1.0;
  for (int i = 1; i <= config.m; ++i) {
    c *= static_cast<double>(config.n - config.m + i) / i;
  }
  if (c > limits.max_subsets) {
    std::ostringstream os;
    os << "C(" << config.n << "," << config.m << ") = " << c
       << " exceeds oracle subset cap " << limits.max_subsets;
    throw LimitExceeded(os.str());
  }
}

// Per-applicant inclusion probabilities, exponential mechanism.
VectorXd mechanism_probs(const ScoreSupport& support,
                         const std::vector<int>& levels,
                         const SelectionConfig& config,
                         const std::vector<std::vector<int>>& subsets) {
  const int n = config.n;
  const double delta = delta_for(support, config);
  VectorXd probs = VectorXd::Zero(n);
  if (config.m == 1) {
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
      shift = std::max(shift, support.value(levels[i]));
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      probs[i] = std::exp(config.epsilon * (support.value(levels[i]) - shift) /
                          (2.0 * delta));
      total += probs[i];
    }
    probs /= total;
    return probs;
  }
  double vmax = -2.0;
  std::vector<double> values(subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    values[s] = subset_value(support, levels, subsets[s], config.score_kind);
    vmax = std::max(vmax, values[s]);
  }
  double total = 0.0;
  std::vector<double> w(subsets.size());
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    w[s] = std::exp(config.epsilon * (values[s] - vmax) / (2.0 * delta));
    total += w[s];
  }
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (int i : subsets[s]) probs[i] += w[s] / total;
  }
  return probs;
}

// Per-applicant inclusion probabilities, argmax baseline with uniform
// tie-breaking by exact integer keys.
VectorXd baseline_probs(const ScoreSupport& support,
                        const std::vector<int>& levels,
                        const SelectionConfig& config,
                        const std::vector<std::vector<int>>& subsets) {
  const int n = config.n;
  VectorXd probs = VectorXd::Zero(n);
  if (config.m == 1) {
    std::int64_t best = support.key(levels[0]);
    for (int i = 1; i < n; ++i) best = std::max(best, support.key(levels[i]));
    int ties = 0;
    for (int i = 0; i < n; ++i) {
      if (support.key(levels[i]) == best) ++ties;
    }
    for (int i = 0; i < n; ++i) {
      if (support.key(levels[i]) == best) probs[i] = 1.0 / ties;
    }
    return probs;
  }
  int128 best = subset_key(support, levels, subsets[0], config.score_kind);
  for (std::size_t s = 1; s < subsets.size(); ++s) {
    best = std::max(best, subset_key(support, levels, subsets[s], config.score_kind));
  }
  int ties = 0;
  for (const auto& subset : subsets) {
    if (subset_key(support, levels, subset, config.score_kind) == best) ++ties;
  }
  for (const auto& subset : subsets) {
    if (subset_key(support, levels, subset, config.score_kind) == best) {
      for (int i : subset) probs[i] += 1.0 / ties;
    }
  }
  return probs;
}

template <typename ProbsFn>
OracleResult run_oracle(const PopulationModel& model,
                        const SelectionConfig& config, FairnessNotion notion,
                        const OracleLimits& limits, ProbsFn&& probs_fn) {
  config.validate();
  const int n = config.n;
  const int levels = model.support.size();
  const double gamma_states = std::pow(static_cast<double>(levels), n);
  const double theta_states = std::pow(2.0 * levels, n);
  if (gamma_states > limits.max_joint_states ||
      theta_states > limits.max_joint_states) {
    std::ostringstream os;
    os << "joint state count " << theta_states << " exceeds oracle cap "
       << limits.max_joint_states;
    throw LimitExceeded(os.str());
  }

  const DerivedMarginals marg = derive_marginals(model);
  const VectorXd& f_r = marg.f_r;
  VectorXd cond0, cond1;
  if (notion == FairnessNotion::kEqualOpportunity) {
    cond0 = model.pmf(0, 1);
    cond1 = model.pmf(1, 1);
  } else {
    cond0 = model.pmf_given_a(0);
    cond1 = model.pmf_given_a(1);
  }

  std::vector<std::vector<int>> subsets;
  if (config.m > 1) subsets = all_subsets(n, config.m);

  OracleResult result;
  result.gap.notion = notion;
  result.selection_prob = VectorXd::Zero(n);

  // Pass 1: gamma, conditioning the score of applicant `i` for i in {0, 1},
  // plus the unconditional per-applicant probabilities. Literal sum over
  // levels^n.
  std::array<double, 2> gamma_at_index{};
  std::vector<int> r(n, 0);
  while (true) {
    VectorXd probs = probs_fn(model.support, r, config, subsets);
    double w_peers_all = 1.0;
    for (int j = 0; j < n; ++j) w_peers_all *= f_r[r[j]];
    result.selection_prob += w_peers_all * probs;
    for (int idx = 0; idx < std::min(n, 2); ++idx) {
      double peers = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != idx) peers *= f_r[r[j]];
      }
      gamma_at_index[idx] +=
          peers * (cond0[r[idx]] - cond1[r[idx]]) * probs[idx];
    }
    int pos = n - 1;
    while (pos >= 0 && r[pos] == levels - 1) r[pos--] = 0;
    if (pos < 0) break;
    ++r[pos];
  }
  if (n >= 2 && std::abs(gamma_at_index[0] - gamma_at_index[1]) > 1e-12) {
    std::ostringstream os;
    os << "exchangeability violated: gamma at index 0 = " << gamma_at_index[0]
       << ", at index 1 = " << gamma_at_index[1];
    throw EngineInvariantViolation(os.str());
  }
  result.gap.gamma = gamma_at_index[0];

  // Pass 2: theta by joint enumeration over (y, r) per applicant.
  // Pr{y, rho} = Pr{Y=y} f_{R|Y=y}(rho) with A marginalized out.
  std::vector<double> joint(2 * levels);
  for (int lev = 0; lev < levels; ++lev) {
    joint[lev] = (1.0 - marg.pr_y1) * marg.f_r_given_y0[lev];
    joint[levels + lev] = marg.pr_y1 * marg.f_r_given_y1[lev];
  }
  std::vector<int> state(n, 0);  // 0..levels-1 -> y=0, levels.. -> y=1
  double theta = 0.0;
  while (true) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) w *= joint[state[j]];
    if (w > 0.0) {
      for (int j = 0; j < n; ++j) r[j] = state[j] % levels;
      VectorXd probs = probs_fn(model.support, r, config, subsets);
      double util = 0.0;
      for (int j = 0; j < n; ++j) {
        if (state[j] >= levels) util += probs[j];
      }
      theta += w * util / config.m;
    }
    int pos = n - 1;
    while (pos >= 0 && state[pos] == 2 * levels - 1) state[pos--] = 0;
    if (pos < 0) break;
    ++state[pos];
  }
  result.acc.theta = theta;
  return result;
}

}  // namespace

OracleResult oracle_gamma_theta(const PopulationModel& model,
                                const SelectionConfig& config,
                                FairnessNotion notion,
                                const OracleLimits& limits) {
  if (config.m > 1) check_subset_limit(config, limits);
  return run_oracle(model, config, notion, limits, mechanism_probs);
}

OracleResult oracle_limit(const PopulationModel& model,
                          const SelectionConfig& config, FairnessNotion notion,
                          const OracleLimits& limits) {
  if (config.m > 1) check_subset_limit(config, limits);
  return run_oracle(model, config, notion, limits, baseline_probs);
}

VectorXd selection_probabilities(const ScoreSupport& support,
                                 const std::vector<int>& score_levels,
                                 const SelectionConfig& config,
                                 const OracleLimits& limits) {
  config.validate();
  std::vector<std::vector<int>> subsets;
  if (config.m > 1) {
    check_subset_limit(config, limits);
    subsets = all_subsets(config.n, config.m);
  }
  return mechanism_probs(support, score_levels, config, subsets);
}

VectorXd argmax_probabilities(const ScoreSupport& support,
                              const std::vector<int>& score_levels,
                              const SelectionConfig& config,
                              const OracleLimits& limits) {
  config.validate();
  std::vector<std::vector<int>> subsets;
  if (config.m > 1) {
    check_subset_limit(config, limits);
    subsets = all_subsets(config.n, config.m);
  }
  return baseline_probs(support, score_levels, config, subsets);
}

}  // namespace fairselect::oracle
