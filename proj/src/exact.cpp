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

#include "fairselect/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "fairselect/detail/numeric.hpp"
#include "fairselect/detail/subsets.hpp"
#include "fairselect/model.hpp"

namespace fairselect::exact {

namespace {

using detail::Kahan;

void validate_for_engine(const SelectionConfig& config) {
  // The engine tolerates negative epsilon: gamma(eps) extends analytically
  // below zero, which the derivative checks rely on. Everything else keeps
  // the usual constraints.
  if (config.n < 2) throw Error("pool size n must be >= 2");
  if (config.m < 1 || config.m >= config.n) {
    throw Error("selections m must satisfy 1 <= m < n");
  }
  if (!std::isfinite(config.epsilon)) throw Error("epsilon must be finite");
}

enum class Path { kSingle, kMeanSubset, kEnumerated };

Path pick_path(const SelectionConfig& config) {
  if (config.m == 1) return Path::kSingle;
  if (config.score_kind == ScoreKind::kMean) return Path::kMeanSubset;
  return Path::kEnumerated;
}

void check_budget_or_throw(const PopulationModel& model,
                           const SelectionConfig& config,
                           const ExactBudget& budget, bool do_throw,
                           bool* ok_out) {
  auto fail = [&](const std::string& msg) {
    if (ok_out) *ok_out = false;
    if (do_throw) throw BudgetExceeded(msg);
  };
  if (ok_out) *ok_out = true;
  const int n = config.n;
  const int levels = model.support.size();
  const double count = detail::count_vector_cardinality(n - 1, levels);
  if (n > budget.max_n) {
    std::ostringstream os;
    os << "pool size " << n << " exceeds the exact-path cap " << budget.max_n
       << "; use the Monte Carlo engine";
    fail(os.str());
    return;
  }
  switch (pick_path(config)) {
    case Path::kSingle:
      if (count > budget.max_m1_count) {
        std::ostringstream os;
        os << "count-vector space " << count << " exceeds budget "
           << budget.max_m1_count;
        fail(os.str());
      }
      break;
    case Path::kMeanSubset: {
      double ops = count * (static_cast<double>(n) * config.m + levels);
      if (ops > budget.max_mean_ops) {
        std::ostringstream os;
        os << "estimated recurrence work " << ops << " exceeds budget "
           << budget.max_mean_ops;
        fail(os.str());
      }
      break;
    }
    case Path::kEnumerated: {
      double subsets = detail::choose(n, config.m);
      if (subsets > budget.max_subsets) {
        std::ostringstream os;
        os << "C(" << n << "," << config.m << ") = " << subsets
           << " exceeds the enumeration budget " << budget.max_subsets;
        fail(os.str());
        return;
      }
      double comps = detail::count_vector_cardinality(config.m, levels);
      double ops = count * comps * levels;
      if (ops > budget.max_mean_ops) {
        std::ostringstream os;
        os << "estimated enumeration work " << ops << " exceeds budget "
           << budget.max_mean_ops;
        fail(os.str());
      }
      break;
    }
  }
}

// Per-level expected inclusion probability of a conditioned applicant whose
// score sits at each support level, with n-1 peers iid from f_r. One
// enumeration serves every conditioning distribution: they are applied as
// dot products afterwards.
VectorXd expected_inclusion_mechanism(const PopulationModel& model,
                                      const SelectionConfig& config) {
  const ScoreSupport& support = model.support;
  const int levels = support.size();
  const int n = config.n;
  const int m = config.m;
  const double delta = sensitivity(support, config);
  const double eps = config.epsilon;
  const VectorXd f_r = derive_marginals(model).f_r;
  std::vector<Kahan> acc(levels);

  switch (pick_path(config)) {
    case Path::kSingle: {
      // ratio[t][j] = exp(eps * (rho_j - rho_t) / (2*delta)); the conditioned
      // level anchors the shift, so overflow to +inf cleanly drives the
      // inclusion probability to zero.
      std::vector<std::vector<double>> ratio(levels,
                                             std::vector<double>(levels));
      for (int t = 0; t < levels; ++t) {
        for (int j = 0; j < levels; ++j) {
          ratio[t][j] = std::exp(eps * (support.value(j) - support.value(t)) /
                                 (2.0 * delta));
        }
      }
      detail::for_each_score_count(
          f_r, n - 1, [&](const std::vector<int>& counts, double w) {
            if (w == 0.0) return;
            for (int t = 0; t < levels; ++t) {
              double denom = 1.0;
              for (int j = 0; j < levels; ++j) {
                if (counts[j]) denom += counts[j] * ratio[t][j];
              }
              acc[t].add(w / denom);
            }
          });
      break;
    }
    case Path::kMeanSubset: {
      // Subset weight exp(eps*v(G)/(2*delta)) with v the member mean factors
      // into per-member weights exp(eps*r_j/(2*delta*m)).
      const double member_scale = eps / (2.0 * delta * m);
      std::vector<double> w_level(levels), x_level(levels), e, l;
      detail::for_each_score_count(
          f_r, n - 1, [&](const std::vector<int>& counts, double w) {
            if (w == 0.0) return;
            int top = levels - 1;
            while (counts[top] == 0) --top;
            double ref = support.value(top);
            for (int j = 0; j <= top; ++j) {
              x_level[j] = member_scale * (support.value(j) - ref);
              w_level[j] = std::exp(x_level[j]);
            }
            double log_em, log_em1;
            if (detail::esp_counts(
                    {w_level.data(), static_cast<std::size_t>(top + 1)},
                    {counts.data(), static_cast<std::size_t>(top + 1)}, m, e)) {
              log_em = std::log(e[m]);
              log_em1 = std::log(e[m - 1]);
            } else {
              detail::esp_counts_log(
                  {x_level.data(), static_cast<std::size_t>(top + 1)},
                  {counts.data(), static_cast<std::size_t>(top + 1)}, m, l);
              log_em = l[m];
              log_em1 = l[m - 1];
            }
            for (int t = 0; t < levels; ++t) {
              double x_t = member_scale * (support.value(t) - ref);
              acc[t].add(w * detail::sigmoid(x_t + log_em1 - log_em));
            }
          });
      break;
    }
    case Path::kEnumerated: {
      std::vector<int> total(levels);
      detail::SubsetWork work;
      detail::for_each_score_count(
          f_r, n - 1, [&](const std::vector<int>& counts, double w) {
            if (w == 0.0) return;
            for (int t = 0; t < levels; ++t) {
              std::copy(counts.begin(), counts.end(), total.begin());
              total[t] += 1;
              acc[t].add(w * detail::enumerated_mechanism_inclusion(
                                 support, total, t, m, config.score_kind, eps,
                                 delta, work));
            }
          });
      break;
    }
  }

  VectorXd out(levels);
  for (int t = 0; t < levels; ++t) out[t] = acc[t].value();

  // Sum of inclusion probabilities over the pool must be m.
  Kahan norm;
  for (int t = 0; t < levels; ++t) norm.add(f_r[t] * out[t]);
  double total_incl = norm.value() * n / m;
  if (std::abs(total_incl - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "inclusion normalization off: sum/m = " << total_incl
       << " (eps = " << eps << ", m = " << m << ")";
    throw EngineInvariantViolation(os.str());
  }
  return out;
}

// Same per-level expectation for the argmax baseline.
VectorXd expected_inclusion_limit(const PopulationModel& model,
                                  const SelectionConfig& config) {
  const ScoreSupport& support = model.support;
  const int levels = support.size();
  const int n = config.n;
  const int m = config.m;
  const VectorXd f_r = derive_marginals(model).f_r;
  std::vector<Kahan> acc(levels);

  if (m == 1) {
    detail::for_each_score_count(
        f_r, n - 1, [&](const std::vector<int>& counts, double w) {
          if (w == 0.0) return;
          int top = levels - 1;
          while (counts[top] == 0) --top;
          for (int t = 0; t < levels; ++t) {
            if (t > top) {
              acc[t].add(w);
            } else if (t == top) {
              acc[t].add(w / (1.0 + counts[top]));
            }
          }
        });
  } else {
    const bool topm = config.score_kind == ScoreKind::kMean ||
                      config.score_kind == ScoreKind::kRms;
    std::vector<int> total(levels);
    detail::SubsetWork work;
    detail::for_each_score_count(
        f_r, n - 1, [&](const std::vector<int>& counts, double w) {
          if (w == 0.0) return;
          for (int t = 0; t < levels; ++t) {
            std::copy(counts.begin(), counts.end(), total.begin());
            total[t] += 1;
            double incl =
                topm ? detail::topm_inclusion_from_counts(total, t, m)
                     : detail::enumerated_baseline_inclusion(
                           support, total, t, m, config.score_kind, work);
            acc[t].add(w * incl);
          }
        });
  }

  VectorXd out(levels);
  for (int t = 0; t < levels; ++t) out[t] = acc[t].value();
  Kahan norm;
  for (int t = 0; t < levels; ++t) norm.add(f_r[t] * out[t]);
  double total_incl = norm.value() * n / m;
  if (std::abs(total_incl - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "baseline inclusion normalization off: sum/m = " << total_incl;
    throw EngineInvariantViolation(os.str());
  }
  return out;
}

struct Conditioners {
  VectorXd diff_eo, diff_dp, f_y1;
  double pr_y1 = 0.0;
};

Conditioners conditioners(const PopulationModel& model) {
  Conditioners c;
  const DerivedMarginals d = derive_marginals(model);
  c.diff_eo = model.pmf(0, 1) - model.pmf(1, 1);
  c.diff_dp = model.pmf_given_a(0) - model.pmf_given_a(1);
  c.f_y1 = d.f_r_given_y1;
  c.pr_y1 = d.pr_y1;
  return c;
}

double compensated_dot(const VectorXd& a, const VectorXd& b) {
  Kahan acc;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

}  // namespace

bool within_budget(const PopulationModel& model, const SelectionConfig& config,
                   const ExactBudget& budget) {
  bool ok = false;
  check_budget_or_throw(model, config, budget, /*do_throw=*/false, &ok);
  return ok;
}

ExactPoint evaluate(const PopulationModel& model, const SelectionConfig& config,
                    const ExactBudget& budget) {
  validate_for_engine(config);
  check_budget_or_throw(model, config, budget, /*do_throw=*/true, nullptr);
  const VectorXd incl = expected_inclusion_mechanism(model, config);
  const Conditioners c = conditioners(model);
  ExactPoint p;
  p.gamma_eo = compensated_dot(c.diff_eo, incl);
  p.gamma_dp = compensated_dot(c.diff_dp, incl);
  p.theta = c.pr_y1 * (static_cast<double>(config.n) / config.m) *
            compensated_dot(c.f_y1, incl);
  return p;
}

FairnessGap gamma_exact(const PopulationModel& model,
                        const SelectionConfig& config, FairnessNotion notion,
                        const ExactBudget& budget) {
  ExactPoint p = evaluate(model, config, budget);
  return {notion == FairnessNotion::kEqualOpportunity ? p.gamma_eo : p.gamma_dp,
          notion};
}

Accuracy theta_exact(const PopulationModel& model,
                     const SelectionConfig& config, const ExactBudget& budget) {
  return {evaluate(model, config, budget).theta};
}

FairnessGap demographic_parity_gap(const PopulationModel& model,
                                   const SelectionConfig& config,
                                   const ExactBudget& budget) {
  return gamma_exact(model, config, FairnessNotion::kDemographicParity, budget);
}

LimitReport limit_gamma_theta(const PopulationModel& model,
                              const SelectionConfig& config,
                              const ExactBudget& budget) {
  SelectionConfig cfg = config;
  cfg.epsilon = 0.0;  // irrelevant to the baseline
  cfg.validate();
  check_budget_or_throw(model, cfg, budget, /*do_throw=*/true, nullptr);
  const VectorXd incl = expected_inclusion_limit(model, cfg);
  const Conditioners c = conditioners(model);
  LimitReport r;
  for (int a = 0; a < 2; ++a) {
    r.e_sel_given_ay1[a] = compensated_dot(model.pmf(a, 1), incl);
    r.e_sel_given_a[a] = compensated_dot(model.pmf_given_a(a), incl);
  }
  r.gamma_eo = r.e_sel_given_ay1[0] - r.e_sel_given_ay1[1];
  r.gamma_dp = r.e_sel_given_a[0] - r.e_sel_given_a[1];
  r.theta = c.pr_y1 * (static_cast<double>(cfg.n) / cfg.m) *
            compensated_dot(c.f_y1, incl);
  return r;
}

double gamma_prime_zero_coefficient(int n, int m) {
  double c_nm = detail::choose(n, m);
  return detail::choose(n - 1, m - 1) * detail::choose(n - 1, m) /
         (2.0 * m * c_nm * c_nm);
}

double gamma_prime_zero(const PopulationModel& model,
                        const SelectionConfig& config, FairnessNotion notion,
                        const ExactBudget& budget) {
  SelectionConfig cfg = config;
  cfg.epsilon = 0.0;
  validate_for_engine(cfg);
  if (cfg.m == 1 || cfg.score_kind == ScoreKind::kMean) {
    double mean0, mean1;
    if (notion == FairnessNotion::kEqualOpportunity) {
      const DerivedMarginals d = derive_marginals(model);
      mean0 = d.mean_r_qualified[0];
      mean1 = d.mean_r_qualified[1];
    } else {
      mean0 = model.support.values().dot(model.pmf_given_a(0));
      mean1 = model.support.values().dot(model.pmf_given_a(1));
    }
    // The subset mechanism's exponent adds eps*r/2 per member, so the slope
    // carries an extra factor m relative to the single-selection
    // coefficient; dividing by the range generalizes the unit-interval
    // convention.
    return cfg.m * gamma_prime_zero_coefficient(cfg.n, cfg.m) *
           (mean0 - mean1) / model.support.range();
  }
  // No closed form for rms/min/max: central finite differences on the
  // analytic continuation of gamma around zero.
  const double h = 1e-4;
  SelectionConfig hi = cfg, lo = cfg;
  hi.epsilon = h;
  lo.epsilon = -h;
  double g_hi = gamma_exact(model, hi, notion, budget).gamma;
  double g_lo = gamma_exact(model, lo, notion, budget).gamma;
  return (g_hi - g_lo) / (2.0 * h);
}

}  // namespace fairselect::exact
