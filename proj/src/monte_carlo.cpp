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

#include "fairselect/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "fairselect/detail/numeric.hpp"
#include "fairselect/detail/subsets.hpp"
#include "fairselect/exact.hpp"
#include "fairselect/model.hpp"
#include "fairselect/sampler.hpp"

namespace fairselect::mc {

namespace {

// Streaming mean/variance with order-independent pairwise merging, so the
// chunked estimate does not depend on how chunks are scheduled.
struct Stat {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Stat& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    long t = n + o.n;
    m2 += o.m2 + d * d * (static_cast<double>(n) * o.n / t);
    mean += d * (static_cast<double>(o.n) / t);
    n = t;
  }
  double half_width() const {
    if (n < 2) return 0.0;
    return detail::kZ95 * std::sqrt(m2 / (n - 1) / n);
  }
};

std::vector<double> cumulative(const VectorXd& pmf) {
  std::vector<double> cum(pmf.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < pmf.size(); ++i) {
    s += pmf[i];
    cum[i] = s;
  }
  cum.back() = 1.0 + 1e-15;  // guard against trailing round-off
  return cum;
}

int quantile(const std::vector<double>& cum, double u) {
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return static_cast<int>(it - cum.begin());
}

// Per-draw evaluation of the inclusion probability of the conditioned
// applicant at level t among realized peers; exact given the draw.
class InclusionEvaluator {
 public:
  InclusionEvaluator(const PopulationModel& model, const SelectionConfig& config)
      : support_(model.support),
        levels_(model.support.size()),
        n_(config.n),
        m_(config.m),
        kind_(config.score_kind),
        delta_(sensitivity(model.support, config)),
        ones_(config.n - 1, 1) {
    if (m_ > 1 && kind_ != ScoreKind::kMean) {
      if (detail::choose(n_, m_) > 2e6) {
        std::ostringstream os;
        os << "per-draw evaluation for score kind " << to_string(kind_)
           << " needs C(" << n_ << "," << m_ << ") enumeration over budget";
        throw BudgetExceeded(os.str());
      }
    }
  }

  double mechanism(int t, const std::vector<int>& peers, double eps) {
    if (m_ == 1) {
      double vt = support_.value(t);
      double denom = 1.0;
      for (int lev : peers) {
        denom += std::exp(eps * (support_.value(lev) - vt) / (2.0 * delta_));
      }
      return 1.0 / denom;
    }
    if (kind_ == ScoreKind::kMean) {
      // Per-member factor of the subset weight: exp(eps*r/(2*delta*m)).
      const double member_scale = eps / (2.0 * delta_ * m_);
      double ref = support_.value(peers[0]);
      for (int lev : peers) ref = std::max(ref, support_.value(lev));
      w_.resize(peers.size());
      x_.resize(peers.size());
      for (std::size_t i = 0; i < peers.size(); ++i) {
        x_[i] = member_scale * (support_.value(peers[i]) - ref);
        w_[i] = std::exp(x_[i]);
      }
      double log_em, log_em1;
      if (detail::esp_counts(w_, ones_, m_, e_)) {
        log_em = std::log(e_[m_]);
        log_em1 = std::log(e_[m_ - 1]);
      } else {
        detail::esp_counts_log(x_, ones_, m_, l_);
        log_em = l_[m_];
        log_em1 = l_[m_ - 1];
      }
      double x_t = member_scale * (support_.value(t) - ref);
      return detail::sigmoid(x_t + log_em1 - log_em);
    }
    histogram(t, peers);
    return detail::enumerated_mechanism_inclusion(support_, counts_, t, m_,
                                                  kind_, eps, delta_, work_);
  }

  double baseline(int t, const std::vector<int>& peers) {
    if (m_ == 1) {
      int above = 0, tied = 0;
      for (int lev : peers) {
        if (lev > t) ++above;
        else if (lev == t) ++tied;
      }
      return above > 0 ? 0.0 : 1.0 / (1.0 + tied);
    }
    histogram(t, peers);
    if (kind_ == ScoreKind::kMean || kind_ == ScoreKind::kRms) {
      return detail::topm_inclusion_from_counts(counts_, t, m_);
    }
    return detail::enumerated_baseline_inclusion(support_, counts_, t, m_,
                                                 kind_, work_);
  }

 private:
  void histogram(int t, const std::vector<int>& peers) {
    counts_.assign(levels_, 0);
    for (int lev : peers) ++counts_[lev];
    ++counts_[t];
  }

  const ScoreSupport& support_;
  int levels_, n_, m_;
  ScoreKind kind_;
  double delta_;
  std::vector<int> ones_, counts_;
  std::vector<double> w_, x_, e_, l_;
  detail::SubsetWork work_;
};

struct ChunkPlan {
  long begin = 0;
  long count = 0;
};

std::vector<ChunkPlan> plan_chunks(long samples, int chunks) {
  chunks = std::max(1, chunks);
  std::vector<ChunkPlan> plan;
  long base = samples / chunks;
  long rem = samples % chunks;
  long at = 0;
  for (int c = 0; c < chunks; ++c) {
    long k = base + (c < rem ? 1 : 0);
    if (k == 0) continue;
    plan.push_back({at, k});
    at += k;
  }
  return plan;
}

void require_samples(long samples) {
  if (samples < 1000) {
    throw Error("Monte Carlo estimates need samples >= 1000");
  }
}

const VectorXd condition_pmf(const PopulationModel& model,
                             const DerivedMarginals& marg, Condition c) {
  switch (c) {
    case Condition::kA0Y1: return model.pmf(0, 1);
    case Condition::kA1Y1: return model.pmf(1, 1);
    case Condition::kA0: return model.pmf_given_a(0);
    case Condition::kA1: return model.pmf_given_a(1);
    case Condition::kY1: return marg.f_r_given_y1;
  }
  return marg.f_r;
}

}  // namespace

Estimate estimate_conditional_expectation(const PopulationModel& model,
                                          const SelectionConfig& config,
                                          Condition condition, Target target,
                                          const McOptions& options) {
  config.validate();
  require_samples(options.samples);
  const DerivedMarginals marg = derive_marginals(model);
  const std::vector<double> cum_peers = cumulative(marg.f_r);
  const std::vector<double> cum_cond =
      cumulative(condition_pmf(model, marg, condition));

  SelectionConfig cfg = config;
  if (target == Target::kZ) cfg.m = 1;
  InclusionEvaluator eval(model, cfg);

  Stat total;
  std::vector<int> peers(cfg.n - 1);
  for (const ChunkPlan& chunk : plan_chunks(options.samples, options.chunks)) {
    Rng rng = Rng::derive(options.seed, static_cast<std::uint64_t>(chunk.begin));
    Stat local;
    for (long s = 0; s < chunk.count; ++s) {
      for (int j = 0; j < cfg.n - 1; ++j) {
        peers[j] = quantile(cum_peers, rng.next_double());
      }
      int t = quantile(cum_cond, rng.next_double());
      double value;
      switch (target) {
        case Target::kR:
          value = model.support.value(t);
          break;
        case Target::kZ:
        case Target::kW:
          value = options.argmax_limit
                      ? eval.baseline(t, peers)
                      : eval.mechanism(t, peers, cfg.epsilon);
          break;
        default:
          value = 0.0;
      }
      local.add(value);
    }
    total.merge(local);
  }

  Estimate est;
  est.mean = total.mean;
  est.half_width_95 = total.half_width();
  est.samples = total.n;
  est.estimator = target == Target::kR   ? EstimatorKind::kERCond
                  : target == Target::kZ ? EstimatorKind::kEZCond
                                         : EstimatorKind::kEWCond;
  return est;
}

TradeoffCurve estimate_tradeoff_curve(const PopulationModel& model,
                                      const SelectionConfig& config,
                                      FairnessNotion notion,
                                      const std::vector<double>& epsilon_grid,
                                      const McOptions& options) {
  config.validate();
  require_samples(options.samples);
  if (!std::is_sorted(epsilon_grid.begin(), epsilon_grid.end())) {
    throw Error("epsilon grid must be sorted ascending");
  }
  const DerivedMarginals marg = derive_marginals(model);
  const std::vector<double> cum_peers = cumulative(marg.f_r);
  const bool eo = notion == FairnessNotion::kEqualOpportunity;
  const std::vector<double> cum_c0 =
      cumulative(eo ? model.pmf(0, 1) : model.pmf_given_a(0));
  const std::vector<double> cum_c1 =
      cumulative(eo ? model.pmf(1, 1) : model.pmf_given_a(1));
  const std::vector<double> cum_y1 = cumulative(marg.f_r_given_y1);

  InclusionEvaluator eval(model, config);
  const std::size_t points = epsilon_grid.size();
  std::vector<Stat> g_stats(points), t_stats(points);
  const double theta_scale =
      marg.pr_y1 * static_cast<double>(config.n) / config.m;

  std::vector<int> peers(config.n - 1);
  for (const ChunkPlan& chunk : plan_chunks(options.samples, options.chunks)) {
    Rng rng = Rng::derive(options.seed, static_cast<std::uint64_t>(chunk.begin));
    std::vector<Stat> g_local(points), t_local(points);
    for (long s = 0; s < chunk.count; ++s) {
      for (int j = 0; j < config.n - 1; ++j) {
        peers[j] = quantile(cum_peers, rng.next_double());
      }
      // One uniform drives all three conditioned scores: common random
      // numbers across groups as well as across the grid.
      double u = rng.next_double();
      int t0 = quantile(cum_c0, u);
      int t1 = quantile(cum_c1, u);
      int ty = quantile(cum_y1, u);
      for (std::size_t g = 0; g < points; ++g) {
        double eps = epsilon_grid[g];
        double i0 = eval.mechanism(t0, peers, eps);
        double i1 = t1 == t0 ? i0 : eval.mechanism(t1, peers, eps);
        double iy = ty == t0 ? i0
                    : ty == t1 ? i1
                               : eval.mechanism(ty, peers, eps);
        g_local[g].add(i0 - i1);
        t_local[g].add(theta_scale * iy);
      }
    }
    for (std::size_t g = 0; g < points; ++g) {
      g_stats[g].merge(g_local[g]);
      t_stats[g].merge(t_local[g]);
    }
  }

  TradeoffCurve curve;
  curve.n = config.n;
  curve.m = config.m;
  curve.notion = notion;
  curve.score_kind = config.score_kind;
  curve.points.resize(points);
  for (std::size_t g = 0; g < points; ++g) {
    TradeoffPoint& p = curve.points[g];
    p.epsilon = epsilon_grid[g];
    p.gamma = g_stats[g].mean;
    p.gamma_ci = g_stats[g].half_width();
    p.theta = t_stats[g].mean;
    p.theta_ci = t_stats[g].half_width();
    p.exact = false;
  }
  return curve;
}

TradeoffCurve exact_tradeoff_curve(const PopulationModel& model,
                                   const SelectionConfig& config,
                                   FairnessNotion notion,
                                   const std::vector<double>& epsilon_grid) {
  config.validate();
  if (!std::is_sorted(epsilon_grid.begin(), epsilon_grid.end())) {
    throw Error("epsilon grid must be sorted ascending");
  }
  TradeoffCurve curve;
  curve.n = config.n;
  curve.m = config.m;
  curve.notion = notion;
  curve.score_kind = config.score_kind;
  for (double eps : epsilon_grid) {
    SelectionConfig cfg = config;
    cfg.epsilon = eps;
    exact::ExactPoint value = exact::evaluate(model, cfg);
    TradeoffPoint p;
    p.epsilon = eps;
    p.gamma = notion == FairnessNotion::kEqualOpportunity ? value.gamma_eo
                                                          : value.gamma_dp;
    p.gamma_ci = 0.0;
    p.theta = value.theta;
    p.theta_ci = 0.0;
    p.exact = true;
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace fairselect::mc
