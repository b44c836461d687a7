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

#include "fairselect/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "fairselect/detail/numeric.hpp"
#include "fairselect/detail/subsets.hpp"
#include "fairselect/exact.hpp"
#include "fairselect/model.hpp"
#include "fairselect/monte_carlo.hpp"
#include "fairselect/sampler.hpp"

namespace fairselect::analysis {

namespace {

constexpr double kZeroFloor = 1e-13;

struct Val {
  double value = 0.0;
  double ci = 0.0;
};

struct CurvePoint {
  Val gamma;
  Val theta;
};

// Evaluates gamma(eps) and theta(eps) either exactly or on a cached
// common-random-numbers Monte Carlo curve, so solvers see one smooth
// deterministic function either way.
class CurveEval {
 public:
  CurveEval(const PopulationModel& model, const SelectionConfig& config,
            const AnalysisOptions& options)
      : model_(model), config_(config), options_(options) {
    exact_ = options.engine == EnginePath::kExact ||
             (options.engine == EnginePath::kAuto &&
              exact::within_budget(model, config));
    if (!exact_) {
      const DerivedMarginals marg = derive_marginals(model);
      theta_scale_ = marg.pr_y1 * static_cast<double>(config.n) / config.m;
      auto cum = [](const VectorXd& pmf) {
        std::vector<double> c(pmf.size());
        double s = 0.0;
        for (Eigen::Index i = 0; i < pmf.size(); ++i) c[i] = (s += pmf[i]);
        c.back() = 1.0 + 1e-15;
        return c;
      };
      const bool eo = options.notion == FairnessNotion::kEqualOpportunity;
      std::vector<double> cum_peers = cum(marg.f_r);
      std::vector<double> cum0 =
          cum(eo ? model.pmf(0, 1) : model.pmf_given_a(0));
      std::vector<double> cum1 =
          cum(eo ? model.pmf(1, 1) : model.pmf_given_a(1));
      std::vector<double> cumy = cum(marg.f_r_given_y1);
      auto quantile = [](const std::vector<double>& c, double u) {
        auto it = std::upper_bound(c.begin(), c.end(), u);
        if (it == c.end()) --it;
        return static_cast<int>(it - c.begin());
      };
      long samples = std::max<long>(options.samples, 1000);
      peers_.resize(samples * (config.n - 1));
      t0_.resize(samples);
      t1_.resize(samples);
      ty_.resize(samples);
      Rng rng = Rng::derive(options.seed, 0);
      for (long s = 0; s < samples; ++s) {
        for (int j = 0; j < config.n - 1; ++j) {
          peers_[s * (config.n - 1) + j] = quantile(cum_peers, rng.next_double());
        }
        double u = rng.next_double();
        t0_[s] = quantile(cum0, u);
        t1_[s] = quantile(cum1, u);
        ty_[s] = quantile(cumy, u);
      }
    }
  }

  bool exact() const { return exact_; }
  long evaluations() const { return evaluations_; }

  const CurvePoint& point(double eps) {
    auto it = cache_.find(eps);
    if (it != cache_.end()) return it->second;
    ++evaluations_;
    CurvePoint p = exact_ ? eval_exact(eps) : eval_mc(eps);
    return cache_.emplace(eps, p).first->second;
  }

  Val gamma(double eps) { return point(eps).gamma; }
  Val theta(double eps) { return point(eps).theta; }

  // Sign with the noise floor: 0 when the value is indistinguishable from
  // zero at this engine's resolution.
  int sign(const Val& v, double tol) const {
    double floor = exact_ ? kZeroFloor : std::max(v.ci, tol);
    if (std::abs(v.value) <= floor) return 0;
    return v.value > 0 ? 1 : -1;
  }

 private:
  CurvePoint eval_exact(double eps) {
    SelectionConfig cfg = config_;
    cfg.epsilon = eps;
    exact::ExactPoint e = exact::evaluate(model_, cfg);
    CurvePoint p;
    p.gamma.value = options_.notion == FairnessNotion::kEqualOpportunity
                        ? e.gamma_eo
                        : e.gamma_dp;
    p.theta.value = e.theta;
    return p;
  }

  CurvePoint eval_mc(double eps) {
    SelectionConfig cfg = config_;
    cfg.epsilon = eps;
    InclusionStats stats = run_samples(cfg);
    CurvePoint p;
    p.gamma.value = stats.g_mean;
    p.gamma.ci = stats.g_hw;
    p.theta.value = stats.t_mean;
    p.theta.ci = stats.t_hw;
    return p;
  }

  struct InclusionStats {
    double g_mean = 0, g_hw = 0, t_mean = 0, t_hw = 0;
  };

  InclusionStats run_samples(const SelectionConfig& cfg);

  const PopulationModel& model_;
  SelectionConfig config_;
  AnalysisOptions options_;
  bool exact_ = true;
  long evaluations_ = 0;
  std::map<double, CurvePoint> cache_;
  // Cached CRN draws for the Monte Carlo path.
  std::vector<int> peers_, t0_, t1_, ty_;
  double theta_scale_ = 0.0;
};

// Local per-draw evaluator (same math as the Monte Carlo module's; kept
// small and private to avoid exposing workspace types).
struct DrawEval {
  const ScoreSupport& support;
  int m;
  ScoreKind kind;
  double delta;
  std::vector<double> w, x, e, l;
  std::vector<int> ones, counts;
  detail::SubsetWork work;

  DrawEval(const PopulationModel& model, const SelectionConfig& cfg)
      : support(model.support),
        m(cfg.m),
        kind(cfg.score_kind),
        delta(sensitivity(model.support, cfg)),
        ones(cfg.n - 1, 1) {}

  double mechanism(int t, const int* peers, int np, double eps) {
    if (m == 1) {
      double vt = support.value(t);
      double denom = 1.0;
      for (int j = 0; j < np; ++j) {
        denom += std::exp(eps * (support.value(peers[j]) - vt) / (2.0 * delta));
      }
      return 1.0 / denom;
    }
    if (kind == ScoreKind::kMean) {
      // Per-member factor of the subset weight: exp(eps*r/(2*delta*m)).
      const double member_scale = eps / (2.0 * delta * m);
      double ref = support.value(peers[0]);
      for (int j = 1; j < np; ++j) ref = std::max(ref, support.value(peers[j]));
      w.resize(np);
      x.resize(np);
      for (int j = 0; j < np; ++j) {
        x[j] = member_scale * (support.value(peers[j]) - ref);
        w[j] = std::exp(x[j]);
      }
      double log_em, log_em1;
      if (detail::esp_counts(w, ones, m, e)) {
        log_em = std::log(e[m]);
        log_em1 = std::log(e[m - 1]);
      } else {
        detail::esp_counts_log(x, ones, m, l);
        log_em = l[m];
        log_em1 = l[m - 1];
      }
      double x_t = member_scale * (support.value(t) - ref);
      return detail::sigmoid(x_t + log_em1 - log_em);
    }
    counts.assign(support.size(), 0);
    for (int j = 0; j < np; ++j) ++counts[peers[j]];
    ++counts[t];
    return detail::enumerated_mechanism_inclusion(support, counts, t, m, kind,
                                                  eps, delta, work);
  }
};

CurveEval::InclusionStats CurveEval::run_samples(const SelectionConfig& cfg) {
  DrawEval eval(model_, cfg);
  const int np = cfg.n - 1;
  const long samples = static_cast<long>(t0_.size());
  // Streaming moments.
  long k = 0;
  double gm = 0, gm2 = 0, tm = 0, tm2 = 0;
  for (long s = 0; s < samples; ++s) {
    const int* peers = peers_.data() + s * np;
    double i0 = eval.mechanism(t0_[s], peers, np, cfg.epsilon);
    double i1 = t1_[s] == t0_[s] ? i0 : eval.mechanism(t1_[s], peers, np, cfg.epsilon);
    double iy = ty_[s] == t0_[s]   ? i0
                : ty_[s] == t1_[s] ? i1
                                   : eval.mechanism(ty_[s], peers, np, cfg.epsilon);
    double g = i0 - i1;
    double th = theta_scale_ * iy;
    ++k;
    double d = g - gm;
    gm += d / k;
    gm2 += d * (g - gm);
    d = th - tm;
    tm += d / k;
    tm2 += d * (th - tm);
  }
  InclusionStats out;
  out.g_mean = gm;
  out.t_mean = tm;
  if (k > 1) {
    out.g_hw = detail::kZ95 * std::sqrt(gm2 / (k - 1) / k);
    out.t_hw = detail::kZ95 * std::sqrt(tm2 / (k - 1) / k);
  }
  return out;
}

std::vector<double> scan_grid(double hi) {
  std::vector<double> grid;
  for (double e = 0.01; e <= hi * (1 + 1e-12); e *= 2.0) grid.push_back(e);
  if (grid.empty() || grid.back() < hi * (1 - 1e-12)) grid.push_back(hi);
  return grid;
}

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  int lo_sign = 0;
};

// Bisection against gamma = 0 given the sign on the low side. On a Monte
// Carlo curve the iteration keeps resolving the sign of the deterministic
// common-random-numbers curve even below the marginal confidence floor; the
// floor is reported through hit_ci_floor / gamma_ci_at_root as the honest
// precision of the answer rather than used as a hard stop.
double bisect_root(CurveEval& curve, Bracket b, double tol, SolveResult& result) {
  double lo = b.lo, hi = b.hi;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    Val g = curve.gamma(mid);
    if (!curve.exact() && g.ci >= std::max(std::abs(g.value), tol)) {
      result.hit_ci_floor = true;
      result.gamma_ci_at_root = std::max(result.gamma_ci_at_root, g.ci);
    }
    if (std::abs(g.value) <= tol) {
      result.achieved_gamma = g.value;
      if (result.gamma_ci_at_root == 0) result.gamma_ci_at_root = g.ci;
      return mid;
    }
    int s = g.value > 0 ? 1 : -1;
    if (s == b.lo_sign) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
  }
  Val g = curve.gamma(mid);
  result.achieved_gamma = g.value;
  if (result.gamma_ci_at_root == 0) result.gamma_ci_at_root = g.ci;
  return mid;
}

double slope_at_zero(const PopulationModel& model, const SelectionConfig& config,
                     const AnalysisOptions& options) {
  if (config.m == 1 || config.score_kind == ScoreKind::kMean) {
    return exact::gamma_prime_zero(model, config, options.notion);
  }
  if (exact::within_budget(model, config)) {
    return exact::gamma_prime_zero(model, config, options.notion);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// --- condition checks ------------------------------------------------------

struct SelExpectation {
  std::array<Val, 2> per_group;  // E{Z or W | group condition}
};

SelExpectation limit_selection_expectation(const PopulationModel& model,
                                           const SelectionConfig& config,
                                           bool condition_on_y1,
                                           const AnalysisOptions& options,
                                           bool& used_exact) {
  SelExpectation out;
  used_exact = options.engine == EnginePath::kExact ||
               (options.engine == EnginePath::kAuto &&
                exact::within_budget(model, config));
  if (used_exact) {
    exact::LimitReport rep = exact::limit_gamma_theta(model, config);
    for (int a = 0; a < 2; ++a) {
      out.per_group[a].value =
          condition_on_y1 ? rep.e_sel_given_ay1[a] : rep.e_sel_given_a[a];
    }
    return out;
  }
  mc::McOptions opts;
  opts.samples = options.samples;
  opts.argmax_limit = true;
  mc::Target target = config.m == 1 ? mc::Target::kZ : mc::Target::kW;
  for (int a = 0; a < 2; ++a) {
    opts.seed = options.seed + a;
    mc::Condition cond;
    if (condition_on_y1) {
      cond = a == 0 ? mc::Condition::kA0Y1 : mc::Condition::kA1Y1;
    } else {
      cond = a == 0 ? mc::Condition::kA0 : mc::Condition::kA1;
    }
    mc::Estimate est =
        mc::estimate_conditional_expectation(model, config, cond, target, opts);
    out.per_group[a] = {est.mean, est.half_width_95};
  }
  return out;
}

// E{v(G, D) | A_i = a, Y_i = 1} over subsets G containing i, the other m-1
// members iid from the marginal.
std::array<double, 2> expected_group_score(const PopulationModel& model,
                                           const SelectionConfig& config) {
  const int levels = model.support.size();
  const VectorXd f_r = derive_marginals(model).f_r;
  VectorXd per_level = VectorXd::Zero(levels);
  std::vector<int> total(levels);
  detail::Kahan acc;
  for (int t = 0; t < levels; ++t) {
    detail::Kahan sum;
    detail::for_each_score_count(
        f_r, config.m - 1, [&](const std::vector<int>& counts, double w) {
          if (w == 0.0) return;
          std::copy(counts.begin(), counts.end(), total.begin());
          total[t] += 1;
          std::vector<int> k(total.begin(), total.end());
          sum.add(w * detail::subset_value_from_counts(model.support, k,
                                                       config.m,
                                                       config.score_kind));
        });
    per_level[t] = sum.value();
  }
  return {model.pmf(0, 1).dot(per_level), model.pmf(1, 1).dot(per_level)};
}

ConditionReport opposing_advantages_report(Theorem theorem, Val sel0, Val sel1,
                                           double score0, double score1,
                                           const char* sel_name,
                                           const char* score_name) {
  ConditionReport report;
  report.theorem = theorem;
  report.condition_values[std::string(sel_name) + "|A=0"] = sel0.value;
  report.condition_values[std::string(sel_name) + "|A=1"] = sel1.value;
  report.condition_values[std::string(score_name) + "|A=0"] = score0;
  report.condition_values[std::string(score_name) + "|A=1"] = score1;
  double d_sel = sel0.value - sel1.value;
  double d_score = score0 - score1;
  report.condition_values["diff_selection"] = d_sel;
  report.condition_values["diff_score"] = d_score;
  double sel_noise = sel0.ci + sel1.ci;
  if (sel_noise > 0 && std::abs(d_sel) <= sel_noise) {
    report.verdict = Verdict::kNearViolation;
    report.direction = d_score > 0 ? 0 : d_score < 0 ? 1 : -1;
    report.notes = "selection difference inside the Monte Carlo interval";
    return report;
  }
  if (d_score > 0 && d_sel < 0) {
    report.verdict = Verdict::kSatisfied;
    report.direction = 0;
  } else if (d_score < 0 && d_sel > 0) {
    report.verdict = Verdict::kSatisfied;
    report.direction = 1;
  } else {
    report.verdict = Verdict::kViolated;
    report.direction = d_score > 0 ? 0 : d_score < 0 ? 1 : -1;
    report.notes = d_score == 0 && d_sel == 0
                       ? "both differences vanish"
                       : "score and selection advantages point the same way";
  }
  return report;
}

ConditionReport check_always_biased(const PopulationModel& model) {
  const DerivedMarginals marg = derive_marginals(model);
  const VectorXd diff = model.pmf(0, 1) - model.pmf(1, 1);
  const VectorXd& f_r = marg.f_r;
  const int levels = model.support.size();
  double min_increase = std::numeric_limits<double>::infinity();
  double min_decrease = std::numeric_limits<double>::infinity();
  double min_nonneg = std::numeric_limits<double>::infinity();
  for (int j = 0; j + 1 < levels; ++j) {
    min_increase = std::min(min_increase, diff[j + 1] - diff[j]);
    min_decrease = std::min(min_decrease, f_r[j] - f_r[j + 1]);
  }
  for (int j = 1; j < levels; ++j) min_nonneg = std::min(min_nonneg, diff[j]);
  ConditionReport report;
  report.theorem = Theorem::kAlwaysBiased;
  report.condition_values["min_margin_diff_increasing"] = min_increase;
  report.condition_values["min_margin_f_r_decreasing"] = min_decrease;
  report.condition_values["min_diff_above_first_level"] = min_nonneg;
  double weakest = std::min({min_increase, min_decrease, min_nonneg});
  if (weakest > kZeroFloor) {
    report.verdict = Verdict::kSatisfied;
    report.direction = 0;  // bias in favor of A=0
  } else if (weakest >= -kZeroFloor) {
    report.verdict = Verdict::kNearViolation;
    report.direction = 0;
    report.notes = "a strict inequality holds only with equality";
  } else {
    report.verdict = Verdict::kViolated;
    report.direction = -1;
  }
  return report;
}

double theta_inf_value(const PopulationModel& model,
                       const SelectionConfig& config,
                       const AnalysisOptions& options) {
  if (options.engine != EnginePath::kMonteCarlo &&
      exact::within_budget(model, config)) {
    return exact::limit_gamma_theta(model, config).theta;
  }
  const DerivedMarginals marg = derive_marginals(model);
  mc::McOptions opts;
  opts.samples = options.samples;
  opts.seed = options.seed + 7;
  opts.argmax_limit = true;
  mc::Target target = config.m == 1 ? mc::Target::kZ : mc::Target::kW;
  mc::Estimate est = mc::estimate_conditional_expectation(
      model, config, mc::Condition::kY1, target, opts);
  return marg.pr_y1 * (static_cast<double>(config.n) / config.m) * est.mean;
}

Val gamma_inf_value(const PopulationModel& model, const SelectionConfig& config,
                    const AnalysisOptions& options) {
  bool used_exact = false;
  SelExpectation sel = limit_selection_expectation(
      model, config, options.notion == FairnessNotion::kEqualOpportunity,
      options, used_exact);
  Val v;
  v.value = sel.per_group[0].value - sel.per_group[1].value;
  v.ci = sel.per_group[0].ci + sel.per_group[1].ci;
  return v;
}

}  // namespace

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::kRootExists: return "root-exists";
    case Theorem::kAlwaysBiased: return "always-biased";
    case Theorem::kRootExistsSubset: return "root-exists-subset";
    case Theorem::kRootExistsScoreFn: return "root-exists-scorefn";
    case Theorem::kRootExistsDp: return "root-exists-dp";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kSatisfied: return "satisfied";
    case Verdict::kViolated: return "violated";
    case Verdict::kNearViolation: return "near_violation";
  }
  return "?";
}

const char* to_string(SolveKind k) {
  switch (k) {
    case SolveKind::kPerfectFairnessRoot: return "perfect_fairness_root";
    case SolveKind::kConstrainedOptimum: return "constrained_optimum";
    case SolveKind::kFairnessThreshold: return "fairness_threshold";
  }
  return "?";
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kFound: return "found";
    case SolveStatus::kNoRootBracketed: return "no_root_bracketed";
    case SolveStatus::kDegenerate: return "degenerate";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "?";
}

ConditionReport check_conditions(const PopulationModel& model,
                                 const SelectionConfig& config, Theorem theorem,
                                 const AnalysisOptions& options) {
  SelectionConfig cfg = config;
  cfg.epsilon = 0.0;
  cfg.validate();
  const DerivedMarginals marg = derive_marginals(model);
  bool used_exact = false;
  switch (theorem) {
    case Theorem::kRootExists: {
      if (cfg.m != 1) throw Error("root-exists conditions are stated for m = 1");
      SelExpectation sel =
          limit_selection_expectation(model, cfg, true, options, used_exact);
      return opposing_advantages_report(
          theorem, sel.per_group[0], sel.per_group[1], marg.mean_r_qualified[0],
          marg.mean_r_qualified[1], "E{Z|Y=1}", "E{R|Y=1}");
    }
    case Theorem::kRootExistsSubset: {
      if (cfg.m < 2) throw Error("subset conditions need m > 1");
      SelExpectation sel =
          limit_selection_expectation(model, cfg, true, options, used_exact);
      return opposing_advantages_report(
          theorem, sel.per_group[0], sel.per_group[1], marg.mean_r_qualified[0],
          marg.mean_r_qualified[1], "E{W|Y=1}", "E{R|Y=1}");
    }
    case Theorem::kRootExistsScoreFn: {
      if (cfg.m < 2) throw Error("score-function conditions need m > 1");
      SelExpectation sel =
          limit_selection_expectation(model, cfg, true, options, used_exact);
      std::array<double, 2> ev = expected_group_score(model, cfg);
      return opposing_advantages_report(theorem, sel.per_group[0],
                                        sel.per_group[1], ev[0], ev[1],
                                        "E{W|Y=1}", "E{v(G)|Y=1}");
    }
    case Theorem::kRootExistsDp: {
      if (cfg.m != 1) throw Error("the demographic-parity conditions are stated for m = 1");
      SelExpectation sel =
          limit_selection_expectation(model, cfg, false, options, used_exact);
      double mean0 = model.support.values().dot(model.pmf_given_a(0));
      double mean1 = model.support.values().dot(model.pmf_given_a(1));
      return opposing_advantages_report(theorem, sel.per_group[0],
                                        sel.per_group[1], mean0, mean1, "E{Z}",
                                        "E{R}");
    }
    case Theorem::kAlwaysBiased:
      return check_always_biased(model);
  }
  throw Error("unknown theorem");
}

std::vector<ConditionReport> check_all_conditions(
    const PopulationModel& model, const SelectionConfig& config,
    const AnalysisOptions& options) {
  std::vector<ConditionReport> reports;
  if (config.m == 1) {
    reports.push_back(
        check_conditions(model, config, Theorem::kRootExists, options));
    reports.push_back(
        check_conditions(model, config, Theorem::kAlwaysBiased, options));
    reports.push_back(
        check_conditions(model, config, Theorem::kRootExistsDp, options));
  } else if (config.score_kind == ScoreKind::kMean) {
    reports.push_back(
        check_conditions(model, config, Theorem::kRootExistsSubset, options));
  } else {
    reports.push_back(
        check_conditions(model, config, Theorem::kRootExistsScoreFn, options));
  }
  return reports;
}

SolveResult solve_perfect_fairness(const PopulationModel& model,
                                   const SelectionConfig& config,
                                   const AnalysisOptions& options) {
  SelectionConfig cfg = config;
  cfg.epsilon = 0.0;
  cfg.validate();
  SolveResult result;
  result.kind = SolveKind::kPerfectFairnessRoot;
  result.mlr_holds = check_mlr(model).holds;
  result.theta_monotonicity_guaranteed = result.mlr_holds;

  CurveEval curve(model, cfg, options);
  const std::vector<double> grid = scan_grid(options.hi);
  const double slope = slope_at_zero(model, cfg, options);

  double max_abs = std::abs(slope) * grid.front();
  if (std::isnan(max_abs)) max_abs = 0.0;
  int s_prev = 0;
  if (!std::isnan(slope) && std::abs(slope) > kZeroFloor) {
    s_prev = slope > 0 ? 1 : -1;
  }
  double prev_eps = 0.0;
  std::vector<Bracket> brackets;
  for (double eps : grid) {
    Val g = curve.gamma(eps);
    max_abs = std::max(max_abs, std::abs(g.value));
    int s = curve.sign(g, options.tol);
    if (s != 0) {
      if (s_prev != 0 && s != s_prev) {
        brackets.push_back({prev_eps, eps, s_prev});
      }
      s_prev = s;
      prev_eps = eps;
    }
  }
  result.evaluations = curve.evaluations();
  result.bracket = {grid.front(), grid.back()};

  const double degenerate_floor =
      curve.exact() ? kZeroFloor : options.tol;
  if (max_abs <= degenerate_floor && brackets.empty()) {
    result.status = SolveStatus::kDegenerate;
    result.degenerate_identically_zero = true;
    result.epsilon_star = 0.0;
    result.achieved_gamma = 0.0;
    result.achieved_theta = curve.theta(0.0).value;
    result.evaluations = curve.evaluations();
    return result;
  }
  for (const Bracket& b : brackets) {
    result.sign_changes.emplace_back(b.lo, b.hi);
  }
  if (brackets.empty()) {
    result.status = SolveStatus::kNoRootBracketed;
    result.epsilon_star = 0.0;
    result.achieved_gamma = curve.gamma(grid.back()).value;
    result.achieved_theta = curve.theta(grid.back()).value;
    result.evaluations = curve.evaluations();
    return result;
  }
  Bracket first = brackets.front();
  double root = bisect_root(curve, first, options.tol, result);
  result.status = SolveStatus::kFound;
  result.epsilon_star = root;
  result.bracket = {first.lo, first.hi};
  result.achieved_theta = curve.theta(root).value;
  result.evaluations = curve.evaluations();
  return result;
}

SolveResult solve_constrained_optimum(const PopulationModel& model,
                                      const SelectionConfig& config,
                                      double epsilon_max, double gamma_max,
                                      const AnalysisOptions& options) {
  SelectionConfig cfg = config;
  cfg.epsilon = 0.0;
  cfg.validate();
  SolveResult result;
  result.kind = SolveKind::kConstrainedOptimum;
  if (!(epsilon_max > 0) || !std::isfinite(epsilon_max)) {
    throw Error("epsilon_max must be positive and finite");
  }
  result.mlr_holds = check_mlr(model).holds;
  result.theta_monotonicity_guaranteed = result.mlr_holds;
  if (gamma_max < 0) {
    // gamma(0) = 0 <= gamma_max fails only when the constraint itself is
    // malformed.
    result.status = SolveStatus::kInfeasible;
    return result;
  }
  CurveEval curve(model, cfg, options);

  // Descending grid from epsilon_max, closed by 0 where the constraint is
  // always feasible.
  std::vector<double> grid;
  grid.push_back(epsilon_max);
  for (double e : scan_grid(options.hi)) {
    if (e < epsilon_max * (1 - 1e-12)) grid.push_back(e);
  }
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end(), std::greater<>());

  auto feasible = [&](double eps) {
    return std::abs(curve.gamma(eps).value) <= gamma_max;
  };

  if (feasible(epsilon_max)) {
    result.status = SolveStatus::kFound;
    result.epsilon_star = epsilon_max;
    result.achieved_gamma = curve.gamma(epsilon_max).value;
    result.achieved_theta = curve.theta(epsilon_max).value;
    result.gamma_ci_at_root = curve.gamma(epsilon_max).ci;
    result.bracket = {epsilon_max, epsilon_max};
    result.evaluations = curve.evaluations();
    return result;
  }

  std::vector<char> feas(grid.size());
  int transitions = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    feas[i] = feasible(grid[i]) ? 1 : 0;
    if (i > 0 && feas[i] != feas[i - 1]) ++transitions;
  }
  result.non_monotone_gamma = transitions > 1;

  // Largest feasible crossing at or below epsilon_max. Without the
  // monotone-likelihood guarantee a grid search over theta follows.
  std::size_t cross = grid.size();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!feas[i - 1] && feas[i]) {
      cross = i;
      break;
    }
  }
  if (cross == grid.size()) {
    // No transition found: everything below eps_max infeasible except 0,
    // which cannot happen with gamma(0) = 0 unless tolerances are abused.
    result.status = SolveStatus::kInfeasible;
    result.evaluations = curve.evaluations();
    return result;
  }
  // Bisect |gamma| - gamma_max between the infeasible (hi) and feasible
  // (lo) grid neighbors.
  double lo = grid[cross];      // feasible
  double hi = grid[cross - 1];  // infeasible
  double mid = lo;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    Val g = curve.gamma(mid);
    double excess = std::abs(g.value) - gamma_max;
    if (!curve.exact() && g.ci >= std::max(std::abs(excess), options.tol)) {
      result.hit_ci_floor = true;
      result.gamma_ci_at_root = std::max(result.gamma_ci_at_root, g.ci);
    }
    if (std::abs(excess) <= options.tol) break;
    if (excess > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
  }
  result.epsilon_star = mid;
  result.bracket = {grid[cross], grid[cross - 1]};
  result.achieved_gamma = curve.gamma(mid).value;
  result.gamma_ci_at_root = curve.gamma(mid).ci;
  result.achieved_theta = curve.theta(mid).value;
  result.status = SolveStatus::kFound;

  if (!result.mlr_holds) {
    // Theta may be non-monotone: grid-search argmax of theta over the
    // feasible set and keep the better point.
    std::vector<double> search = grid;
    for (int i = 1; i <= 64; ++i) {
      search.push_back(epsilon_max * i / 64.0);
    }
    std::sort(search.begin(), search.end());
    double best_theta = -1.0;
    double best_eps = 0.0;
    for (double eps : search) {
      if (eps > epsilon_max) continue;
      if (!feasible(eps)) continue;
      double th = curve.theta(eps).value;
      if (th > best_theta) {
        best_theta = th;
        best_eps = eps;
      }
    }
    if (best_theta > result.achieved_theta) {
      result.epsilon_star = best_eps;
      result.achieved_theta = best_theta;
      result.achieved_gamma = curve.gamma(best_eps).value;
      result.gamma_ci_at_root = curve.gamma(best_eps).ci;
      result.status = SolveStatus::kFound;
    }
  }
  result.evaluations = curve.evaluations();
  return result;
}

SolveResult fairness_threshold(const PopulationModel& model,
                               const SelectionConfig& config,
                               const AnalysisOptions& options) {
  SelectionConfig cfg = config;
  cfg.epsilon = 0.0;
  cfg.validate();
  SolveResult result;
  result.kind = SolveKind::kFairnessThreshold;
  result.mlr_holds = check_mlr(model).holds;
  result.theta_monotonicity_guaranteed = result.mlr_holds;
  Val gamma_inf = gamma_inf_value(model, cfg, options);
  if (std::abs(gamma_inf.value) <= std::max(kZeroFloor, gamma_inf.ci)) {
    result.status = SolveStatus::kDegenerate;
    result.degenerate_identically_zero = true;
    return result;
  }
  CurveEval curve(model, cfg, options);
  const std::vector<double> grid = scan_grid(options.hi);
  double best = -1.0;
  bool all = true;
  for (double eps : grid) {
    Val g = curve.gamma(eps);
    if (std::abs(g.value) < std::abs(gamma_inf.value) - options.tol) {
      best = std::max(best, eps);
    } else {
      all = false;
    }
  }
  result.evaluations = curve.evaluations();
  result.bracket = {grid.front(), grid.back()};
  result.achieved_gamma = gamma_inf.value;
  if (best < 0) {
    result.status = SolveStatus::kNoRootBracketed;
    return result;
  }
  result.status = SolveStatus::kFound;
  result.epsilon_star = all ? grid.back() : best;
  result.achieved_gamma = curve.gamma(result.epsilon_star).value;
  result.achieved_theta = curve.theta(result.epsilon_star).value;
  return result;
}

std::vector<Table1Row> accuracy_reduction_table(
    const PopulationModel& model, const SelectionConfig& base_config,
    const std::vector<int>& m_list, const AnalysisOptions& options) {
  std::vector<Table1Row> rows;
  for (int m : m_list) {
    SelectionConfig cfg = base_config;
    cfg.m = m;
    cfg.epsilon = 0.0;
    cfg.validate();
    Table1Row row;
    row.m = m;
    row.theta_inf = theta_inf_value(model, cfg, options);
    SolveResult solve = solve_perfect_fairness(model, cfg, options);
    row.status = solve.status;
    if (solve.status == SolveStatus::kFound) {
      row.eps_o = solve.epsilon_star;
      row.theta_at_eps_o = solve.achieved_theta;
    } else {
      // No positive root: report the eps_o = 0 row (uniform selection).
      row.eps_o = 0.0;
      CurveEval curve(model, cfg, options);
      row.theta_at_eps_o = curve.theta(0.0).value;
    }
    row.reduction_pct =
        row.theta_inf > 0
            ? (row.theta_inf - row.theta_at_eps_o) / row.theta_inf * 100.0
            : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fairselect::analysis
