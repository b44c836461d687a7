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

#include "fairselect/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fairselect {

namespace {

std::string pmf_name(int a, int y) {
  std::ostringstream os;
  os << "score_pmf.a" << a << "_y" << y;
  return os.str();
}

}  // namespace

ScoreSupport::ScoreSupport(VectorXd values, int digits) : digits_(digits) {
  if (digits < 0 || digits > 9) {
    throw Error("support digits must be in [0, 9]");
  }
  if (values.size() < 2) {
    throw UnsortedSupport("support needs at least two levels");
  }
  scale_ = std::pow(10.0, digits);
  keys_.resize(values.size());
  values_.resize(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream os;
      os << "support value " << v << " outside [0, 1]";
      throw UnsortedSupport(os.str());
    }
    keys_[i] = static_cast<std::int64_t>(std::llround(v * scale_));
    values_[i] = static_cast<double>(keys_[i]) / scale_;
  }
  for (std::size_t i = 1; i < keys_.size(); ++i) {
    if (keys_[i] <= keys_[i - 1]) {
      std::ostringstream os;
      os << "support not strictly increasing at index " << i
         << " after quantization to " << digits << " digits";
      throw UnsortedSupport(os.str());
    }
  }
}

VectorXd PopulationModel::pmf_given_a(int a) const {
  return qual_rate[a] * score_pmf[a][1] +
         (1.0 - qual_rate[a]) * score_pmf[a][0];
}

const char* to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kMean: return "mean";
    case ScoreKind::kRms: return "rms";
    case ScoreKind::kMin: return "min";
    case ScoreKind::kMax: return "max";
  }
  return "?";
}

const char* to_string(FairnessNotion notion) {
  return notion == FairnessNotion::kEqualOpportunity ? "eo" : "dp";
}

void SelectionConfig::validate() const {
  if (n < 2) throw Error("pool size n must be >= 2");
  if (m < 1 || m >= n) throw Error("selections m must satisfy 1 <= m < n");
  if (!std::isfinite(epsilon) || epsilon < 0) {
    throw Error("epsilon must be finite and >= 0");
  }
}

double sensitivity(const ScoreSupport& support, const SelectionConfig& config) {
  if (config.m == 1) return support.range();
  switch (config.score_kind) {
    case ScoreKind::kMean:
      return support.range() / config.m;
    case ScoreKind::kMin:
    case ScoreKind::kMax:
      return support.range();
    case ScoreKind::kRms:
      // Conservative one-coordinate bound; range/sqrt(m) is not valid in
      // general.
      return support.max_value();
  }
  return support.range();
}

PopulationModel build_model(ScoreSupport support, double prior_a0,
                            std::array<double, 2> qual_rates,
                            std::array<std::array<VectorXd, 2>, 2> score_pmfs) {
  if (!(prior_a0 > 0.0 && prior_a0 < 1.0)) {
    throw OutOfRangeProbability("prior_a0 must lie in (0, 1)");
  }
  for (int a = 0; a < 2; ++a) {
    if (!(qual_rates[a] >= 0.0 && qual_rates[a] <= 1.0)) {
      std::ostringstream os;
      os << "qual_rate.a" << a << " outside [0, 1]";
      throw OutOfRangeProbability(os.str());
    }
  }
  const Eigen::Index levels = support.values().size();
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      VectorXd& pmf = score_pmfs[a][y];
      if (pmf.size() != levels) {
        throw NonNormalizedPmf(pmf_name(a, y) + ": length does not match support");
      }
      double sum = 0.0;
      for (Eigen::Index i = 0; i < pmf.size(); ++i) {
        if (!(pmf[i] >= 0.0) || pmf[i] > 1.0 + kPmfTolerance) {
          std::ostringstream os;
          os << pmf_name(a, y) << "[" << i << "] = " << pmf[i]
             << " is not a probability";
          throw OutOfRangeProbability(os.str());
        }
        sum += pmf[i];
      }
      if (std::abs(sum - 1.0) > kPmfTolerance) {
        std::ostringstream os;
        os << pmf_name(a, y) << " sums to " << sum << " (tolerance "
           << kPmfTolerance << ")";
        throw NonNormalizedPmf(os.str());
      }
      pmf /= sum;
    }
  }
  PopulationModel model;
  model.support = std::move(support);
  model.prior_a0 = prior_a0;
  model.qual_rate = qual_rates;
  model.score_pmf = std::move(score_pmfs);
  return model;
}

DerivedMarginals derive_marginals(const PopulationModel& model) {
  DerivedMarginals d;
  const Eigen::Index levels = model.support.values().size();
  d.f_r = VectorXd::Zero(levels);
  VectorXd f_y1 = VectorXd::Zero(levels);
  VectorXd f_y0 = VectorXd::Zero(levels);
  double w_y1 = 0.0;
  double w_y0 = 0.0;
  for (int a = 0; a < 2; ++a) {
    double pa = model.pr_a(a);
    double q = model.qual_rate[a];
    d.f_r += pa * q * model.pmf(a, 1) + pa * (1.0 - q) * model.pmf(a, 0);
    f_y1 += pa * q * model.pmf(a, 1);
    f_y0 += pa * (1.0 - q) * model.pmf(a, 0);
    w_y1 += pa * q;
    w_y0 += pa * (1.0 - q);
    d.mean_r_qualified[a] = model.support.values().dot(model.pmf(a, 1));
  }
  d.pr_y1 = w_y1;
  // Degenerate priors (all qualified or none) leave one conditional with no
  // mass; report it as uniform so the struct stays well-formed.
  d.f_r_given_y1 = w_y1 > 0 ? VectorXd(f_y1 / w_y1)
                            : VectorXd(VectorXd::Constant(levels, 1.0 / levels));
  d.f_r_given_y0 = w_y0 > 0 ? VectorXd(f_y0 / w_y0)
                            : VectorXd(VectorXd::Constant(levels, 1.0 / levels));
  return d;
}

MlrResult check_mlr(const PopulationModel& model) {
  const DerivedMarginals d = derive_marginals(model);
  const VectorXd& f1 = d.f_r_given_y1;
  const VectorXd& f0 = d.f_r_given_y0;
  MlrResult result;
  result.holds = true;
  double last_ratio = -1.0;
  Eigen::Index last_idx = -1;
  bool saw_infinite = false;
  Eigen::Index infinite_idx = -1;
  for (Eigen::Index i = 0; i < f1.size(); ++i) {
    if (f0[i] > 0.0) {
      if (saw_infinite) {
        // A finite-ratio point above an infinite one breaks monotonicity.
        result.holds = false;
        result.witness = {model.support.value(i),
                          model.support.value(infinite_idx)};
        return result;
      }
      double ratio = f1[i] / f0[i];
      if (last_idx >= 0 && ratio < last_ratio) {
        result.holds = false;
        result.witness = {model.support.value(i), model.support.value(last_idx)};
        return result;
      }
      last_ratio = ratio;
      last_idx = i;
    } else if (f1[i] > 0.0) {
      saw_infinite = true;
      infinite_idx = i;
    }
    // f1 = f0 = 0: no mass either way, no constraint.
  }
  return result;
}

}  // namespace fairselect
