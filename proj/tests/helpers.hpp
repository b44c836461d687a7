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

#ifndef FAIRSELECT_TESTS_HELPERS_HPP_
#define FAIRSELECT_TESTS_HELPERS_HPP_

#include <initializer_list>
#include <vector>

#include "fairselect/model.hpp"
#include "fairselect/sampler.hpp"
#include "fairselect/types.hpp"

namespace fairselect::testing {

inline VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline PopulationModel make_model(std::initializer_list<double> support,
                                  double prior_a0, double q0, double q1,
                                  std::initializer_list<double> f_a0_y1,
                                  std::initializer_list<double> f_a1_y1,
                                  std::initializer_list<double> f_a0_y0,
                                  std::initializer_list<double> f_a1_y0) {
  std::array<std::array<VectorXd, 2>, 2> pmfs;
  pmfs[0][1] = vec(f_a0_y1);
  pmfs[1][1] = vec(f_a1_y1);
  pmfs[0][0] = vec(f_a0_y0);
  pmfs[1][0] = vec(f_a1_y0);
  return build_model(ScoreSupport(vec(support)), prior_a0, {q0, q1}, pmfs);
}

// Two-level support, everything uniform.
inline PopulationModel uniform_model() {
  return make_model({0.0, 1.0}, 0.5, 0.5, 0.5, {0.5, 0.5}, {0.5, 0.5},
                    {0.5, 0.5}, {0.5, 0.5});
}

// Identical qualified PMFs across groups: gamma must vanish for every eps.
inline PopulationModel symmetric_model() {
  return make_model({0.0, 0.5, 1.0}, 0.4, 0.3, 0.3, {0.2, 0.5, 0.3},
                    {0.2, 0.5, 0.3}, {0.5, 0.3, 0.2}, {0.5, 0.3, 0.2});
}

// The repo's stand-in experiment model: opposite selection and score
// advantages for m in {1,2,3}, both favoring group 1 at m = 4; the marginal
// likelihood ratio is monotone. Used together with n = 10.
inline PopulationModel standin_model() {
  return make_model({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, 0.1, 0.3, 0.4,
                    {0.33, 0.04, 0.03, 0.05, 0.12, 0.43},
                    {0.02, 0.05, 0.18, 0.40, 0.25, 0.10},
                    {0.35, 0.25, 0.18, 0.12, 0.07, 0.03},
                    {0.35, 0.25, 0.18, 0.12, 0.07, 0.03});
}

// Structured-bias regime: f^0 - f^1 strictly increasing, nonnegative above
// the bottom level, marginal pmf strictly decreasing. The unqualified pmf is
// chosen so the marginal likelihood ratio is monotone too.
inline PopulationModel structured_bias_model() {
  return make_model({0.0, 0.25, 0.5, 0.75, 1.0}, 0.5, 0.4, 0.4,
                    {0.30, 0.255, 0.21, 0.135, 0.10},
                    {0.40, 0.245, 0.19, 0.105, 0.06},
                    {0.45, 0.27, 0.16, 0.08, 0.04},
                    {0.45, 0.27, 0.16, 0.08, 0.04});
}

// High-variance group 0 versus concentrated group 1 on three levels; the
// root-existence conditions hold with a = 1 and the marginal MLR holds.
inline PopulationModel opposing_advantage_model() {
  return make_model({0.0, 0.5, 1.0}, 0.5, 0.4, 0.4, {0.45, 0.10, 0.45},
                    {0.05, 0.85, 0.10}, {0.60, 0.30, 0.10},
                    {0.60, 0.30, 0.10});
}

// Random normalized PMF with strictly positive entries.
inline VectorXd random_pmf(int levels, Rng& rng) {
  VectorXd v(levels);
  double sum = 0.0;
  for (int i = 0; i < levels; ++i) {
    v[i] = 0.05 + rng.next_double();
    sum += v[i];
  }
  return v / sum;
}

inline PopulationModel random_model(int levels, Rng& rng) {
  VectorXd support(levels);
  for (int i = 0; i < levels; ++i) {
    support[i] = static_cast<double>(i) / (levels - 1);
  }
  std::array<std::array<VectorXd, 2>, 2> pmfs;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) pmfs[a][y] = random_pmf(levels, rng);
  }
  double prior = 0.2 + 0.6 * rng.next_double();
  double q0 = 0.2 + 0.6 * rng.next_double();
  double q1 = 0.2 + 0.6 * rng.next_double();
  return build_model(ScoreSupport(support), prior, {q0, q1}, pmfs);
}

// Model whose marginal f_{R|Y} pair has a monotone likelihood ratio by
// construction: both groups share the same conditionals, and the qualified
// PMF is the unqualified one reweighted by an increasing factor.
inline PopulationModel random_mlr_model(int levels, Rng& rng) {
  VectorXd support(levels);
  for (int i = 0; i < levels; ++i) {
    support[i] = static_cast<double>(i) / (levels - 1);
  }
  VectorXd f_y0 = random_pmf(levels, rng);
  VectorXd f_y1(levels);
  double ratio = 0.2 + rng.next_double();
  for (int i = 0; i < levels; ++i) {
    f_y1[i] = f_y0[i] * ratio;
    ratio += 0.1 + rng.next_double();  // strictly increasing likelihood ratio
  }
  f_y1 /= f_y1.sum();
  std::array<std::array<VectorXd, 2>, 2> pmfs;
  for (int a = 0; a < 2; ++a) {
    pmfs[a][1] = f_y1;
    pmfs[a][0] = f_y0;
  }
  double q = 0.2 + 0.6 * rng.next_double();
  return build_model(ScoreSupport(support), 0.3 + 0.4 * rng.next_double(),
                     {q, q}, pmfs);
}

}  // namespace fairselect::testing

#endif  // FAIRSELECT_TESTS_HELPERS_HPP_
