// Copyright 2026 The maskcoref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Maximum-likelihood multinomial logistic regression, ordinary least squares
// and the nested-model tests used to compare them.

#ifndef MASKCOREF_STATS_H_
#define MASKCOREF_STATS_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace maskcoref {

struct MultinomialConfig {
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  double separation_bound = 1e3;
  double rank_tolerance = 1e-10;
};

// Coefficients are stored per non-baseline class (rows, ascending class id)
// and design column (columns). The baseline logit is fixed at 0.
struct MultinomialFit {
  std::vector<std::string> columns;
  int num_classes = 0;
  int baseline = 0;
  std::vector<int> classes;  // non-baseline classes, one per coefficient row
  Eigen::MatrixXd coef;
  Eigen::MatrixXd se;
  Eigen::MatrixXd z;
  Eigen::MatrixXd p;
  double loglik = 0.0;
  double deviance = 0.0;
  int n = 0;
  int iterations = 0;
  double gradient_norm = 0.0;

  int num_parameters() const { return static_cast<int>(coef.size()); }
};

// Log-likelihood and its gradient at `beta`, the coefficient matrix flattened
// row-major ((K-1) x p). Exposed for derivative checks.
double MultinomialLogLik(const Eigen::MatrixXd &x, std::span<const int> y,
                         int num_classes, int baseline, const Eigen::VectorXd &beta);
Eigen::VectorXd MultinomialGradient(const Eigen::MatrixXd &x, std::span<const int> y,
                                    int num_classes, int baseline,
                                    const Eigen::VectorXd &beta);

// Newton iterations with step halving from zero. Labels are 0..num_classes-1.
// Throws RankDeficient, ClassMissing, Separation, NonConvergence and
// RowMismatch.
MultinomialFit FitMultinomial(const Eigen::MatrixXd &x, std::span<const int> y,
                              int num_classes, int baseline,
                              std::vector<std::string> columns = {},
                              const MultinomialConfig &config = {});

// n x num_classes class probabilities. Throws ColumnMismatch.
Eigen::MatrixXd PredictedProbabilities(const MultinomialFit &fit,
                                       const Eigen::MatrixXd &x);

struct LinearFit {
  std::vector<std::string> columns;
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  Eigen::VectorXd t;
  Eigen::VectorXd p;
  double rss = 0.0;
  double r2 = 0.0;
  int n = 0;
  int df_residual = 0;
};

// Least squares by column-pivoted QR with classical standard errors. Throws
// TooFewRows, RankDeficient, RowMismatch.
LinearFit FitLinear(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
                    std::vector<std::string> columns = {},
                    double rank_tolerance = 1e-10);

struct NestedTest {
  std::string kind;     // "LR" or "F"
  std::string dropped;  // label of the removed term
  double statistic = 0.0;
  double df = 0.0;
  double df2 = 0.0;     // F denominator, 0 for LR
  double p = 1.0;
};

// 2 (ll_full - ll_reduced) against chi-squared with one degree of freedom per
// removed parameter. Throws NotNested, RowMismatch.
NestedTest LrTest(const MultinomialFit &full, const MultinomialFit &reduced,
                  std::string dropped = "");

// ((RSS_r - RSS_f) / q) / (RSS_f / (n - p_f)) against F(q, n - p_f). Throws
// NotNested, RowMismatch, ZeroResidual.
NestedTest FTest(const LinearFit &full, const LinearFit &reduced,
                 std::string dropped = "");

}  // namespace maskcoref

#endif  // MASKCOREF_STATS_H_
