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

#include "maskcoref/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maskcoref/distributions.h"
#include "maskcoref/error.h"

namespace maskcoref {
namespace {

std::vector<std::string> DefaultColumns(std::vector<std::string> columns, int p) {
  if (static_cast<int>(columns.size()) == p) return columns;
  if (!columns.empty()) {
    throw Error(ErrorCode::kColumnMismatch,
                std::to_string(columns.size()) + " column names for " +
                    std::to_string(p) + " design columns");
  }
  for (int j = 0; j < p; ++j) columns.push_back("x" + std::to_string(j));
  return columns;
}

void CheckRank(const Eigen::MatrixXd &x, const std::vector<std::string> &columns,
               double tolerance) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(tolerance);
  const int rank = static_cast<int>(qr.rank());
  if (rank == x.cols()) return;
  std::string names;
  for (Eigen::Index k = rank; k < x.cols(); ++k) {
    if (!names.empty()) names += ", ";
    names += columns[qr.colsPermutation().indices()[k]];
  }
  throw Error(ErrorCode::kRankDeficient,
              "design has rank " + std::to_string(rank) + " < " +
                  std::to_string(x.cols()) + "; dependent columns: " + names);
}

// Row-major (K-1) x p view of the flat parameter vector.
Eigen::MatrixXd AsMatrix(const Eigen::VectorXd &beta, int rows, int cols) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(beta.data(), rows, cols);
}

// Non-baseline class probabilities (n x (K-1)) and the log-likelihood.
double ClassProbabilities(const Eigen::MatrixXd &x, std::span<const int> y,
                          int num_classes, int baseline,
                          const Eigen::VectorXd &beta, Eigen::MatrixXd &probs) {
  const int k1 = num_classes - 1;
  const Eigen::MatrixXd b = AsMatrix(beta, k1, static_cast<int>(x.cols()));
  const Eigen::MatrixXd eta = x * b.transpose();
  probs.resize(x.rows(), k1);
  double loglik = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double max = 0.0;  // the baseline logit
    for (int k = 0; k < k1; ++k) max = std::max(max, eta(i, k));
    double sum = std::exp(-max);
    for (int k = 0; k < k1; ++k) sum += std::exp(eta(i, k) - max);
    const double log_norm = max + std::log(sum);
    for (int k = 0; k < k1; ++k) probs(i, k) = std::exp(eta(i, k) - log_norm);
    const int label = y[i];
    if (label == baseline) {
      loglik -= log_norm;
    } else {
      loglik += eta(i, label < baseline ? label : label - 1) - log_norm;
    }
  }
  return loglik;
}

int RowOf(int label, int baseline) {
  if (label == baseline) return -1;
  return label < baseline ? label : label - 1;
}

Eigen::VectorXd Gradient(const Eigen::MatrixXd &x, std::span<const int> y,
                         int baseline, const Eigen::MatrixXd &probs) {
  const int k1 = static_cast<int>(probs.cols());
  const int p = static_cast<int>(x.cols());
  Eigen::MatrixXd residual = -probs;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int row = RowOf(y[i], baseline);
    if (row >= 0) residual(i, row) += 1.0;
  }
  const Eigen::MatrixXd g = residual.transpose() * x;  // (K-1) x p
  Eigen::VectorXd flat(k1 * p);
  for (int k = 0; k < k1; ++k) {
    for (int j = 0; j < p; ++j) flat[k * p + j] = g(k, j);
  }
  return flat;
}

// Observed (= expected) information, the negative Hessian.
Eigen::MatrixXd Information(const Eigen::MatrixXd &x, const Eigen::MatrixXd &probs) {
  const int k1 = static_cast<int>(probs.cols());
  const int p = static_cast<int>(x.cols());
  Eigen::MatrixXd info(k1 * p, k1 * p);
  for (int a = 0; a < k1; ++a) {
    for (int b = a; b < k1; ++b) {
      Eigen::VectorXd w = -probs.col(a).cwiseProduct(probs.col(b));
      if (a == b) w += probs.col(a);
      const Eigen::MatrixXd block = x.transpose() * w.asDiagonal() * x;
      info.block(a * p, b * p, p, p) = block;
      if (a != b) info.block(b * p, a * p, p, p) = block.transpose();
    }
  }
  return info;
}

void CheckLabels(std::span<const int> y, int num_classes, int baseline,
                 Eigen::Index rows) {
  if (static_cast<Eigen::Index>(y.size()) != rows) {
    throw Error(ErrorCode::kRowMismatch, "design has " + std::to_string(rows) +
                                             " rows but " + std::to_string(y.size()) +
                                             " labels");
  }
  if (num_classes < 2 || baseline < 0 || baseline >= num_classes) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two classes and a valid baseline");
  }
  std::vector<int> counts(num_classes, 0);
  for (int label : y) {
    if (label < 0 || label >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "label " + std::to_string(label) +
                                                   " out of range");
    }
    ++counts[label];
  }
  for (int k = 0; k < num_classes; ++k) {
    if (counts[k] == 0) {
      throw Error(ErrorCode::kClassMissing,
                  "class " + std::to_string(k) + " has no observations");
    }
  }
}

std::string ParameterName(const MultinomialFit &fit, int index) {
  const int p = static_cast<int>(fit.columns.size());
  return fit.columns[index % p] + " (class " +
         std::to_string(fit.classes[index / p]) + ")";
}

}  // namespace

double MultinomialLogLik(const Eigen::MatrixXd &x, std::span<const int> y,
                         int num_classes, int baseline, const Eigen::VectorXd &beta) {
  Eigen::MatrixXd probs;
  return ClassProbabilities(x, y, num_classes, baseline, beta, probs);
}

Eigen::VectorXd MultinomialGradient(const Eigen::MatrixXd &x, std::span<const int> y,
                                    int num_classes, int baseline,
                                    const Eigen::VectorXd &beta) {
  Eigen::MatrixXd probs;
  ClassProbabilities(x, y, num_classes, baseline, beta, probs);
  return Gradient(x, y, baseline, probs);
}

MultinomialFit FitMultinomial(const Eigen::MatrixXd &x, std::span<const int> y,
                              int num_classes, int baseline,
                              std::vector<std::string> columns,
                              const MultinomialConfig &config) {
  CheckLabels(y, num_classes, baseline, x.rows());
  const int p = static_cast<int>(x.cols());
  MultinomialFit fit;
  fit.columns = DefaultColumns(std::move(columns), p);
  CheckRank(x, fit.columns, config.rank_tolerance);
  fit.num_classes = num_classes;
  fit.baseline = baseline;
  for (int k = 0; k < num_classes; ++k) {
    if (k != baseline) fit.classes.push_back(k);
  }
  fit.n = static_cast<int>(x.rows());
  const int k1 = num_classes - 1;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k1 * p);
  Eigen::MatrixXd probs;
  double loglik = ClassProbabilities(x, y, num_classes, baseline, beta, probs);
  Eigen::VectorXd grad = Gradient(x, y, baseline, probs);
  Eigen::MatrixXd info = Information(x, probs);
  bool converged = false;
  int iteration = 0;
  for (; iteration < config.max_iterations; ++iteration) {
    if (grad.norm() < config.gradient_tolerance) {
      converged = true;
      break;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    const Eigen::VectorXd delta = ldlt.solve(grad);
    if (!delta.allFinite()) break;
    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
      Eigen::MatrixXd next_probs;
      const Eigen::VectorXd next = beta + step * delta;
      const double next_loglik =
          ClassProbabilities(x, y, num_classes, baseline, next, next_probs);
      // Ties are accepted so Newton can keep polishing a flat optimum.
      if (std::isfinite(next_loglik) &&
          next_loglik >= loglik - 1e-12 * (1.0 + std::abs(loglik))) {
        beta = next;
        loglik = next_loglik;
        probs = std::move(next_probs);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    Eigen::Index worst;
    if (beta.cwiseAbs().maxCoeff(&worst) > config.separation_bound) {
      fit.classes.resize(k1);
      throw Error(ErrorCode::kSeparation,
                  "coefficient of " + ParameterName(fit, static_cast<int>(worst)) +
                      " diverges (|beta| > " + std::to_string(config.separation_bound) +
                      "); the outcome is separated");
    }
    grad = Gradient(x, y, baseline, probs);
    info = Information(x, probs);
  }

  // A vanishing gradient with a singular or near-singular information matrix
  // means the likelihood only flattens out at infinity.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  Eigen::VectorXd residual_step;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    residual_step = ldlt.solve(grad);
  }
  Eigen::Index worst = 0;
  const bool singular = residual_step.size() == 0 || !residual_step.allFinite() ||
                        ldlt.vectorD().minCoeff() <= 0.0;
  if (singular || residual_step.cwiseAbs().maxCoeff(&worst) > 1e-3) {
    if (converged || singular) {
      throw Error(ErrorCode::kSeparation,
                  "information matrix is singular at the optimum near " +
                      ParameterName(fit, static_cast<int>(worst)) +
                      "; the outcome is separated");
    }
  }
  if (!converged) {
    throw Error(ErrorCode::kNonConvergence,
                "multinomial fit did not converge in " +
                    std::to_string(config.max_iterations) +
                    " iterations (gradient norm " + std::to_string(grad.norm()) + ")");
  }

  const Eigen::MatrixXd cov =
      ldlt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
  fit.coef = AsMatrix(beta, k1, p);
  fit.se.resize(k1, p);
  fit.z.resize(k1, p);
  fit.p.resize(k1, p);
  for (int k = 0; k < k1; ++k) {
    for (int j = 0; j < p; ++j) {
      const int idx = k * p + j;
      const double var = cov(idx, idx);
      if (!(var > 0.0)) {
        throw Error(ErrorCode::kSeparation,
                    "non-positive variance for " + ParameterName(fit, idx));
      }
      fit.se(k, j) = std::sqrt(var);
      fit.z(k, j) = fit.coef(k, j) / fit.se(k, j);
      fit.p(k, j) = TwoSidedP(StandardNormalDist{}, fit.z(k, j));
    }
  }
  fit.loglik = loglik;
  fit.deviance = -2.0 * loglik;
  fit.iterations = iteration;
  fit.gradient_norm = grad.norm();
  return fit;
}

Eigen::MatrixXd PredictedProbabilities(const MultinomialFit &fit,
                                       const Eigen::MatrixXd &x) {
  if (x.cols() != fit.coef.cols()) {
    throw Error(ErrorCode::kColumnMismatch,
                "design has " + std::to_string(x.cols()) + " columns, fit has " +
                    std::to_string(fit.coef.cols()));
  }
  const Eigen::MatrixXd eta = x * fit.coef.transpose();
  Eigen::MatrixXd probs(x.rows(), fit.num_classes);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<double> logits(fit.num_classes, 0.0);
    for (size_t k = 0; k < fit.classes.size(); ++k) logits[fit.classes[k]] = eta(i, k);
    const double max = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - max);
    for (int k = 0; k < fit.num_classes; ++k) {
      probs(i, k) = std::exp(logits[k] - max) / sum;
    }
  }
  return probs;
}

LinearFit FitLinear(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
                    std::vector<std::string> columns, double rank_tolerance) {
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::kRowMismatch, "design has " + std::to_string(x.rows()) +
                                             " rows but " + std::to_string(y.size()) +
                                             " outcomes");
  }
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (n <= p) {
    throw Error(ErrorCode::kTooFewRows, std::to_string(n) + " rows for " +
                                            std::to_string(p) + " coefficients");
  }
  LinearFit fit;
  fit.columns = DefaultColumns(std::move(columns), p);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(rank_tolerance);
  if (qr.rank() < p) CheckRank(x, fit.columns, rank_tolerance);

  fit.n = n;
  fit.df_residual = n - p;
  fit.coef = qr.solve(y);
  const Eigen::VectorXd residual = y - x * fit.coef;
  fit.rss = residual.squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();
  fit.r2 = tss > 0.0 ? 1.0 - fit.rss / tss : (fit.rss == 0.0 ? 1.0 : 0.0);

  // cov = sigma^2 (X'X)^-1 = sigma^2 P R^-1 R^-T P'.
  const Eigen::MatrixXd r =
      qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd unscaled =
      qr.colsPermutation() * (r_inv * r_inv.transpose()) *
      qr.colsPermutation().transpose();
  const double sigma2 = fit.rss / fit.df_residual;
  fit.se.resize(p);
  fit.t.resize(p);
  fit.p.resize(p);
  for (int j = 0; j < p; ++j) {
    fit.se[j] = std::sqrt(sigma2 * unscaled(j, j));
    if (fit.se[j] > 0.0) {
      fit.t[j] = fit.coef[j] / fit.se[j];
    } else {
      fit.t[j] = fit.coef[j] == 0.0 ? 0.0
                                    : std::copysign(std::numeric_limits<double>::infinity(),
                                                    fit.coef[j]);
    }
    fit.p[j] = TwoSidedP(StudentT{static_cast<double>(fit.df_residual)}, fit.t[j]);
  }
  return fit;
}

namespace {

void CheckNestedColumns(const std::vector<std::string> &full,
                        const std::vector<std::string> &reduced) {
  for (const std::string &name : reduced) {
    if (std::find(full.begin(), full.end(), name) == full.end()) {
      throw Error(ErrorCode::kNotNested,
                  "reduced-model column '" + name + "' is not in the full model");
    }
  }
}

}  // namespace

NestedTest LrTest(const MultinomialFit &full, const MultinomialFit &reduced,
                  std::string dropped) {
  if (full.n != reduced.n) {
    throw Error(ErrorCode::kRowMismatch, "models were fit on " +
                                             std::to_string(full.n) + " and " +
                                             std::to_string(reduced.n) + " rows");
  }
  if (full.num_classes != reduced.num_classes || full.baseline != reduced.baseline) {
    throw Error(ErrorCode::kNotNested, "models have different outcome classes");
  }
  CheckNestedColumns(full.columns, reduced.columns);
  const int removed = full.num_parameters() - reduced.num_parameters();
  if (removed < 0) {
    throw Error(ErrorCode::kNotNested, "reduced model has more parameters");
  }
  NestedTest test;
  test.kind = "LR";
  test.dropped = std::move(dropped);
  test.statistic = std::max(0.0, 2.0 * (full.loglik - reduced.loglik));
  test.df = removed;
  test.p = removed == 0 ? 1.0 : UpperTail(ChiSquared{test.df}, test.statistic);
  return test;
}

NestedTest FTest(const LinearFit &full, const LinearFit &reduced, std::string dropped) {
  if (full.n != reduced.n) {
    throw Error(ErrorCode::kRowMismatch, "models were fit on " +
                                             std::to_string(full.n) + " and " +
                                             std::to_string(reduced.n) + " rows");
  }
  CheckNestedColumns(full.columns, reduced.columns);
  const int q = static_cast<int>(full.coef.size() - reduced.coef.size());
  if (q <= 0) {
    throw Error(ErrorCode::kNotNested, "full model must have more coefficients");
  }
  if (full.rss <= 1e-20 * std::max(1.0, reduced.rss)) {
    throw Error(ErrorCode::kZeroResidual, "full model fits the data exactly");
  }
  NestedTest test;
  test.kind = "F";
  test.dropped = std::move(dropped);
  test.df = q;
  test.df2 = full.df_residual;
  test.statistic =
      std::max(0.0, (reduced.rss - full.rss) / q) / (full.rss / full.df_residual);
  test.p = UpperTail(FisherF{test.df, test.df2}, test.statistic);
  return test;
}

}  // namespace maskcoref
