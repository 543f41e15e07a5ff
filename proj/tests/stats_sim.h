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

// Data simulated from known regression coefficients.

#ifndef MASKCOREF_TESTS_STATS_SIM_H_
#define MASKCOREF_TESTS_STATS_SIM_H_

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "maskcoref/rng.h"

namespace maskcoref::testing {

struct MultinomialData {
  Eigen::MatrixXd x;  // intercept then standard normal predictors
  std::vector<int> y;
};

// `beta[k]` holds the coefficients of class k + 1 against baseline class 0,
// intercept first; the predictor count follows from its length.
inline MultinomialData SimulateMultinomial(Rng &rng, int n,
                                           const std::vector<std::vector<double>> &beta) {
  const int p = static_cast<int>(beta[0].size());
  const int classes = static_cast<int>(beta.size()) + 1;
  MultinomialData data;
  data.x.resize(n, p);
  data.y.resize(n);
  std::vector<double> weight(classes);
  for (int i = 0; i < n; ++i) {
    data.x(i, 0) = 1.0;
    for (int j = 1; j < p; ++j) data.x(i, j) = StandardNormal(rng);
    weight[0] = 1.0;
    double total = 1.0;
    for (int k = 1; k < classes; ++k) {
      double eta = 0.0;
      for (int j = 0; j < p; ++j) eta += beta[k - 1][j] * data.x(i, j);
      total += weight[k] = std::exp(eta);
    }
    double u = UniformUnit(rng) * total;
    int label = classes - 1;
    for (int k = 0; k < classes; ++k) {
      if (u < weight[k]) {
        label = k;
        break;
      }
      u -= weight[k];
    }
    data.y[i] = label;
  }
  return data;
}

}  // namespace maskcoref::testing

#endif  // MASKCOREF_TESTS_STATS_SIM_H_
