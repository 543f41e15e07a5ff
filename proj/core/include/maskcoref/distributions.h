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

#ifndef MASKCOREF_DISTRIBUTIONS_H_
#define MASKCOREF_DISTRIBUTIONS_H_

#include <variant>

namespace maskcoref {

struct StandardNormalDist {};
struct ChiSquared {
  double df = 1.0;
};
struct StudentT {
  double df = 1.0;
};
struct FisherF {
  double df1 = 1.0;
  double df2 = 1.0;
};

using ReferenceDistribution =
    std::variant<StandardNormalDist, ChiSquared, StudentT, FisherF>;

// Lower-tail probability P(X <= x). Throws InvalidParameter for
// non-positive degrees of freedom or NaN x.
double Cdf(const ReferenceDistribution &dist, double x);

// P(X > x), computed directly rather than as 1 - Cdf so that small tails
// keep their relative precision.
double UpperTail(const ReferenceDistribution &dist, double x);

// Two-sided p value of a statistic under a symmetric reference (normal or t).
double TwoSidedP(const ReferenceDistribution &dist, double statistic);

}  // namespace maskcoref

#endif  // MASKCOREF_DISTRIBUTIONS_H_
