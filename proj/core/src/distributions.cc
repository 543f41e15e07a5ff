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

#include "maskcoref/distributions.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "maskcoref/error.h"

namespace maskcoref {
namespace {

namespace bm = boost::math;

// Report errors through return values; argument checks happen up front.
using Policy = bm::policies::policy<
    bm::policies::domain_error<bm::policies::ignore_error>,
    bm::policies::overflow_error<bm::policies::ignore_error>,
    bm::policies::evaluation_error<bm::policies::ignore_error>>;

void CheckDf(double df, const char *name) {
  if (!(df > 0.0) || std::isnan(df)) {
    throw Error(ErrorCode::kInvalidParameter,
                std::string(name) + " degrees of freedom must be positive");
  }
}

template <bool kUpper>
double Tail(const ReferenceDistribution &dist, double x) {
  if (std::isnan(x)) throw Error(ErrorCode::kInvalidParameter, "x is NaN");
  auto eval = [&](const auto &d, double lo_limit) -> double {
    if (x <= lo_limit) return kUpper ? 1.0 : 0.0;
    if (std::isinf(x)) return kUpper ? 0.0 : 1.0;
    if constexpr (kUpper) {
      return bm::cdf(bm::complement(d, x));
    } else {
      return bm::cdf(d, x);
    }
  };
  if (std::holds_alternative<StandardNormalDist>(dist)) {
    return eval(bm::normal_distribution<double, Policy>(0.0, 1.0), -INFINITY);
  }
  if (const auto *chi = std::get_if<ChiSquared>(&dist)) {
    CheckDf(chi->df, "chi-squared");
    return eval(bm::chi_squared_distribution<double, Policy>(chi->df), 0.0);
  }
  if (const auto *t = std::get_if<StudentT>(&dist)) {
    CheckDf(t->df, "Student t");
    return eval(bm::students_t_distribution<double, Policy>(t->df), -INFINITY);
  }
  const auto &f = std::get<FisherF>(dist);
  CheckDf(f.df1, "F numerator");
  CheckDf(f.df2, "F denominator");
  return eval(bm::fisher_f_distribution<double, Policy>(f.df1, f.df2), 0.0);
}

}  // namespace

double Cdf(const ReferenceDistribution &dist, double x) {
  return Tail<false>(dist, x);
}

double UpperTail(const ReferenceDistribution &dist, double x) {
  return Tail<true>(dist, x);
}

double TwoSidedP(const ReferenceDistribution &dist, double statistic) {
  return std::min(1.0, 2.0 * UpperTail(dist, std::abs(statistic)));
}

}  // namespace maskcoref
