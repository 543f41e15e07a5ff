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

#include "maskcoref/predictability.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maskcoref/distributions.h"
#include "maskcoref/error.h"

namespace maskcoref {
namespace {

constexpr double kNormalizationTolerance = 1e-6;

double PLogP(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void CheckNormalized(double sum, const char *which) {
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw Error(ErrorCode::kNotNormalized,
                std::string(which) + " sums to " + std::to_string(sum));
  }
}

}  // namespace

Surprisal ComputeSurprisal(const EntityDistribution &dist, int true_entity) {
  auto it = dist.probs.find(true_entity);
  if (it == dist.probs.end()) {
    throw Error(ErrorCode::kEntityNotInSupport,
                "entity " + std::to_string(true_entity) +
                    " is not in the support of target " +
                    std::to_string(dist.target));
  }
  Surprisal s;
  double p = it->second;
  if (p < kProbabilityFloor) {
    p = kProbabilityFloor;
    s.clipped = true;
  }
  s.bits = p >= 1.0 ? 0.0 : -std::log2(p);
  return s;
}

double Entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h -= PLogP(p);
  return std::max(h, 0.0);
}

double Entropy(const EntityDistribution &dist) {
  std::vector<double> probs;
  probs.reserve(dist.probs.size());
  for (const auto &[entity, p] : dist.probs) probs.push_back(p);
  return Entropy(probs);
}

double JensenShannon(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kLengthMismatch, "JSD inputs differ in length");
  }
  CheckNormalized(std::accumulate(p.begin(), p.end(), 0.0), "first distribution");
  CheckNormalized(std::accumulate(q.begin(), q.end(), 0.0), "second distribution");
  double js = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) js += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) js += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::clamp(js, 0.0, 1.0);
}

double JensenShannon(const std::map<int, double> &p, const std::map<int, double> &q) {
  std::map<int, std::pair<double, double>> joint;
  for (const auto &[k, v] : p) joint[k].first = v;
  for (const auto &[k, v] : q) joint[k].second = v;
  std::vector<double> pv, qv;
  for (const auto &[k, v] : joint) {
    pv.push_back(v.first);
    qv.push_back(v.second);
  }
  return JensenShannon(pv, qv);
}

PredictabilityRecord MakePredictabilityRecord(const MentionRef &mention,
                                              const EntityDistribution &dist,
                                              int true_entity, bool masked) {
  PredictabilityRecord record;
  record.mention = mention;
  record.masked = masked;
  Surprisal s = ComputeSurprisal(dist, true_entity);
  record.surprisal_bits = s.bits;
  record.clipped = s.clipped;
  record.entropy_bits = Entropy(dist);
  record.top_entity = dist.Top();
  record.top_prob = dist.Prob(record.top_entity);
  return record;
}

HumanComparison CompareToHumans(
    const std::map<MentionRef, EntityDistribution> &model,
    std::span<const HumanGuessSet> humans, const Corpus &corpus) {
  HumanComparison result;
  double jsd_sum = 0.0;
  int correct = 0;
  int relative = 0;
  for (const HumanGuessSet &guesses : humans) {
    auto it = model.find({guesses.doc_id, guesses.mention_index});
    if (it == model.end()) continue;
    const EntityDistribution &dist = it->second;
    jsd_sum += JensenShannon(dist.probs, guesses.Normalized());

    const Document &doc = corpus.Get(guesses.doc_id);
    const Mention &mention = doc.mention(guesses.mention_index);
    const int truth = mention.is_first_of_entity ? kNewEntity : mention.entity_id;
    const int top = dist.Top();
    if (top == truth) ++correct;

    int plurality = 0;
    for (const auto &[entity, count] : guesses.guesses) {
      plurality = std::max(plurality, count);
    }
    auto g = guesses.guesses.find(top);
    if (g != guesses.guesses.end() && g->second == plurality) ++relative;
    ++result.n;
  }
  if (result.n == 0) {
    throw Error(ErrorCode::kEmptyJoin,
                "no human guess set matches a model prediction");
  }
  result.mean_jsd = jsd_sum / result.n;
  result.accuracy = static_cast<double>(correct) / result.n;
  result.relative_accuracy = static_cast<double>(relative) / result.n;
  return result;
}

std::vector<double> AverageRanks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

SpearmanResult Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(ErrorCode::kLengthMismatch,
                "Spearman needs two equal-length inputs with at least 3 values");
  }
  std::vector<double> rx = AverageRanks(x);
  std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    double dx = rx[i] - mean;
    double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kDegenerateRanks, "all values are tied");
  }
  SpearmanResult result;
  result.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = n - 2.0;
  if (std::abs(result.rho) >= 1.0) {
    result.p_value = 0.0;
  } else {
    double t = result.rho * std::sqrt(df / (1.0 - result.rho * result.rho));
    result.p_value = 2.0 * UpperTail(StudentT{df}, std::abs(t));
  }
  return result;
}

}  // namespace maskcoref
