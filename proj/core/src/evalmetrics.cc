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

#include "maskcoref/evalmetrics.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace maskcoref {
namespace {

// Mention id -> cluster index.
std::unordered_map<int, int> ClusterIndex(const Clusters &clusters) {
  std::unordered_map<int, int> index;
  for (size_t c = 0; c < clusters.size(); ++c) {
    for (int m : clusters[c]) index[m] = static_cast<int>(c);
  }
  return index;
}

// Sum over key clusters of |k| - |parts of k under response|; mentions absent
// from the response form parts of their own.
double MucNumerator(const Clusters &key, const Clusters &response) {
  const std::unordered_map<int, int> index = ClusterIndex(response);
  double total = 0.0;
  for (const std::vector<int> &k : key) {
    std::vector<int> parts;
    int unaligned = 0;
    for (int m : k) {
      auto it = index.find(m);
      if (it == index.end()) {
        ++unaligned;
      } else {
        parts.push_back(it->second);
      }
    }
    std::sort(parts.begin(), parts.end());
    const int distinct =
        static_cast<int>(std::unique(parts.begin(), parts.end()) - parts.begin());
    total += static_cast<double>(k.size()) - (distinct + unaligned);
  }
  return total;
}

double MucDenominator(const Clusters &key) {
  double total = 0.0;
  for (const std::vector<int> &k : key) {
    if (!k.empty()) total += static_cast<double>(k.size()) - 1.0;
  }
  return total;
}

// Sum over key clusters k and response clusters r of |k n r|^2 / |k|.
double BCubedNumerator(const Clusters &key, const Clusters &response) {
  const std::unordered_map<int, int> index = ClusterIndex(response);
  double total = 0.0;
  for (const std::vector<int> &k : key) {
    std::unordered_map<int, int> overlap;
    for (int m : k) {
      auto it = index.find(m);
      if (it != index.end()) ++overlap[it->second];
    }
    for (const auto &[r, n] : overlap) {
      total += static_cast<double>(n) * n / static_cast<double>(k.size());
    }
  }
  return total;
}

double MentionCount(const Clusters &clusters) {
  double total = 0.0;
  for (const std::vector<int> &c : clusters) total += static_cast<double>(c.size());
  return total;
}

double Ratio(double num, double den, bool &degenerate) {
  if (den == 0.0) {
    degenerate = true;
    return 0.0;
  }
  return num / den;
}

}  // namespace

double HarmonicMean(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

MetricCounts &MetricCounts::operator+=(const MetricCounts &other) {
  p_num += other.p_num;
  p_den += other.p_den;
  r_num += other.r_num;
  r_den += other.r_den;
  return *this;
}

Prf MetricCounts::ToPrf() const {
  Prf prf;
  prf.precision = Ratio(p_num, p_den, prf.degenerate);
  prf.recall = Ratio(r_num, r_den, prf.degenerate);
  prf.f1 = HarmonicMean(prf.precision, prf.recall);
  return prf;
}

MetricCounts MucCounts(const Clusters &gold, const Clusters &system) {
  return {MucNumerator(system, gold), MucDenominator(system),
          MucNumerator(gold, system), MucDenominator(gold)};
}

MetricCounts BCubedCounts(const Clusters &gold, const Clusters &system) {
  return {BCubedNumerator(system, gold), MentionCount(system),
          BCubedNumerator(gold, system), MentionCount(gold)};
}

double Phi4(const std::vector<int> &gold, const std::vector<int> &system) {
  if (gold.empty() && system.empty()) return 0.0;
  int common = 0;
  for (int m : gold) {
    if (std::find(system.begin(), system.end(), m) != system.end()) ++common;
  }
  return 2.0 * common / static_cast<double>(gold.size() + system.size());
}

std::vector<int> MaxWeightAssignment(const std::vector<std::vector<double>> &sim) {
  const int rows = static_cast<int>(sim.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(sim[0].size());
  const int n = std::max(rows, cols);
  if (n == 0) return {};
  // Hungarian method on the square cost matrix -sim, padded with zeros.
  // 1-based arrays: u, v are potentials, p[j] is the row matched to column j.
  auto cost = [&](int i, int j) {
    return (i <= rows && j <= cols) ? -sim[i - 1][j - 1] : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(rows, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] >= 1 && p[j] <= rows && j <= cols) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

MetricCounts CeafeCounts(const Clusters &gold, const Clusters &system) {
  std::vector<std::vector<double>> sim(gold.size(),
                                       std::vector<double>(system.size(), 0.0));
  for (size_t g = 0; g < gold.size(); ++g) {
    for (size_t s = 0; s < system.size(); ++s) sim[g][s] = Phi4(gold[g], system[s]);
  }
  const std::vector<int> assignment = MaxWeightAssignment(sim);
  double total = 0.0;
  for (size_t g = 0; g < gold.size(); ++g) {
    if (assignment[g] >= 0) total += sim[g][assignment[g]];
  }
  return {total, static_cast<double>(system.size()), total,
          static_cast<double>(gold.size())};
}

ClusterCounts &ClusterCounts::operator+=(const ClusterCounts &other) {
  muc += other.muc;
  b3 += other.b3;
  ceafe += other.ceafe;
  return *this;
}

ClusterCounts CountClusters(const Clusters &gold, const Clusters &system) {
  return {MucCounts(gold, system), BCubedCounts(gold, system),
          CeafeCounts(gold, system)};
}

ClusterScores ScoreClusters(const ClusterCounts &counts) {
  ClusterScores scores;
  scores.muc = counts.muc.ToPrf();
  scores.b3 = counts.b3.ToPrf();
  scores.ceafe = counts.ceafe.ToPrf();
  const Prf *parts[] = {&scores.muc, &scores.b3, &scores.ceafe};
  for (const Prf *part : parts) {
    scores.conll.precision += part->precision / 3.0;
    scores.conll.recall += part->recall / 3.0;
    scores.conll.f1 += part->f1 / 3.0;
    scores.conll.degenerate = scores.conll.degenerate || part->degenerate;
  }
  return scores;
}

Clusters GoldClusters(const Document &doc) {
  Clusters clusters;
  for (const auto &[entity, chain] : doc.entities()) {
    if (chain.size() > 1) clusters.push_back(chain);
  }
  return clusters;
}

Clusters ClustersFromAntecedents(std::span<const int> antecedent) {
  const int n = static_cast<int>(antecedent.size());
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  // Antecedents precede their targets, so one forward pass resolves roots.
  for (int i = 0; i < n; ++i) {
    if (antecedent[i] != kNoneCandidate) root[i] = root[antecedent[i]];
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[root[i]].push_back(i);
  Clusters clusters;
  for (auto &[r, members] : groups) {
    if (members.size() > 1) clusters.push_back(std::move(members));
  }
  return clusters;
}

Tally &Tally::operator+=(const Tally &other) {
  correct += other.correct;
  predicted += other.predicted;
  gold += other.gold;
  return *this;
}

Prf Tally::ToPrf() const {
  Prf prf;
  prf.precision = Ratio(correct, predicted, prf.degenerate);
  prf.recall = Ratio(correct, gold, prf.degenerate);
  prf.f1 = HarmonicMean(prf.precision, prf.recall);
  return prf;
}

GroupTallies &GroupTallies::operator+=(const GroupTallies &other) {
  overall += other.overall;
  for (int t = 0; t < kNumCoarseTypes; ++t) coarse[t] += other.coarse[t];
  for (int t = 0; t < kNumFineTypes; ++t) fine[t] += other.fine[t];
  return *this;
}

AntecedentEval &AntecedentEval::operator+=(const AntecedentEval &other) {
  masked += other.masked;
  unmasked += other.unmasked;
  return *this;
}

bool IsCorrectAntecedent(const Document &doc, const MaskView &view, int target,
                         int predicted) {
  const int entity = doc.mention(target).entity_id;
  if (predicted != kNoneCandidate) {
    return predicted < target && doc.mention(predicted).entity_id == entity;
  }
  for (int c : CandidateSet(doc, target, view)) {
    if (c != kNoneCandidate && doc.mention(c).entity_id == entity) return false;
  }
  return true;
}

bool IsEvaluated(const MaskView &view, int target) {
  if (target == 0) return false;
  return !view.is_hidden(target) || view.is_masked(target);
}

void TallyPrediction(const Document &doc, const MaskView &view, int target,
                     const AntecedentDistribution *prediction,
                     AntecedentEval &eval) {
  if (!IsEvaluated(view, target)) return;
  GroupTallies &group = view.is_masked(target) ? eval.masked : eval.unmasked;
  const Mention &m = doc.mention(target);
  Tally one;
  one.gold = 1;
  if (prediction != nullptr) {
    one.predicted = 1;
    one.correct = IsCorrectAntecedent(doc, view, target, prediction->Argmax()) ? 1 : 0;
  }
  group.overall += one;
  group.coarse[static_cast<int>(m.coarse_type)] += one;
  group.fine[static_cast<int>(m.fine_type)] += one;
}

GroupPrf ToGroupPrf(const GroupTallies &tallies) {
  GroupPrf prf;
  prf.overall = tallies.overall.ToPrf();
  for (int t = 0; t < kNumCoarseTypes; ++t) prf.coarse[t] = tallies.coarse[t].ToPrf();
  for (int t = 0; t < kNumFineTypes; ++t) prf.fine[t] = tallies.fine[t].ToPrf();
  return prf;
}

namespace {

Prf MeanPrf(std::span<const GroupPrf> runs, const Prf &(*pick)(const GroupPrf &, int),
            int index) {
  Prf mean;
  if (runs.empty()) {
    mean.degenerate = true;
    return mean;
  }
  for (const GroupPrf &run : runs) {
    const Prf &p = pick(run, index);
    mean.precision += p.precision;
    mean.recall += p.recall;
    mean.f1 += p.f1;
    mean.degenerate = mean.degenerate || p.degenerate;
  }
  const double n = static_cast<double>(runs.size());
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  return mean;
}

const Prf &PickOverall(const GroupPrf &g, int) { return g.overall; }
const Prf &PickCoarse(const GroupPrf &g, int i) { return g.coarse[i]; }
const Prf &PickFine(const GroupPrf &g, int i) { return g.fine[i]; }

}  // namespace

GroupPrf MeanGroupPrf(std::span<const GroupPrf> runs) {
  GroupPrf mean;
  mean.overall = MeanPrf(runs, PickOverall, 0);
  for (int t = 0; t < kNumCoarseTypes; ++t) mean.coarse[t] = MeanPrf(runs, PickCoarse, t);
  for (int t = 0; t < kNumFineTypes; ++t) mean.fine[t] = MeanPrf(runs, PickFine, t);
  return mean;
}

}  // namespace maskcoref
