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

// Cluster metrics (MUC, B-cubed, entity CEAF and their CoNLL average) and
// antecedent accuracy with masked/unmasked and mention-type breakdowns.
// Corpus-level numbers sum numerators and denominators across documents.

#ifndef MASKCOREF_EVALMETRICS_H_
#define MASKCOREF_EVALMETRICS_H_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "maskcoref/corpus.h"
#include "maskcoref/scoring.h"

namespace maskcoref {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // A 0/0 ratio was reported as 0.
  bool degenerate = false;
};

double HarmonicMean(double p, double r);

struct MetricCounts {
  double p_num = 0.0;
  double p_den = 0.0;
  double r_num = 0.0;
  double r_den = 0.0;

  MetricCounts &operator+=(const MetricCounts &other);
  Prf ToPrf() const;
};

// A partition of (a subset of) mention ids.
using Clusters = std::vector<std::vector<int>>;

MetricCounts MucCounts(const Clusters &gold, const Clusters &system);
MetricCounts BCubedCounts(const Clusters &gold, const Clusters &system);
MetricCounts CeafeCounts(const Clusters &gold, const Clusters &system);

// Optimal one-to-one alignment maximizing the summed similarity. Rows may
// outnumber columns and vice versa; returns the column of each row or -1.
std::vector<int> MaxWeightAssignment(const std::vector<std::vector<double>> &sim);
// phi4(g, s) = 2 |g n s| / (|g| + |s|).
double Phi4(const std::vector<int> &gold, const std::vector<int> &system);

struct ClusterCounts {
  MetricCounts muc;
  MetricCounts b3;
  MetricCounts ceafe;

  ClusterCounts &operator+=(const ClusterCounts &other);
};

struct ClusterScores {
  Prf muc;
  Prf b3;
  Prf ceafe;
  Prf conll;  // arithmetic means of the three
};

ClusterCounts CountClusters(const Clusters &gold, const Clusters &system);
ClusterScores ScoreClusters(const ClusterCounts &counts);

// Gold entity clusters of a document, singletons dropped.
Clusters GoldClusters(const Document &doc);
// Clusters formed by linking each mention to its predicted antecedent;
// `antecedent[i]` is a mention index or kNoneCandidate. Singletons dropped.
Clusters ClustersFromAntecedents(std::span<const int> antecedent);

// Antecedent accuracy counts. With gold boundaries every evaluated mention
// has a prediction, so predicted == gold and P = R = F1.
struct Tally {
  int correct = 0;
  int predicted = 0;
  int gold = 0;

  Tally &operator+=(const Tally &other);
  Prf ToPrf() const;
};

struct GroupTallies {
  Tally overall;
  std::array<Tally, kNumCoarseTypes> coarse;
  std::array<Tally, kNumFineTypes> fine;

  GroupTallies &operator+=(const GroupTallies &other);
};

struct AntecedentEval {
  GroupTallies masked;
  GroupTallies unmasked;

  AntecedentEval &operator+=(const AntecedentEval &other);
};

// True when `predicted` is a mention of the target's entity, or is the dummy
// and no true antecedent is visible in the candidate set (entity-first
// mentions, and mentions whose antecedents are all hidden).
bool IsCorrectAntecedent(const Document &doc, const MaskView &view, int target,
                         int predicted);

// Whether a target takes part in evaluation: not the document's first
// mention, and not hidden inside a masked span.
bool IsEvaluated(const MaskView &view, int target);

// Adds one target to `eval` under the masked or unmasked group. A missing
// prediction counts against recall only.
void TallyPrediction(const Document &doc, const MaskView &view, int target,
                     const AntecedentDistribution *prediction,
                     AntecedentEval &eval);

struct GroupPrf {
  Prf overall;
  std::array<Prf, kNumCoarseTypes> coarse;
  std::array<Prf, kNumFineTypes> fine;
};

GroupPrf ToGroupPrf(const GroupTallies &tallies);
// Arithmetic mean of each number; a group is degenerate if any input was.
GroupPrf MeanGroupPrf(std::span<const GroupPrf> runs);

}  // namespace maskcoref

#endif  // MASKCOREF_EVALMETRICS_H_
