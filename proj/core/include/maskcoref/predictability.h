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

// Information-theoretic measures over referent distributions. All logs are
// base 2.

#ifndef MASKCOREF_PREDICTABILITY_H_
#define MASKCOREF_PREDICTABILITY_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "maskcoref/corpus.h"
#include "maskcoref/scoring.h"

namespace maskcoref {

// Probabilities are floored here before taking logs, which caps surprisal at
// about 996.6 bits.
inline constexpr double kProbabilityFloor = 1e-300;

struct Surprisal {
  double bits = 0.0;
  bool clipped = false;  // the probability was below kProbabilityFloor
};

// -log2 P(true_entity). Throws EntityNotInSupport.
Surprisal ComputeSurprisal(const EntityDistribution &dist, int true_entity);

// Shannon entropy -sum p log2 p with 0 log 0 = 0.
double Entropy(const EntityDistribution &dist);
double Entropy(std::span<const double> probs);

// Jensen-Shannon divergence in bits over the union of both supports, in
// [0, 1]. Throws NotNormalized when either side is off by more than 1e-6.
double JensenShannon(const std::map<int, double> &p, const std::map<int, double> &q);
double JensenShannon(std::span<const double> p, std::span<const double> q);

struct MentionRef {
  std::string doc_id;
  int mention_index = 0;

  auto operator<=>(const MentionRef &) const = default;
};

struct PredictabilityRecord {
  MentionRef mention;
  bool masked = true;  // prediction made with the mention masked
  double surprisal_bits = 0.0;
  double entropy_bits = 0.0;
  bool clipped = false;
  int top_entity = kNewEntity;
  double top_prob = 0.0;
};

// Record for a mention whose true referent is `true_entity` (kNewEntity for
// entity-first mentions).
PredictabilityRecord MakePredictabilityRecord(const MentionRef &mention,
                                              const EntityDistribution &dist,
                                              int true_entity, bool masked);

struct HumanComparison {
  double mean_jsd = 0.0;
  double accuracy = 0.0;
  double relative_accuracy = 0.0;
  int n = 0;
};

// Joins model referent distributions and human guess sets on mention. A
// model prediction is accurate when its top entity is the true referent, and
// relatively accurate when it equals a plurality human guess (any of the tied
// pluralities counts). Throws EmptyJoin.
HumanComparison CompareToHumans(
    const std::map<MentionRef, EntityDistribution> &model,
    std::span<const HumanGuessSet> humans, const Corpus &corpus);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
};

// Average ranks for ties (1-based).
std::vector<double> AverageRanks(std::span<const double> values);

// Rank correlation with a two-sided p value from the t approximation with
// n - 2 degrees of freedom. Throws LengthMismatch (also for n < 3) and
// DegenerateRanks.
SpearmanResult Spearman(std::span<const double> x, std::span<const double> y);

}  // namespace maskcoref

#endif  // MASKCOREF_PREDICTABILITY_H_
