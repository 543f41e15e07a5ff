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

// Span-ranking probabilities. A pair score combines two mention scores and a
// compatibility score; a softmax over the candidate antecedents of a target
// (previous mentions plus the dummy "none" antecedent, whose score is fixed
// at 0) gives the antecedent distribution, and summing antecedent
// probabilities per entity gives the referent distribution.

#ifndef MASKCOREF_SCORING_H_
#define MASKCOREF_SCORING_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maskcoref/corpus.h"

namespace maskcoref {

// The dummy antecedent.
inline constexpr int kNoneCandidate = -1;

// Variant id of the original, unmasked document.
inline constexpr int kUnmaskedVariant = -1;

struct PairScore {
  int target = 0;
  int candidate = kNoneCandidate;
  std::optional<double> s_m_target;
  std::optional<double> s_m_candidate;
  double s_a = 0.0;
};

// With gold boundaries mention scores are dropped and the total is s_a. In
// predicted-boundary mode missing mention scores throw SchemaViolation. The
// dummy candidate always scores 0.
double TotalScore(const PairScore &pair, bool gold_boundaries);

struct AntecedentDistribution {
  int target = 0;
  std::vector<int> support;  // candidate mention indices, kNoneCandidate first
  std::vector<double> probs;
  // Preferred support position among tied maxima.
  std::optional<int> tie_break;

  double Prob(int candidate) const;
  // Candidate with the largest probability. Ties go to `tie_break` when it is
  // among the maxima, else to the earliest support entry.
  int Argmax() const;
};

// Max-shifted softmax. `candidates` and `scores` are parallel; throws
// NonFiniteScore on NaN/inf scores, InvalidArgument on an empty set.
AntecedentDistribution ComputeAntecedentDistribution(
    int target, std::span<const int> candidates, std::span<const double> scores);

// Builds the distribution from pair scores; the dummy candidate is added when
// absent.
AntecedentDistribution AntecedentDistributionFromPairs(
    int target, std::span<const PairScore> pairs, bool gold_boundaries);

struct EntityDistribution {
  int target = 0;
  std::map<int, double> probs;  // entity id (or kNewEntity) -> probability

  double Prob(int entity) const;
  // Most probable entity; ties go to the smallest id (kNewEntity first).
  int Top() const;
};

// P(e) = sum of antecedent probabilities over mentions of e; P(new) = P(none).
// `entity_of_mention[i]` is the entity of mention i. Throws UnknownEntity for
// candidates outside the map.
EntityDistribution ComputeEntityDistribution(
    const AntecedentDistribution &dist, std::span<const int> entity_of_mention);
EntityDistribution ComputeEntityDistribution(const AntecedentDistribution &dist,
                                             const Document &doc);

// Mentions removed from view in a document variant: masked mentions and
// mentions inside a masked span.
struct MaskView {
  std::vector<bool> masked;  // per mention
  std::vector<bool> hidden;  // per mention; masked or discarded inner

  static MaskView None(const Document &doc);
  static MaskView FromMasked(const Document &doc, std::span<const int> masked);
  bool is_masked(int mention) const { return !masked.empty() && masked[mention]; }
  bool is_hidden(int mention) const { return !hidden.empty() && hidden[mention]; }
};

// kNoneCandidate followed by every preceding mention not hidden in `view`.
std::vector<int> CandidateSet(const Document &doc, int target,
                              const MaskView &view);

class SyntaxIndex;

struct ScoringContext {
  const Document *doc = nullptr;
  const MaskView *view = nullptr;
  int variant = kUnmaskedVariant;
  // Optional parse index of `doc` for scorers that use syntax.
  const SyntaxIndex *syntax = nullptr;
};

// Produces an antecedent distribution for one target in one document variant.
// Implementations are immutable and safe to call concurrently.
class AntecedentScorer {
 public:
  virtual ~AntecedentScorer() = default;
  virtual std::string Name() const = 0;
  virtual AntecedentDistribution Score(const ScoringContext &context, int target,
                                       std::span<const int> candidates) const = 0;
};

enum class BaselineKind { kRandom, kPreviousMention, kNoAntecedent };

// Deterministic reference scorers. Random yields the uniform distribution and
// a seeded tie-break choice derived from (seed, doc, variant, target), so its
// argmax is a uniformly random candidate independent of evaluation order.
class BaselineScorer : public AntecedentScorer {
 public:
  explicit BaselineScorer(BaselineKind kind, uint64_t seed = 0)
      : kind_(kind), seed_(seed) {}

  std::string Name() const override;
  AntecedentDistribution Score(const ScoringContext &context, int target,
                               std::span<const int> candidates) const override;

 private:
  BaselineKind kind_;
  uint64_t seed_;
};

std::optional<BaselineKind> ParseBaselineKind(std::string_view name);

}  // namespace maskcoref

#endif  // MASKCOREF_SCORING_H_
