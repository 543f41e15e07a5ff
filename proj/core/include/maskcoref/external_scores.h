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

// Pairwise scores produced by an external neural scorer, one JSONL object
// per target mention:
//
//   {"doc_id": str, "variant": int, "target": int, "masked": bool,
//    "s_m_target": float|null,
//    "candidates": [{"mention": int, "s_a": float, "s_m": float|null}]}
//
// `variant` is the mask-plan subset index, or -1 for the unmasked document.
// Null mention scores mean gold-boundary mode. The dummy antecedent is
// implicit and never listed.

#ifndef MASKCOREF_EXTERNAL_SCORES_H_
#define MASKCOREF_EXTERNAL_SCORES_H_

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "maskcoref/corpus.h"
#include "maskcoref/scoring.h"

namespace maskcoref {

struct ExternalCandidate {
  int mention = 0;
  double s_a = 0.0;
  std::optional<double> s_m;
};

struct ExternalScoreLine {
  std::string doc_id;
  int variant = kUnmaskedVariant;
  int target = 0;
  bool masked = false;
  std::optional<double> s_m_target;
  std::vector<ExternalCandidate> candidates;

  std::vector<PairScore> Pairs() const;
};

class ExternalScoreTable {
 public:
  using Key = std::tuple<std::string, int, int>;  // doc, variant, target

  // Throws DuplicateEntry.
  void Add(ExternalScoreLine line);
  const ExternalScoreLine *Find(const std::string &doc_id, int variant,
                                int target) const;
  // The line in which `target` is masked, if any.
  const ExternalScoreLine *FindMasked(const std::string &doc_id,
                                      int target) const;
  int size() const { return static_cast<int>(lines_.size()); }

 private:
  std::map<Key, ExternalScoreLine> lines_;
  std::map<std::pair<std::string, int>, Key> masked_index_;
};

// Reads and validates score JSONL against the corpus. Throws
// SchemaViolation, UnknownDocId, DanglingMentionRef, DuplicateEntry.
ExternalScoreTable LoadExternalScores(std::istream &in, const Corpus &corpus);

// Serializes one line in the wire format (used by tests and tooling).
std::string ExternalScoreLineToJson(const ExternalScoreLine &line);

// Looks scores up by (doc, variant, target). The requested candidate set must
// match the file exactly: absent candidates throw MissingCandidate, extra
// ones DanglingMentionRef, an absent line MissingPrediction.
class ExternalScorer : public AntecedentScorer {
 public:
  ExternalScorer(const ExternalScoreTable *table, bool gold_boundaries)
      : table_(table), gold_boundaries_(gold_boundaries) {}

  std::string Name() const override { return "external"; }
  AntecedentDistribution Score(const ScoringContext &context, int target,
                               std::span<const int> candidates) const override;
  bool Has(const ScoringContext &context, int target) const;

 private:
  const ExternalScoreTable *table_;
  bool gold_boundaries_;
};

}  // namespace maskcoref

#endif  // MASKCOREF_EXTERNAL_SCORES_H_
