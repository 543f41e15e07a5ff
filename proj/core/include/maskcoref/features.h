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

// Shallow salience predictors of mention form (recency, frequency,
// subjecthood, antecedent type) and the design matrices built from them.

#ifndef MASKCOREF_FEATURES_H_
#define MASKCOREF_FEATURES_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maskcoref/corpus.h"
#include "maskcoref/predictability.h"

namespace maskcoref {

// Latest preceding mention of the same entity. Throws NoAntecedent for the
// first mention of an entity.
int ClosestAntecedent(const Document &doc, int mention);

// Sentence index difference. Throws OrderViolation unless the antecedent
// precedes the mention.
int SentenceDistance(const Document &doc, int mention, int antecedent);

// Mentions of the same entity strictly before `mention`.
int EntityFrequency(const Document &doc, int mention);

// Constituency trees rebuilt from the CoNLL parse-bit column, in document
// token coordinates.
struct ConstituentNode {
  std::string label;  // base label without function tags
  int start = 0;      // inclusive token
  int end = 0;        // inclusive token
  int parent = -1;
  int sentence = 0;
  std::vector<int> children;
};

enum class PrevSubjectMode {
  kClause,    // the clause immediately preceding the target's clause
  kSentence,  // across a sentence boundary, the main clause of that sentence
};

struct SubjectFlags {
  bool mention_is_subject = false;
  bool antecedent_prev_subject = false;
  bool parse_unavailable = false;
};

class SyntaxIndex {
 public:
  explicit SyntaxIndex(const Document &doc);

  const std::vector<ConstituentNode> &nodes() const { return nodes_; }
  bool sentence_has_parse(int sentence) const { return parsed_[sentence]; }
  // Sentences whose parse bits were missing or malformed.
  int unparsed_sentences() const;

  // Highest NP node spanning exactly the mention, or -1.
  int MaximalNp(int mention) const;
  // NP child of a clause node that precedes a VP sibling.
  bool IsSubject(int mention) const;
  // Innermost clause (S, SINV, SQ) containing the mention; the sentence root
  // when the sentence has no clause node; -1 without a parse.
  int ClauseOf(int mention) const;
  // Clause preceding the mention's clause: the clause node with the latest
  // start before the mention (deepest on ties), excluding the mention's own
  // clause. -1 when there is none.
  int PreviousClause(int mention, PrevSubjectMode mode) const;

  SubjectFlags Flags(int mention, PrevSubjectMode mode) const;

 private:
  const Document *doc_;
  std::vector<ConstituentNode> nodes_;
  std::vector<bool> parsed_;
  std::vector<int> roots_;               // per sentence, -1 without parse
  std::vector<std::vector<int>> clauses_;  // per sentence, pre-order
};

SubjectFlags ComputeSubjectFlags(const Document &doc, int mention,
                                 PrevSubjectMode mode = PrevSubjectMode::kClause);

// One row of the mention-form analysis.
struct FeatureRow {
  MentionRef mention;
  int distance_sentences = 0;
  int frequency = 1;
  bool antecedent_prev_subject = false;
  bool mention_is_subject = false;
  CoarseType antecedent_type = CoarseType::kPronoun;
  double surprisal_bits = 0.0;
  double entropy_bits = 0.0;
  CoarseType outcome_type = CoarseType::kPronoun;
  FineType outcome_fine = FineType::kPron3;
  int outcome_len_tokens = 1;
  int outcome_len_chars = 1;
};

// Shallow features of a mention that has an antecedent; nullopt for
// entity-first mentions.
struct ShallowFeatures {
  int distance_sentences = 0;
  int frequency = 0;
  bool antecedent_prev_subject = false;
  bool mention_is_subject = false;
  CoarseType antecedent_type = CoarseType::kPronoun;
};
std::optional<ShallowFeatures> ComputeShallowFeatures(const Document &doc,
                                                      const SyntaxIndex &syntax,
                                                      int mention,
                                                      PrevSubjectMode mode);

enum class ExclusionReason {
  kFirstMention,
  kFirstOrSecondPerson,
  kDemonstrative,
  kEmbedded,
};
std::string_view ExclusionReasonName(ExclusionReason reason);

struct AnalysisSet {
  std::vector<FeatureRow> rows;
  std::map<ExclusionReason, int> excluded;
  int parse_unavailable = 0;  // rows whose subject flags defaulted to false
};

// Third-person pronouns, proper names and full NPs that have an antecedent
// and were not embedded (embedded mentions are never masked). Records are
// joined on (doc_id, mention_index); only masked records are used. Throws
// JoinMiss for an eligible mention without a record.
AnalysisSet FilterAnalysisSet(const Corpus &corpus,
                              std::span<const PredictabilityRecord> records,
                              PrevSubjectMode mode = PrevSubjectMode::kClause);

enum class Predictor {
  kDistance,
  kFrequency,
  kAntecedentPrevSubject,
  kMentionIsSubject,
  kAntecedentType,
  kSurprisal,
  kEntropy,
};
std::string_view PredictorName(Predictor predictor);
bool IsContinuous(Predictor predictor);

enum class Outcome { kType, kLengthTokens, kLengthChars };

struct Formula {
  std::vector<Predictor> predictors;
  bool standardize = true;
};

// Per-column mean and sample standard deviation of the continuous columns.
struct StandardizationStats {
  std::vector<std::string> columns;
  std::vector<double> mean;
  std::vector<double> sd;

  double Apply(int column, double value) const {
    return (value - mean[column]) / sd[column];
  }
  double Invert(int column, double value) const {
    return value * sd[column] + mean[column];
  }
};

struct Design {
  Eigen::MatrixXd x;
  std::vector<std::string> columns;     // "(Intercept)", "distance", ...
  std::vector<int> column_predictor;    // index into the formula, -1 intercept
  StandardizationStats stats;
};

// Intercept, then one column per predictor in formula order. Continuous
// predictors are standardized (sample sd) when requested; antecedent type is
// dummy coded against the pronoun baseline (proper_name, full_np). Throws
// EmptyFilter and ZeroVariance.
Design BuildDesign(std::span<const FeatureRow> rows, const Formula &formula);

Eigen::VectorXd OutcomeVector(std::span<const FeatureRow> rows, Outcome outcome);
// 0 = pronoun, 1 = proper name, 2 = full NP.
std::vector<int> TypeLabels(std::span<const FeatureRow> rows);

}  // namespace maskcoref

#endif  // MASKCOREF_FEATURES_H_
