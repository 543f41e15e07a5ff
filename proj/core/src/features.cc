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

#include "maskcoref/features.h"

#include <cmath>
#include <unordered_map>

#include "maskcoref/error.h"

namespace maskcoref {

int ClosestAntecedent(const Document &doc, int mention) {
  const int position = doc.chain_position(mention);
  if (position == 0) {
    throw Error(ErrorCode::kNoAntecedent,
                doc.doc_id() + ": mention " + std::to_string(mention) +
                    " is the first mention of its entity");
  }
  return doc.chain(doc.mention(mention).entity_id)[position - 1];
}

int SentenceDistance(const Document &doc, int mention, int antecedent) {
  if (antecedent < 0 || antecedent >= mention) {
    throw Error(ErrorCode::kOrderViolation,
                doc.doc_id() + ": mention " + std::to_string(antecedent) +
                    " does not precede mention " + std::to_string(mention));
  }
  return doc.sentence_of_mention(mention) - doc.sentence_of_mention(antecedent);
}

int EntityFrequency(const Document &doc, int mention) {
  return doc.chain_position(mention);
}

std::optional<ShallowFeatures> ComputeShallowFeatures(const Document &doc,
                                                      const SyntaxIndex &syntax,
                                                      int mention,
                                                      PrevSubjectMode mode) {
  if (doc.mention(mention).is_first_of_entity) return std::nullopt;
  ShallowFeatures f;
  const int antecedent = ClosestAntecedent(doc, mention);
  f.distance_sentences = SentenceDistance(doc, mention, antecedent);
  f.frequency = EntityFrequency(doc, mention);
  SubjectFlags flags = syntax.Flags(mention, mode);
  f.mention_is_subject = flags.mention_is_subject;
  f.antecedent_prev_subject = flags.antecedent_prev_subject;
  f.antecedent_type = doc.mention(antecedent).coarse_type;
  return f;
}

std::string_view ExclusionReasonName(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kFirstMention: return "first_mention";
    case ExclusionReason::kFirstOrSecondPerson: return "first_or_second_person";
    case ExclusionReason::kDemonstrative: return "demonstrative";
    case ExclusionReason::kEmbedded: return "embedded";
  }
  return "?";
}

AnalysisSet FilterAnalysisSet(const Corpus &corpus,
                              std::span<const PredictabilityRecord> records,
                              PrevSubjectMode mode) {
  std::map<MentionRef, const PredictabilityRecord *> by_mention;
  for (const PredictabilityRecord &record : records) {
    if (record.masked) by_mention[record.mention] = &record;
  }

  AnalysisSet set;
  for (const Document &doc : corpus.documents()) {
    SyntaxIndex syntax(doc);
    for (int i = 0; i < doc.num_mentions(); ++i) {
      const Mention &m = doc.mention(i);
      std::optional<ExclusionReason> reason;
      if (m.is_first_of_entity) {
        reason = ExclusionReason::kFirstMention;
      } else if (m.fine_type == FineType::kPron1 || m.fine_type == FineType::kPron2) {
        reason = ExclusionReason::kFirstOrSecondPerson;
      } else if (m.fine_type == FineType::kDemonstrative) {
        reason = ExclusionReason::kDemonstrative;
      } else if (m.is_embedded) {
        reason = ExclusionReason::kEmbedded;
      }
      if (reason.has_value()) {
        ++set.excluded[*reason];
        continue;
      }
      MentionRef ref{doc.doc_id(), i};
      auto it = by_mention.find(ref);
      if (it == by_mention.end()) {
        throw Error(ErrorCode::kJoinMiss, "no masked predictability record for (" +
                                              doc.doc_id() + ", " +
                                              std::to_string(i) + ")");
      }
      ShallowFeatures f = *ComputeShallowFeatures(doc, syntax, i, mode);
      if (syntax.Flags(i, mode).parse_unavailable) ++set.parse_unavailable;
      FeatureRow row;
      row.mention = ref;
      row.distance_sentences = f.distance_sentences;
      row.frequency = f.frequency;
      row.antecedent_prev_subject = f.antecedent_prev_subject;
      row.mention_is_subject = f.mention_is_subject;
      row.antecedent_type = f.antecedent_type;
      row.surprisal_bits = it->second->surprisal_bits;
      row.entropy_bits = it->second->entropy_bits;
      row.outcome_type = m.coarse_type;
      row.outcome_fine = m.fine_type;
      row.outcome_len_tokens = m.length_tokens;
      row.outcome_len_chars = m.length_chars_nospace;
      set.rows.push_back(row);
    }
  }
  return set;
}

std::string_view PredictorName(Predictor predictor) {
  switch (predictor) {
    case Predictor::kDistance: return "distance";
    case Predictor::kFrequency: return "frequency";
    case Predictor::kAntecedentPrevSubject: return "antecedent_previous_subject";
    case Predictor::kMentionIsSubject: return "mention_subject";
    case Predictor::kAntecedentType: return "antecedent_type";
    case Predictor::kSurprisal: return "surprisal";
    case Predictor::kEntropy: return "entropy";
  }
  return "?";
}

bool IsContinuous(Predictor predictor) {
  return predictor == Predictor::kDistance || predictor == Predictor::kFrequency ||
         predictor == Predictor::kSurprisal || predictor == Predictor::kEntropy;
}

namespace {

double RawValue(const FeatureRow &row, Predictor predictor) {
  switch (predictor) {
    case Predictor::kDistance: return row.distance_sentences;
    case Predictor::kFrequency: return row.frequency;
    case Predictor::kAntecedentPrevSubject: return row.antecedent_prev_subject ? 1 : 0;
    case Predictor::kMentionIsSubject: return row.mention_is_subject ? 1 : 0;
    case Predictor::kSurprisal: return row.surprisal_bits;
    case Predictor::kEntropy: return row.entropy_bits;
    case Predictor::kAntecedentType: break;
  }
  return 0.0;
}

}  // namespace

Design BuildDesign(std::span<const FeatureRow> rows, const Formula &formula) {
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyFilter, "no rows to build a design matrix from");
  }
  const int n = static_cast<int>(rows.size());
  Design design;
  design.columns.push_back("(Intercept)");
  design.column_predictor.push_back(-1);
  std::vector<Eigen::VectorXd> columns = {Eigen::VectorXd::Ones(n)};

  for (size_t k = 0; k < formula.predictors.size(); ++k) {
    const Predictor predictor = formula.predictors[k];
    const std::string name(PredictorName(predictor));
    if (predictor == Predictor::kAntecedentType) {
      Eigen::VectorXd proper(n), full(n);
      for (int i = 0; i < n; ++i) {
        proper[i] = rows[i].antecedent_type == CoarseType::kProperName ? 1.0 : 0.0;
        full[i] = rows[i].antecedent_type == CoarseType::kFullNP ? 1.0 : 0.0;
      }
      columns.push_back(proper);
      columns.push_back(full);
      design.columns.push_back(name + ":proper_name");
      design.columns.push_back(name + ":full_np");
      design.column_predictor.push_back(static_cast<int>(k));
      design.column_predictor.push_back(static_cast<int>(k));
      continue;
    }
    Eigen::VectorXd column(n);
    for (int i = 0; i < n; ++i) column[i] = RawValue(rows[i], predictor);
    if (IsContinuous(predictor) && formula.standardize) {
      const double mean = column.mean();
      const double var =
          n > 1 ? (column.array() - mean).square().sum() / (n - 1) : 0.0;
      const double sd = std::sqrt(var);
      if (!(sd > 0.0)) {
        throw Error(ErrorCode::kZeroVariance, "column '" + name + "' is constant");
      }
      design.stats.columns.push_back(name);
      design.stats.mean.push_back(mean);
      design.stats.sd.push_back(sd);
      const int stat = static_cast<int>(design.stats.columns.size()) - 1;
      for (int i = 0; i < n; ++i) column[i] = design.stats.Apply(stat, column[i]);
    }
    columns.push_back(column);
    design.columns.push_back(name);
    design.column_predictor.push_back(static_cast<int>(k));
  }

  design.x.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (size_t j = 0; j < columns.size(); ++j) design.x.col(j) = columns[j];
  return design;
}

Eigen::VectorXd OutcomeVector(std::span<const FeatureRow> rows, Outcome outcome) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    switch (outcome) {
      case Outcome::kType: y[i] = static_cast<int>(rows[i].outcome_type); break;
      case Outcome::kLengthTokens: y[i] = rows[i].outcome_len_tokens; break;
      case Outcome::kLengthChars: y[i] = rows[i].outcome_len_chars; break;
    }
  }
  return y;
}

std::vector<int> TypeLabels(std::span<const FeatureRow> rows) {
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (const FeatureRow &row : rows) labels.push_back(static_cast<int>(row.outcome_type));
  return labels;
}

}  // namespace maskcoref
