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

#include "maskcoref/external_scores.h"

#include <set>

#include "json.hpp"
#include "json_internal.h"
#include "maskcoref/error.h"

namespace maskcoref {

using nlohmann::json;

namespace {

std::optional<double> OptionalNumber(const json &obj, const char *key,
                                     const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kSchemaViolation, where + ": missing field '" + key + "'");
  }
  if (it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw Error(ErrorCode::kSchemaViolation,
                where + ": field '" + key + "' must be a number or null");
  }
  return it->get<double>();
}

template <typename T>
T Required(const json &obj, const char *key, const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kSchemaViolation, where + ": missing field '" + key + "'");
  }
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) {
    ok = it->is_boolean();
  } else if constexpr (std::is_integral_v<T>) {
    ok = it->is_number_integer();
  } else if constexpr (std::is_floating_point_v<T>) {
    ok = it->is_number();
  } else {
    ok = it->is_string();
  }
  if (!ok) {
    throw Error(ErrorCode::kSchemaViolation,
                where + ": field '" + key + "' has the wrong type");
  }
  return it->get<T>();
}

ExternalScoreLine ParseLine(const json &obj, const std::string &where) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kSchemaViolation, where + ": expected a JSON object");
  }
  ExternalScoreLine line;
  line.doc_id = Required<std::string>(obj, "doc_id", where);
  line.variant = Required<int>(obj, "variant", where);
  line.target = Required<int>(obj, "target", where);
  line.masked = Required<bool>(obj, "masked", where);
  line.s_m_target = OptionalNumber(obj, "s_m_target", where);
  auto it = obj.find("candidates");
  if (it == obj.end() || !it->is_array()) {
    throw Error(ErrorCode::kSchemaViolation, where + ": 'candidates' must be an array");
  }
  for (const json &c : *it) {
    if (!c.is_object()) {
      throw Error(ErrorCode::kSchemaViolation, where + ": candidate must be an object");
    }
    ExternalCandidate candidate;
    candidate.mention = Required<int>(c, "mention", where);
    candidate.s_a = Required<double>(c, "s_a", where);
    candidate.s_m = OptionalNumber(c, "s_m", where);
    if (candidate.s_m.has_value() != line.s_m_target.has_value()) {
      throw Error(ErrorCode::kSchemaViolation,
                  where + ": mention scores must be all null or all present");
    }
    line.candidates.push_back(candidate);
  }
  return line;
}

}  // namespace

std::vector<PairScore> ExternalScoreLine::Pairs() const {
  std::vector<PairScore> pairs;
  pairs.reserve(candidates.size());
  for (const ExternalCandidate &c : candidates) {
    pairs.push_back({target, c.mention, s_m_target, c.s_m, c.s_a});
  }
  return pairs;
}

void ExternalScoreTable::Add(ExternalScoreLine line) {
  Key key{line.doc_id, line.variant, line.target};
  if (lines_.contains(key)) {
    throw Error(ErrorCode::kDuplicateEntry,
                "duplicate score line for (" + line.doc_id + ", " +
                    std::to_string(line.variant) + ", " +
                    std::to_string(line.target) + ")");
  }
  if (line.masked) {
    auto masked_key = std::make_pair(line.doc_id, line.target);
    if (masked_index_.contains(masked_key)) {
      throw Error(ErrorCode::kDuplicateEntry,
                  "mention " + std::to_string(line.target) + " of " + line.doc_id +
                      " is masked in more than one variant");
    }
    masked_index_.emplace(masked_key, key);
  }
  lines_.emplace(std::move(key), std::move(line));
}

const ExternalScoreLine *ExternalScoreTable::Find(const std::string &doc_id,
                                                  int variant, int target) const {
  auto it = lines_.find(Key{doc_id, variant, target});
  return it == lines_.end() ? nullptr : &it->second;
}

const ExternalScoreLine *ExternalScoreTable::FindMasked(const std::string &doc_id,
                                                        int target) const {
  auto it = masked_index_.find({doc_id, target});
  return it == masked_index_.end() ? nullptr : &lines_.at(it->second);
}

ExternalScoreTable LoadExternalScores(std::istream &in, const Corpus &corpus) {
  ExternalScoreTable table;
  std::string text;
  int line_number = 0;
  while (std::getline(in, text)) {
    ++line_number;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "scores line " + std::to_string(line_number);
    ExternalScoreLine line = ParseLine(internal::ParseJson(text, where), where);
    const Document *doc = corpus.Find(line.doc_id);
    if (doc == nullptr) {
      throw Error(ErrorCode::kUnknownDocId, where + ": unknown document " + line.doc_id);
    }
    if (line.variant < kUnmaskedVariant) {
      throw Error(ErrorCode::kSchemaViolation, where + ": variant must be >= -1");
    }
    if (line.variant == kUnmaskedVariant && line.masked) {
      throw Error(ErrorCode::kSchemaViolation,
                  where + ": the unmasked variant cannot carry masked targets");
    }
    if (line.target < 0 || line.target >= doc->num_mentions()) {
      throw Error(ErrorCode::kDanglingMentionRef,
                  where + ": target " + std::to_string(line.target) +
                      " out of range for " + line.doc_id);
    }
    std::set<int> seen;
    for (const ExternalCandidate &c : line.candidates) {
      if (c.mention < 0 || c.mention >= line.target) {
        throw Error(ErrorCode::kDanglingMentionRef,
                    where + ": candidate " + std::to_string(c.mention) +
                        " does not precede target " + std::to_string(line.target));
      }
      if (!seen.insert(c.mention).second) {
        throw Error(ErrorCode::kDuplicateEntry,
                    where + ": candidate " + std::to_string(c.mention) + " listed twice");
      }
    }
    try {
      table.Add(std::move(line));
    } catch (const Error &e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
  return table;
}

std::string ExternalScoreLineToJson(const ExternalScoreLine &line) {
  json candidates = json::array();
  for (const ExternalCandidate &c : line.candidates) {
    candidates.push_back({{"mention", c.mention},
                          {"s_a", c.s_a},
                          {"s_m", c.s_m.has_value() ? json(*c.s_m) : json(nullptr)}});
  }
  json obj = {{"doc_id", line.doc_id},
              {"variant", line.variant},
              {"target", line.target},
              {"masked", line.masked},
              {"s_m_target", line.s_m_target.has_value() ? json(*line.s_m_target)
                                                         : json(nullptr)},
              {"candidates", std::move(candidates)}};
  return obj.dump();
}

bool ExternalScorer::Has(const ScoringContext &context, int target) const {
  return table_->Find(context.doc->doc_id(), context.variant, target) != nullptr;
}

AntecedentDistribution ExternalScorer::Score(const ScoringContext &context,
                                             int target,
                                             std::span<const int> candidates) const {
  const std::string &doc_id = context.doc->doc_id();
  const ExternalScoreLine *line = table_->Find(doc_id, context.variant, target);
  const std::string where = "(" + doc_id + ", mention " + std::to_string(target) +
                            ", variant " + std::to_string(context.variant) + ")";
  if (line == nullptr) {
    throw Error(ErrorCode::kMissingPrediction, "no external scores for " + where);
  }
  bool expect_masked = context.view != nullptr && context.view->is_masked(target);
  if (line->masked != expect_masked) {
    throw Error(ErrorCode::kSchemaViolation,
                "masked flag disagrees with the mask plan for " + where);
  }
  std::map<int, const ExternalCandidate *> by_mention;
  for (const ExternalCandidate &c : line->candidates) by_mention[c.mention] = &c;

  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (int candidate : candidates) {
    if (candidate == kNoneCandidate) {
      scores.push_back(0.0);
      continue;
    }
    auto it = by_mention.find(candidate);
    if (it == by_mention.end()) {
      throw Error(ErrorCode::kMissingCandidate,
                  "candidate " + std::to_string(candidate) + " missing for " + where);
    }
    const ExternalCandidate &c = *it->second;
    scores.push_back(TotalScore({target, candidate, line->s_m_target, c.s_m, c.s_a},
                                gold_boundaries_));
    by_mention.erase(it);
  }
  if (!by_mention.empty()) {
    throw Error(ErrorCode::kDanglingMentionRef,
                "candidate " + std::to_string(by_mention.begin()->first) +
                    " is not visible in " + where);
  }
  return ComputeAntecedentDistribution(target, candidates, scores);
}

}  // namespace maskcoref
