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

#include "maskcoref/corpus.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "maskcoref/error.h"
#include "text_util.h"

namespace maskcoref {
namespace {

const std::set<std::string, std::less<>> kFirstPerson = {
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves"};
const std::set<std::string, std::less<>> kSecondPerson = {
    "you", "your", "yours", "yourself", "yourselves",
    "thou", "thee", "thy", "thine", "ye"};
const std::set<std::string, std::less<>> kThirdPerson = {
    "he", "him", "his", "himself", "she", "her", "hers", "herself",
    "it", "its", "itself", "they", "them", "their", "theirs", "themselves"};
const std::set<std::string, std::less<>> kDemonstratives = {
    "this", "that", "these", "those"};

bool IsProperNounTag(std::string_view pos) {
  return pos == "NNP" || pos == "NNPS";
}

bool IsNounTag(std::string_view pos) { return pos.starts_with("NN"); }

bool IsPronounTag(std::string_view pos) {
  return pos == "PRP" || pos == "PRP$";
}

// Tags that end the pre-head region of a noun phrase once a noun was seen
// (prepositional, relative and verbal post-modifiers, punctuation).
bool EndsHeadRegion(std::string_view pos) {
  return pos == "IN" || pos == "TO" || pos == "WDT" || pos == "WP" ||
         pos == "WP$" || pos == "WRB" || pos.starts_with("VB") || pos == "," ||
         pos == ":" || pos == "-LRB-" || pos == "HYPH";
}

std::optional<FineType> PronounPerson(std::string_view word) {
  if (kFirstPerson.contains(word)) return FineType::kPron1;
  if (kSecondPerson.contains(word)) return FineType::kPron2;
  if (kThirdPerson.contains(word)) return FineType::kPron3;
  return std::nullopt;
}

// [begin, end) of the head region: tokens after the last possessive marker
// and before the first post-modifier that follows a noun.
std::pair<int, int> HeadRegion(std::span<const Token> tokens, int start,
                               int end) {
  int begin = start;
  int limit = end + 1;
  bool seen_noun = false;
  for (int i = start; i <= end; ++i) {
    const std::string &pos = tokens[i].pos;
    if (pos == "POS" && i < end) {
      begin = i + 1;
      seen_noun = false;
      continue;
    }
    if (seen_noun && EndsHeadRegion(pos)) {
      limit = i;
      break;
    }
    if (IsNounTag(pos)) seen_noun = true;
  }
  return {begin, limit};
}

}  // namespace

std::string_view CoarseTypeName(CoarseType type) {
  switch (type) {
    case CoarseType::kPronoun: return "pronoun";
    case CoarseType::kProperName: return "proper_name";
    case CoarseType::kFullNP: return "full_np";
  }
  return "?";
}

std::string_view FineTypeName(FineType type) {
  switch (type) {
    case FineType::kPron1: return "pron1";
    case FineType::kPron2: return "pron2";
    case FineType::kPron3: return "pron3";
    case FineType::kDemonstrative: return "demonstrative";
    case FineType::kProperName: return "proper_name";
    case FineType::kFullNP: return "full_np";
  }
  return "?";
}

std::optional<CoarseType> ParseCoarseType(std::string_view name) {
  for (int i = 0; i < kNumCoarseTypes; ++i) {
    auto type = static_cast<CoarseType>(i);
    if (CoarseTypeName(type) == name) return type;
  }
  return std::nullopt;
}

std::optional<FineType> ParseFineType(std::string_view name) {
  for (int i = 0; i < kNumFineTypes; ++i) {
    auto type = static_cast<FineType>(i);
    if (FineTypeName(type) == name) return type;
  }
  return std::nullopt;
}

CoarseType CoarseOf(FineType fine) {
  switch (fine) {
    case FineType::kProperName: return CoarseType::kProperName;
    case FineType::kFullNP: return CoarseType::kFullNP;
    default: return CoarseType::kPronoun;
  }
}

int HeadToken(std::span<const Token> tokens, int start, int end) {
  auto [begin, limit] = HeadRegion(tokens, start, end);
  for (int i = limit - 1; i >= begin; --i) {
    if (IsProperNounTag(tokens[i].pos)) return i;
  }
  for (int i = limit - 1; i >= begin; --i) {
    if (IsNounTag(tokens[i].pos)) return i;
  }
  return limit > begin ? limit - 1 : end;
}

MentionForm ClassifyMention(std::span<const Token> tokens, int start,
                            int end) {
  if (start == end) {
    const Token &token = tokens[start];
    const std::string word = internal::Lowercase(token.surface);
    if (kDemonstratives.contains(word)) {
      return {CoarseType::kPronoun, FineType::kDemonstrative};
    }
    std::optional<FineType> person = PronounPerson(word);
    if (IsPronounTag(token.pos)) {
      return {CoarseType::kPronoun, person.value_or(FineType::kPron3)};
    }
    if (person.has_value()) return {CoarseType::kPronoun, *person};
  }
  int head = HeadToken(tokens, start, end);
  if (IsProperNounTag(tokens[head].pos)) {
    return {CoarseType::kProperName, FineType::kProperName};
  }
  return {CoarseType::kFullNP, FineType::kFullNP};
}

MentionLengths ComputeMentionLengths(std::span<const Token> tokens, int start,
                                     int end) {
  MentionLengths lengths;
  lengths.tokens = end - start + 1;
  for (int i = start; i <= end; ++i) {
    lengths.chars_nospace += internal::CountCodePointsNoSpace(tokens[i].surface);
  }
  return lengths;
}

Document Document::Build(std::string doc_id, std::vector<Token> tokens,
                         std::vector<MentionSpan> spans) {
  Document doc;
  doc.doc_id_ = std::move(doc_id);
  doc.tokens_ = std::move(tokens);
  const int n = static_cast<int>(doc.tokens_.size());

  for (int i = 0; i < n; ++i) {
    int s = doc.tokens_[i].sentence;
    if (i == 0 ? s != 0 : (s != doc.tokens_[i - 1].sentence &&
                           s != doc.tokens_[i - 1].sentence + 1)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "document " + doc.doc_id_ +
                      ": sentence indices must be dense and non-decreasing");
    }
    if (i == 0 || s != doc.tokens_[i - 1].sentence) {
      doc.sentences_.push_back({i, i + 1});
    } else {
      doc.sentences_.back().end = i + 1;
    }
  }

  for (const MentionSpan &span : spans) {
    if (span.start < 0 || span.end < span.start || span.end >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "document " + doc.doc_id_ + ": mention span (" +
                      std::to_string(span.start) + "," +
                      std::to_string(span.end) + ") outside token bounds");
    }
    if (span.entity_id < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "document " + doc.doc_id_ + ": negative entity id");
    }
  }
  std::stable_sort(spans.begin(), spans.end(),
                   [](const MentionSpan &a, const MentionSpan &b) {
                     if (a.start != b.start) return a.start < b.start;
                     if (a.end != b.end) return a.end < b.end;
                     return a.entity_id < b.entity_id;
                   });

  doc.mentions_.reserve(spans.size());
  for (const MentionSpan &span : spans) {
    Mention m;
    m.start = span.start;
    m.end = span.end;
    m.entity_id = span.entity_id;
    MentionForm form = ClassifyMention(doc.tokens_, m.start, m.end);
    m.coarse_type = form.coarse;
    m.fine_type = form.fine;
    MentionLengths lengths = ComputeMentionLengths(doc.tokens_, m.start, m.end);
    m.length_tokens = lengths.tokens;
    m.length_chars_nospace = lengths.chars_nospace;
    doc.mentions_.push_back(m);
  }

  // Strict containment. Mentions are sorted by (start, end), so any container
  // of mention i starts at or before it.
  const int num = static_cast<int>(doc.mentions_.size());
  for (int i = 0; i < num; ++i) {
    Mention &inner = doc.mentions_[i];
    for (int j = 0; j < num; ++j) {
      const Mention &outer = doc.mentions_[j];
      if (outer.start > inner.start) break;
      bool contains = outer.start <= inner.start && inner.end <= outer.end &&
                      (outer.start != inner.start || outer.end != inner.end);
      if (contains) {
        inner.is_embedded = true;
        doc.mentions_[j].contains_mentions = true;
      }
    }
  }

  doc.chain_position_.resize(num);
  for (int i = 0; i < num; ++i) {
    std::vector<int> &chain = doc.entities_[doc.mentions_[i].entity_id];
    doc.chain_position_[i] = static_cast<int>(chain.size());
    doc.mentions_[i].is_first_of_entity = chain.empty();
    chain.push_back(i);
  }
  return doc;
}

const std::vector<int> &Document::chain(int entity_id) const {
  auto it = entities_.find(entity_id);
  if (it == entities_.end()) {
    throw Error(ErrorCode::kUnknownEntity,
                "document " + doc_id_ + " has no entity " +
                    std::to_string(entity_id));
  }
  return it->second;
}

bool Document::operator==(const Document &other) const {
  return doc_id_ == other.doc_id_ && tokens_ == other.tokens_ &&
         sentences_ == other.sentences_ && mentions_ == other.mentions_ &&
         entities_ == other.entities_;
}

Corpus::Corpus(std::vector<Document> documents) {
  for (Document &doc : documents) {
    if (index_.contains(doc.doc_id())) {
      throw Error(ErrorCode::kDuplicateDocId,
                  "duplicate document id " + doc.doc_id());
    }
    index_.emplace(doc.doc_id(), static_cast<int>(documents_.size()));
    documents_.push_back(std::move(doc));
  }
}

const Document *Corpus::Find(std::string_view doc_id) const {
  auto it = index_.find(std::string(doc_id));
  return it == index_.end() ? nullptr : &documents_[it->second];
}

const Document &Corpus::Get(std::string_view doc_id) const {
  const Document *doc = Find(doc_id);
  if (doc == nullptr) {
    throw Error(ErrorCode::kUnknownDocId,
                "unknown document id " + std::string(doc_id));
  }
  return *doc;
}

void Corpus::Merge(Corpus other) {
  for (Document &doc : other.documents_) {
    if (index_.contains(doc.doc_id())) {
      throw Error(ErrorCode::kDuplicateDocId,
                  "duplicate document id " + doc.doc_id());
    }
    index_.emplace(doc.doc_id(), static_cast<int>(documents_.size()));
    documents_.push_back(std::move(doc));
  }
}

int Corpus::num_mentions() const {
  int total = 0;
  for (const Document &doc : documents_) total += doc.num_mentions();
  return total;
}

int Corpus::num_entities() const {
  int total = 0;
  for (const Document &doc : documents_) {
    total += static_cast<int>(doc.entities().size());
  }
  return total;
}

int HumanGuessSet::total() const {
  int sum = 0;
  for (const auto &[entity, count] : guesses) sum += count;
  return sum;
}

std::map<int, double> HumanGuessSet::Normalized() const {
  std::map<int, double> dist;
  const double sum = total();
  for (const auto &[entity, count] : guesses) {
    if (count > 0) dist[entity] = count / sum;
  }
  return dist;
}

}  // namespace maskcoref
