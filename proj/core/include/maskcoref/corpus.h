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

// Document model for coreference-annotated corpora in the CoNLL-2012 column
// format, including mention-form classification and length measures.

#ifndef MASKCOREF_CORPUS_H_
#define MASKCOREF_CORPUS_H_

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace maskcoref {

// Entity id used for the "discourse-new" outcome. Annotated entity ids are
// always non-negative.
inline constexpr int kNewEntity = -1;

enum class CoarseType { kPronoun = 0, kProperName = 1, kFullNP = 2 };
enum class FineType {
  kPron1 = 0,
  kPron2 = 1,
  kPron3 = 2,
  kDemonstrative = 3,
  kProperName = 4,
  kFullNP = 5,
};
inline constexpr int kNumCoarseTypes = 3;
inline constexpr int kNumFineTypes = 6;

std::string_view CoarseTypeName(CoarseType type);
std::string_view FineTypeName(FineType type);
std::optional<CoarseType> ParseCoarseType(std::string_view name);
std::optional<FineType> ParseFineType(std::string_view name);
CoarseType CoarseOf(FineType fine);

struct Token {
  std::string surface;
  std::string pos;
  int sentence = 0;
  std::string parse_bit;

  bool operator==(const Token &) const = default;
};

// A mention span as annotated, before derived attributes are computed.
struct MentionSpan {
  int start = 0;  // inclusive token index
  int end = 0;    // inclusive token index
  int entity_id = 0;
};

struct Mention {
  int start = 0;
  int end = 0;
  int entity_id = 0;
  CoarseType coarse_type = CoarseType::kFullNP;
  FineType fine_type = FineType::kFullNP;
  bool is_embedded = false;        // strictly inside another mention
  bool contains_mentions = false;  // strictly contains another mention
  int length_tokens = 1;
  int length_chars_nospace = 1;
  bool is_first_of_entity = false;

  bool operator==(const Mention &) const = default;
};

// Half-open token range of one sentence.
struct SentenceRange {
  int begin = 0;
  int end = 0;

  bool operator==(const SentenceRange &) const = default;
};

// An immutable coreference-annotated document. Mentions are kept in document
// order: by start token, then by end token. Mention indices used throughout
// the library refer to this order.
class Document {
 public:
  // Validates spans against the token stream and derives every mention
  // attribute (types, lengths, embedding, first-of-entity).
  static Document Build(std::string doc_id, std::vector<Token> tokens,
                        std::vector<MentionSpan> spans);

  const std::string &doc_id() const { return doc_id_; }
  const std::vector<Token> &tokens() const { return tokens_; }
  const std::vector<SentenceRange> &sentences() const { return sentences_; }
  const std::vector<Mention> &mentions() const { return mentions_; }
  const Mention &mention(int index) const { return mentions_[index]; }
  int num_mentions() const { return static_cast<int>(mentions_.size()); }
  int num_tokens() const { return static_cast<int>(tokens_.size()); }

  // Entity id -> mention indices in document order.
  const std::map<int, std::vector<int>> &entities() const { return entities_; }
  const std::vector<int> &chain(int entity_id) const;

  // Position of the mention inside its entity chain (0 for the first).
  int chain_position(int mention_index) const {
    return chain_position_[mention_index];
  }
  int sentence_of_mention(int mention_index) const {
    return tokens_[mentions_[mention_index].start].sentence;
  }

  bool operator==(const Document &other) const;

 private:
  Document() = default;

  std::string doc_id_;
  std::vector<Token> tokens_;
  std::vector<SentenceRange> sentences_;
  std::vector<Mention> mentions_;
  std::map<int, std::vector<int>> entities_;
  std::vector<int> chain_position_;
};

class Corpus {
 public:
  Corpus() = default;
  // Throws DuplicateDocId.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document> &documents() const { return documents_; }
  int size() const { return static_cast<int>(documents_.size()); }
  const Document *Find(std::string_view doc_id) const;
  // Throws UnknownDocId.
  const Document &Get(std::string_view doc_id) const;

  // Appends documents from another corpus; throws DuplicateDocId.
  void Merge(Corpus other);

  int num_mentions() const;
  int num_entities() const;

  bool operator==(const Corpus &other) const {
    return documents_ == other.documents_;
  }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, int> index_;
};

// Parses CoNLL-2012 "_conll" text. Each (document, part) pair becomes its own
// Document with id "<name>_<part>". `source` names the input in diagnostics.
// Throws MalformedColumnCount, UnbalancedCorefBracket, DuplicateDocId.
Corpus ParseConll(std::istream &in, std::string_view source = "<input>");

struct MentionForm {
  CoarseType coarse = CoarseType::kFullNP;
  FineType fine = FineType::kFullNP;

  bool operator==(const MentionForm &) const = default;
};

// Mention-form classification over the tokens [start, end].
MentionForm ClassifyMention(std::span<const Token> tokens, int start, int end);

// Index of the syntactic head token of the span (rightmost proper noun of the
// head region, else rightmost noun, else the last token).
int HeadToken(std::span<const Token> tokens, int start, int end);

struct MentionLengths {
  int tokens = 0;
  int chars_nospace = 0;
};
MentionLengths ComputeMentionLengths(std::span<const Token> tokens, int start,
                                     int end);

// Cloze guesses for one masked mention. Keys are entity ids, kNewEntity for a
// "new referent" guess.
struct HumanGuessSet {
  std::string doc_id;
  int mention_index = 0;
  std::map<int, int> guesses;

  int total() const;
  std::map<int, double> Normalized() const;
};

// Reads JSONL, one {"doc_id", "mention_index", "guesses": {id: count}} object
// per line. Guess keys are decimal entity ids or "new". Throws UnknownDocId,
// NegativeCount, SchemaViolation, DanglingMentionRef.
std::vector<HumanGuessSet> LoadHumanGuesses(std::istream &in,
                                            const Corpus &corpus);

// Internal JSON corpus format.
std::string CorpusToJson(const Corpus &corpus, int indent = -1);
Corpus CorpusFromJson(std::string_view text);

}  // namespace maskcoref

#endif  // MASKCOREF_CORPUS_H_
