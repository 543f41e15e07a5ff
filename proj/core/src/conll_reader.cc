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

// CoNLL-2012 reader. Columns: document, part, word number, word, POS, parse
// bit, lemma, frameset, sense, speaker, named entities, predicate arguments
// (zero or more), coreference.

#include <charconv>
#include <map>
#include <string>
#include <vector>

#include "maskcoref/corpus.h"
#include "maskcoref/error.h"
#include "text_util.h"

namespace maskcoref {
namespace {

constexpr int kMinColumns = 12;
constexpr int kWordColumn = 3;
constexpr int kPosColumn = 4;
constexpr int kParseColumn = 5;

class ConllReader {
 public:
  explicit ConllReader(std::string_view source) : source_(source) {}

  Corpus Read(std::istream &in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.starts_with("#begin document")) {
        BeginDocument(line);
      } else if (line.starts_with("#end document")) {
        EndDocument();
      } else if (IsBlank(line)) {
        if (in_document_) EndSentence();
      } else if (line.starts_with("#")) {
        continue;
      } else {
        TokenLine(line);
      }
    }
    if (in_document_) {
      Fail(ErrorCode::kUnbalancedCorefBracket,
           "document " + doc_id_ + " is missing '#end document'");
    }
    return std::move(corpus_);
  }

 private:
  static bool IsBlank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
  }

  [[noreturn]] void Fail(ErrorCode code, const std::string &what) const {
    throw Error(code, std::string(source_) + ":" +
                          std::to_string(line_number_) + ": " + what);
  }

  // "#begin document (name); part 000"
  void BeginDocument(const std::string &line) {
    if (in_document_) {
      Fail(ErrorCode::kUnbalancedCorefBracket,
           "nested '#begin document' inside " + doc_id_);
    }
    size_t open = line.find('(');
    size_t close = line.find(')', open == std::string::npos ? 0 : open);
    if (open == std::string::npos || close == std::string::npos) {
      Fail(ErrorCode::kMalformedColumnCount, "malformed '#begin document'");
    }
    std::string name = line.substr(open + 1, close - open - 1);
    std::string part = "000";
    size_t part_pos = line.find("part", close);
    if (part_pos != std::string::npos) {
      auto fields = internal::SplitWhitespace(
          std::string_view(line).substr(part_pos + 4));
      if (!fields.empty()) part = std::string(fields[0]);
    }
    doc_name_ = name;
    doc_id_ = name + "_" + part;
    in_document_ = true;
    tokens_.clear();
    spans_.clear();
    open_.clear();
    sentence_ = 0;
    sentence_columns_ = 0;
    sentence_has_tokens_ = false;
  }

  void EndDocument() {
    if (!in_document_) Fail(ErrorCode::kUnbalancedCorefBracket, "stray '#end document'");
    EndSentence();
    for (const auto &[entity, stack] : open_) {
      if (!stack.empty()) {
        Fail(ErrorCode::kUnbalancedCorefBracket,
             "document " + doc_id_ + ": entity " + std::to_string(entity) +
                 " opened at line " + std::to_string(stack.back().line) +
                 " is never closed");
      }
    }
    try {
      std::vector<Document> docs;
      docs.push_back(Document::Build(doc_id_, std::move(tokens_), std::move(spans_)));
      corpus_.Merge(Corpus(std::move(docs)));
    } catch (const Error &e) {
      Fail(e.code(), e.what());
    }
    in_document_ = false;
  }

  void EndSentence() {
    if (sentence_has_tokens_) ++sentence_;
    sentence_has_tokens_ = false;
    sentence_columns_ = 0;
  }

  void TokenLine(const std::string &line) {
    if (!in_document_) {
      Fail(ErrorCode::kMalformedColumnCount, "token line outside a document");
    }
    auto fields = internal::SplitWhitespace(line);
    const int columns = static_cast<int>(fields.size());
    if (columns < kMinColumns) {
      Fail(ErrorCode::kMalformedColumnCount,
           "expected at least " + std::to_string(kMinColumns) +
               " columns, found " + std::to_string(columns));
    }
    if (sentence_columns_ != 0 && columns != sentence_columns_) {
      Fail(ErrorCode::kMalformedColumnCount,
           "column count " + std::to_string(columns) +
               " differs from the sentence's " +
               std::to_string(sentence_columns_));
    }
    if (fields[0] != doc_name_) {
      Fail(ErrorCode::kMalformedColumnCount,
           "token line names document '" + std::string(fields[0]) +
               "' inside " + doc_name_);
    }
    sentence_columns_ = columns;
    sentence_has_tokens_ = true;

    const int index = static_cast<int>(tokens_.size());
    tokens_.push_back({std::string(fields[kWordColumn]),
                       std::string(fields[kPosColumn]), sentence_,
                       std::string(fields[kParseColumn])});
    Coref(fields.back(), index);
  }

  void Coref(std::string_view field, int token) {
    if (field == "-") return;
    size_t pos = 0;
    while (pos <= field.size()) {
      size_t bar = field.find('|', pos);
      std::string_view item = field.substr(
          pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
      CorefItem(item, token);
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
  }

  void CorefItem(std::string_view item, int token) {
    bool opens = !item.empty() && item.front() == '(';
    bool closes = !item.empty() && item.back() == ')';
    std::string_view digits = item.substr(opens ? 1 : 0);
    if (closes) digits.remove_suffix(1);
    int entity = -1;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), entity);
    if ((!opens && !closes) || digits.empty() || ec != std::errc() ||
        ptr != digits.data() + digits.size() || entity < 0) {
      Fail(ErrorCode::kUnbalancedCorefBracket,
           "document " + doc_id_ + ": malformed coreference item '" +
               std::string(item) + "'");
    }
    if (opens && closes) {
      spans_.push_back({token, token, entity});
      return;
    }
    if (opens) {
      open_[entity].push_back({token, line_number_});
      return;
    }
    auto it = open_.find(entity);
    if (it == open_.end() || it->second.empty()) {
      Fail(ErrorCode::kUnbalancedCorefBracket,
           "document " + doc_id_ + ": entity " + std::to_string(entity) +
               " closed without a matching open bracket");
    }
    spans_.push_back({it->second.back().token, token, entity});
    it->second.pop_back();
  }

  struct OpenBracket {
    int token;
    int line;
  };

  std::string_view source_;
  int line_number_ = 0;
  Corpus corpus_;

  bool in_document_ = false;
  std::string doc_name_;
  std::string doc_id_;
  std::vector<Token> tokens_;
  std::vector<MentionSpan> spans_;
  std::map<int, std::vector<OpenBracket>> open_;
  int sentence_ = 0;
  int sentence_columns_ = 0;
  bool sentence_has_tokens_ = false;
};

}  // namespace

Corpus ParseConll(std::istream &in, std::string_view source) {
  return ConllReader(source).Read(in);
}

}  // namespace maskcoref
