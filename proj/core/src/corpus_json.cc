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

#include <charconv>
#include <string>

#include "json.hpp"
#include "json_internal.h"
#include "maskcoref/corpus.h"
#include "maskcoref/error.h"

namespace maskcoref {

using nlohmann::json;

namespace internal {

json CorpusToJsonValue(const Corpus &corpus) {
  json docs = json::array();
  for (const Document &doc : corpus.documents()) {
    json tokens = json::array();
    for (const Token &t : doc.tokens()) {
      tokens.push_back(json::array({t.surface, t.pos, t.sentence, t.parse_bit}));
    }
    json mentions = json::array();
    for (const Mention &m : doc.mentions()) {
      mentions.push_back({
          {"start", m.start},
          {"end", m.end},
          {"entity", m.entity_id},
          {"coarse_type", CoarseTypeName(m.coarse_type)},
          {"fine_type", FineTypeName(m.fine_type)},
          {"is_embedded", m.is_embedded},
          {"contains_mentions", m.contains_mentions},
          {"length_tokens", m.length_tokens},
          {"length_chars", m.length_chars_nospace},
          {"is_first_of_entity", m.is_first_of_entity},
      });
    }
    docs.push_back({{"doc_id", doc.doc_id()},
                    {"tokens", std::move(tokens)},
                    {"mentions", std::move(mentions)}});
  }
  return {{"format", "maskcoref-corpus"},
          {"version", 1},
          {"documents", std::move(docs)}};
}

// Derived mention attributes in the file are informational; they are
// recomputed from tokens and spans on load.
Corpus CorpusFromJsonValue(const json &value) {
  try {
    if (value.value("format", "") != "maskcoref-corpus") {
      throw Error(ErrorCode::kSchemaViolation, "not a maskcoref corpus file");
    }
    std::vector<Document> docs;
    for (const json &doc : value.at("documents")) {
      std::vector<Token> tokens;
      for (const json &t : doc.at("tokens")) {
        tokens.push_back({t.at(0).get<std::string>(), t.at(1).get<std::string>(),
                          t.at(2).get<int>(), t.at(3).get<std::string>()});
      }
      std::vector<MentionSpan> spans;
      for (const json &m : doc.at("mentions")) {
        spans.push_back({m.at("start").get<int>(), m.at("end").get<int>(),
                         m.at("entity").get<int>()});
      }
      docs.push_back(Document::Build(doc.at("doc_id").get<std::string>(),
                                     std::move(tokens), std::move(spans)));
    }
    return Corpus(std::move(docs));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string("corpus JSON: ") + e.what());
  }
}

json ParseJson(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string(what) + ": " + e.what());
  }
}

}  // namespace internal

std::string CorpusToJson(const Corpus &corpus, int indent) {
  return internal::CorpusToJsonValue(corpus).dump(indent);
}

Corpus CorpusFromJson(std::string_view text) {
  return internal::CorpusFromJsonValue(internal::ParseJson(text, "corpus JSON"));
}

std::vector<HumanGuessSet> LoadHumanGuesses(std::istream &in,
                                            const Corpus &corpus) {
  std::vector<HumanGuessSet> sets;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "guesses line " + std::to_string(line_number);
    json obj = internal::ParseJson(line, where);
    HumanGuessSet set;
    try {
      set.doc_id = obj.at("doc_id").get<std::string>();
      set.mention_index = obj.at("mention_index").get<int>();
      for (const auto &[key, count] : obj.at("guesses").items()) {
        int entity = kNewEntity;
        if (key != "new") {
          auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), entity);
          if (ec != std::errc() || ptr != key.data() + key.size() || entity < 0) {
            throw Error(ErrorCode::kSchemaViolation,
                        where + ": guess key '" + key +
                            "' is neither an entity id nor \"new\"");
          }
        }
        int value = count.get<int>();
        if (value < 0) {
          throw Error(ErrorCode::kNegativeCount,
                      where + ": negative count for entity " + key);
        }
        set.guesses[entity] = value;
      }
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kSchemaViolation, where + ": " + e.what());
    }
    const Document *doc = corpus.Find(set.doc_id);
    if (doc == nullptr) {
      throw Error(ErrorCode::kUnknownDocId, where + ": unknown document " + set.doc_id);
    }
    if (set.mention_index < 0 || set.mention_index >= doc->num_mentions()) {
      throw Error(ErrorCode::kDanglingMentionRef,
                  where + ": mention index " + std::to_string(set.mention_index) +
                      " out of range for " + set.doc_id);
    }
    if (set.total() <= 0) {
      throw Error(ErrorCode::kNegativeCount, where + ": total guess count is zero");
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace maskcoref
