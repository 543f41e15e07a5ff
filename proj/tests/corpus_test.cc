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

#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "maskcoref/error.h"
#include "test_util.h"

namespace maskcoref {
namespace {

using testing::DocBuilder;

std::string Line(const std::string &word, const std::string &coref, int n = 0) {
  return "doc 0 " + std::to_string(n) + " " + word + " NN * - - - spk * " + coref + "\n";
}

Corpus Parse(const std::string &text) {
  std::istringstream in(text);
  return ParseConll(in, "test.conll");
}

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(ConllTest, TwoTokenMention) {
  const Corpus corpus = Parse("#begin document (doc); part 000\n" + Line("a", "(3") +
                              Line("b", "3)", 1) + "\n#end document\n");
  ASSERT_EQ(corpus.size(), 1);
  const Document &doc = corpus.documents()[0];
  EXPECT_EQ(doc.doc_id(), "doc_000");
  ASSERT_EQ(doc.num_mentions(), 1);
  EXPECT_EQ(doc.mention(0).start, 0);
  EXPECT_EQ(doc.mention(0).end, 1);
  EXPECT_EQ(doc.mention(0).entity_id, 3);
}

TEST(ConllTest, NoCorefColumnsGiveEmptyDocument) {
  const Corpus corpus = Parse("#begin document (doc); part 000\n" + Line("a", "-") +
                              Line("b", "-", 1) + "\n#end document\n");
  EXPECT_EQ(corpus.documents()[0].num_mentions(), 0);
  EXPECT_EQ(corpus.num_entities(), 0);
}

TEST(ConllTest, NestedSpansMarkEmbedding) {
  std::string text = "#begin document (doc); part 000\n";
  for (int i = 0; i < 10; ++i) {
    std::string coref = "-";
    if (i == 5) coref = "(1";
    if (i == 7) coref = "(2";
    if (i == 9) coref = "2)|1)";
    text += Line("w", coref, i);
  }
  text += "\n#end document\n";
  const Corpus corpus = Parse(text);
  const Document &doc = corpus.documents()[0];
  ASSERT_EQ(doc.num_mentions(), 2);
  const Mention &outer = doc.mention(0);
  const Mention &inner = doc.mention(1);
  EXPECT_EQ(outer.start, 5);
  EXPECT_EQ(inner.start, 7);
  EXPECT_TRUE(inner.is_embedded);
  EXPECT_FALSE(outer.is_embedded);
  EXPECT_TRUE(outer.contains_mentions);
  EXPECT_FALSE(inner.contains_mentions);
}

TEST(ConllTest, MalformedLineNamesLine) {
  const std::string text = "#begin document (doc); part 000\n" + Line("a", "-") +
                           "doc 0 1 b NN\n\n#end document\n";
  try {
    Parse(text);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedColumnCount);
    EXPECT_EQ(e.exit_code(), 2);
    EXPECT_NE(std::string(e.what()).find("test.conll:3"), std::string::npos) << e.what();
  }
}

TEST(ConllTest, UnbalancedBracket) {
  EXPECT_EQ(CodeOf([] {
              Parse("#begin document (doc); part 000\n" + Line("a", "(1") +
                    "\n#end document\n");
            }),
            ErrorCode::kUnbalancedCorefBracket);
}

TEST(ConllTest, DuplicateDocumentAcrossInputs) {
  const std::string text =
      "#begin document (doc); part 000\n" + Line("a", "(1)") + "\n#end document\n";
  Corpus corpus = Parse(text);
  EXPECT_EQ(CodeOf([&] { corpus.Merge(Parse(text)); }), ErrorCode::kDuplicateDocId);
}

TEST(ConllTest, RoundTripThroughRenderer) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Document doc = testing::SyntheticDocument("syn", seed);
    const Corpus corpus = Parse(testing::ToConll(doc, "syn"));
    const Document &parsed = corpus.documents()[0];
    EXPECT_EQ(parsed.tokens(), doc.tokens());
    EXPECT_EQ(parsed.mentions(), doc.mentions());
  }
}

std::vector<Token> Tokens(std::vector<std::pair<std::string, std::string>> words) {
  std::vector<Token> tokens;
  for (auto &[w, p] : words) tokens.push_back({w, p, 0, "*"});
  return tokens;
}

TEST(ClassifyTest, Examples) {
  auto classify = [](std::vector<std::pair<std::string, std::string>> words) {
    const std::vector<Token> tokens = Tokens(std::move(words));
    return ClassifyMention(tokens, 0, static_cast<int>(tokens.size()) - 1);
  };
  EXPECT_EQ(classify({{"she", "PRP"}}), (MentionForm{CoarseType::kPronoun, FineType::kPron3}));
  EXPECT_EQ(classify({{"Kamala", "NNP"}, {"Harris", "NNP"}}),
            (MentionForm{CoarseType::kProperName, FineType::kProperName}));
  EXPECT_EQ(classify({{"my", "PRP$"}, {"child", "NN"}, {"'s", "POS"}, {"teacher", "NN"}}),
            (MentionForm{CoarseType::kFullNP, FineType::kFullNP}));
  EXPECT_EQ(classify({{"that", "DT"}}),
            (MentionForm{CoarseType::kPronoun, FineType::kDemonstrative}));
  EXPECT_EQ(classify({{"I", "PRP"}}), (MentionForm{CoarseType::kPronoun, FineType::kPron1}));
  EXPECT_EQ(classify({{"you", "PRP"}}), (MentionForm{CoarseType::kPronoun, FineType::kPron2}));
}

TEST(LengthTest, Examples) {
  auto lengths = [](std::vector<std::pair<std::string, std::string>> words) {
    const std::vector<Token> tokens = Tokens(std::move(words));
    const MentionLengths l =
        ComputeMentionLengths(tokens, 0, static_cast<int>(tokens.size()) - 1);
    return std::make_pair(l.tokens, l.chars_nospace);
  };
  EXPECT_EQ(lengths({{"she", "PRP"}}), std::make_pair(1, 3));
  EXPECT_EQ(lengths({{"Kamala", "NNP"}, {"Harris", "NNP"}}), std::make_pair(2, 12));
  EXPECT_EQ(lengths({{"the", "DT"}, {"tall", "JJ"}, {"tree", "NN"}}), std::make_pair(3, 11));
}

TEST(DocumentTest, ChainsAndPositions) {
  const Document doc = testing::PairDocument();
  ASSERT_EQ(doc.num_mentions(), 4);
  EXPECT_EQ(doc.chain(1), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(doc.chain_position(3), 2);
  EXPECT_TRUE(doc.mention(0).is_first_of_entity);
  EXPECT_TRUE(doc.mention(1).is_first_of_entity);
  EXPECT_FALSE(doc.mention(2).is_first_of_entity);
  EXPECT_EQ(doc.sentence_of_mention(2), 1);
  EXPECT_EQ(doc.sentences().size(), 2u);
}

TEST(DocumentTest, RejectsOutOfRangeSpan) {
  DocBuilder b("bad");
  b.Add("a", "DT");
  b.Mention(0, 3, 0);
  EXPECT_EQ(CodeOf([&] { b.Build(); }), ErrorCode::kInvalidArgument);
}

TEST(HumanGuessTest, Normalization) {
  HumanGuessSet g{"d", 0, {{1, 20}}};
  EXPECT_EQ(g.Normalized(), (std::map<int, double>{{1, 1.0}}));
  g.guesses = {{1, 10}, {2, 10}};
  EXPECT_EQ(g.Normalized(), (std::map<int, double>{{1, 0.5}, {2, 0.5}}));
  g.guesses = {{1, 15}, {2, 5}};
  EXPECT_EQ(g.Normalized(), (std::map<int, double>{{1, 0.75}, {2, 0.25}}));
  EXPECT_EQ(g.total(), 20);
}

TEST(HumanGuessTest, LoadJsonl) {
  const Corpus corpus(std::vector<Document>{testing::PairDocument()});
  std::istringstream in(
      R"({"doc_id": "kim", "mention_index": 3, "guesses": {"1": 6, "0": 3, "new": 1}})"
      "\n");
  const std::vector<HumanGuessSet> sets = LoadHumanGuesses(in, corpus);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].guesses, (std::map<int, int>{{kNewEntity, 1}, {0, 3}, {1, 6}}));

  auto load = [&](const std::string &line) {
    std::istringstream s(line + "\n");
    LoadHumanGuesses(s, corpus);
  };
  EXPECT_EQ(CodeOf([&] { load(R"({"doc_id": "x", "mention_index": 0, "guesses": {"1": 1}})"); }),
            ErrorCode::kUnknownDocId);
  EXPECT_EQ(CodeOf([&] { load(R"({"doc_id": "kim", "mention_index": 9, "guesses": {"1": 1}})"); }),
            ErrorCode::kDanglingMentionRef);
  EXPECT_EQ(
      CodeOf([&] { load(R"({"doc_id": "kim", "mention_index": 1, "guesses": {"1": -2}})"); }),
      ErrorCode::kNegativeCount);
  EXPECT_EQ(CodeOf([&] { load(R"({"doc_id": "kim"})"); }), ErrorCode::kSchemaViolation);
}

TEST(CorpusJsonTest, RoundTrip) {
  std::vector<Document> docs;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    docs.push_back(testing::SyntheticDocument("d" + std::to_string(seed), seed));
  }
  docs.push_back(testing::PairDocument());
  const Corpus corpus(std::move(docs));
  EXPECT_EQ(CorpusFromJson(CorpusToJson(corpus)), corpus);
  EXPECT_EQ(CodeOf([] { CorpusFromJson(R"({"format": "other"})"); }),
            ErrorCode::kSchemaViolation);
}

}  // namespace
}  // namespace maskcoref
