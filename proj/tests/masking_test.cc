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

#include "maskcoref/masking.h"

#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "json.hpp"
#include "maskcoref/error.h"
#include "test_util.h"

namespace maskcoref {
namespace {

using testing::DocBuilder;

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

// Written against the constraint statement rather than the library: two
// mentions in one subset must not corefer and must have at least `window`
// tokens strictly between them.
bool SubsetOk(const Document &doc, const std::vector<int> &subset, int window) {
  for (size_t i = 0; i < subset.size(); ++i) {
    for (size_t j = i + 1; j < subset.size(); ++j) {
      const Mention &a = doc.mention(subset[i]);
      const Mention &b = doc.mention(subset[j]);
      if (a.entity_id == b.entity_id) return false;
      const Mention &first = a.start <= b.start ? a : b;
      const Mention &second = a.start <= b.start ? b : a;
      if (second.start - first.end - 1 < window) return false;
    }
  }
  return true;
}

std::string Text(const std::vector<Token> &tokens) {
  std::string out;
  for (const Token &t : tokens) out += t.surface + "\t" + t.pos + "\t" + t.parse_bit + "\n";
  return out;
}

// Filler sentence of `n` tokens.
void Filler(DocBuilder &b, int n) {
  for (int i = 0; i < n; ++i) b.Add("w", "NN");
  b.EndSentence();
}

TEST(PlanTest, SingleMention) {
  DocBuilder b("one");
  b.Add("Kim", "NNP");
  b.Mention(0, 0, 0);
  const MaskPlan plan = PlanPartition(b.Build());
  EXPECT_EQ(plan.subsets, (std::vector<std::vector<int>>{{0}}));
  EXPECT_TRUE(plan.discarded_inner.empty());
}

TEST(PlanTest, AntecedentInDifferentSubset) {
  DocBuilder b("chain");
  const int m1 = b.Add("Ana", "NNP");
  Filler(b, 100);
  const int m2 = b.Add("Tom", "NNP");
  Filler(b, 100);
  const int m3 = b.Add("he", "PRP");
  b.Mention(m1, m1, 0);
  b.Mention(m2, m2, 1);
  b.Mention(m3, m3, 1);
  const Document doc = b.Build();
  const MaskPlan plan = PlanPartition(doc, 50);
  EXPECT_TRUE(MasksConflict(doc, 1, 2, 50));
  for (const std::vector<int> &subset : plan.subsets) {
    const std::set<int> s(subset.begin(), subset.end());
    EXPECT_FALSE(s.count(1) && s.count(2));
  }
  EXPECT_EQ(VerifyPlan(doc, plan), "");
}

TEST(PlanTest, DistantUnrelatedMentionsShare) {
  DocBuilder b("far");
  const int a = b.Add("Ana", "NNP");
  Filler(b, 199);
  const int c = b.Add("Tom", "NNP");
  b.Mention(a, a, 0);
  b.Mention(c, c, 1);
  const Document doc = b.Build();
  EXPECT_FALSE(MasksConflict(doc, 0, 1, 50));
  const MaskPlan plan = PlanPartition(doc, 50);
  ASSERT_EQ(plan.subsets.size(), 1u);
  EXPECT_TRUE(SubsetOk(doc, plan.subsets[0], 50));
  EXPECT_EQ(VerifyPlan(doc, plan), "");
}

TEST(PlanTest, WindowBoundary) {
  // Exactly `window` tokens between: allowed; one fewer: conflict.
  for (int gap : {49, 50}) {
    DocBuilder b("gap");
    const int a = b.Add("Ana", "NNP");
    Filler(b, gap);
    const int c = b.Add("Tom", "NNP");
    b.Mention(a, a, 0);
    b.Mention(c, c, 1);
    const Document doc = b.Build();
    EXPECT_EQ(MasksConflict(doc, 0, 1, 50), gap < 50) << gap;
    EXPECT_EQ(SubsetOk(doc, {0, 1}, 50), gap >= 50) << gap;
  }
}

TEST(PlanTest, RandomDocumentsSatisfyConstraints) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const Document doc = testing::SyntheticDocument("r" + std::to_string(seed), seed,
                                                    {.sentences = 60});
    for (int window : {0, 5, 50}) {
      const MaskPlan plan = PlanPartition(doc, window);
      ASSERT_EQ(VerifyPlan(doc, plan), "") << seed;
      std::vector<int> covered;
      for (const std::vector<int> &subset : plan.subsets) {
        ASSERT_TRUE(SubsetOk(doc, subset, window)) << seed;
        covered.insert(covered.end(), subset.begin(), subset.end());
      }
      std::sort(covered.begin(), covered.end());
      EXPECT_EQ(covered, MaskableMentions(doc));
      for (int inner : plan.discarded_inner) EXPECT_TRUE(doc.mention(inner).is_embedded);
    }
  }
}

TEST(PlanTest, VerifierRejectsBadPlans) {
  const Document doc = testing::PairDocument();
  MaskPlan plan = PlanPartition(doc);
  ASSERT_EQ(VerifyPlan(doc, plan), "");
  MaskPlan merged = plan;
  merged.subsets = {MaskableMentions(doc)};
  EXPECT_NE(VerifyPlan(doc, merged), "");
  MaskPlan missing = plan;
  missing.subsets.pop_back();
  EXPECT_NE(VerifyPlan(doc, missing), "");
}

TEST(PlanTest, JsonRoundTrip) {
  const Document doc = testing::SyntheticDocument("j", 4, {.possessive = 0.5});
  const MaskPlan plan = PlanPartition(doc, 7);
  EXPECT_EQ(MaskPlanFromJson(MaskPlanToJson(plan)), plan);
  EXPECT_EQ(CodeOf([] { MaskPlanFromJson("{}"); }), ErrorCode::kSchemaViolation);
}

TEST(EmitTest, EmptySubsetIsIdentity) {
  const Document doc = testing::PairDocument();
  const MaskedVariant v = EmitMaskSet(doc, {}, 0);
  EXPECT_EQ(v.tokens, doc.tokens());
  for (int i = 0; i < doc.num_tokens(); ++i) EXPECT_EQ(v.index_map[i], i);
}

TEST(EmitTest, ThreeTokenMentionMaskedOnce) {
  DocBuilder b("three");
  b.Add("Yesterday", "NN");
  b.Add("the", "DT");
  b.Add("tall", "JJ");
  b.Add("tree", "NN");
  b.Add("fell", "VBD");
  b.Mention(1, 3, 0);
  const Document doc = b.Build();
  const MaskedVariant v = EmitMaskSet(doc, {0}, 0, 1);
  ASSERT_EQ(v.tokens.size(), doc.tokens().size() - 2);
  EXPECT_EQ(v.tokens[1].surface, "[MASK]");
  EXPECT_EQ(v.index_map, (std::vector<int>{0, -1, -1, -1, 2}));
  EXPECT_EQ(v.inverse_map, (std::vector<int>{0, -1, 2 + 2}));
  ASSERT_EQ(v.masked.size(), 1u);
  EXPECT_EQ(v.masked[0].variant_start, 1);
  EXPECT_EQ(v.masked[0].variant_end, 1);

  const MaskedVariant v3 = EmitMaskSet(doc, {0}, 0, 3);
  EXPECT_EQ(v3.tokens.size(), doc.tokens().size());
  EXPECT_EQ(v3.masked[0].variant_end, 3);
  EXPECT_EQ(Text(Unmask(v3, doc)), Text(doc.tokens()));

  EXPECT_EQ(CodeOf([&] { EmitMaskSet(doc, {0}, 0, 2); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { EmitMasked(doc, PlanPartition(doc), 5); }),
            ErrorCode::kBadSubsetIndex);
}

TEST(EmitTest, InnerMentionDiscarded) {
  DocBuilder b("inner");
  b.Add("Kim", "NNP");
  b.Add("'s", "POS");
  b.Add("dog", "NN");
  b.Add("barked", "VBD");
  b.Mention(0, 2, 0);
  b.Mention(0, 0, 1);
  const Document doc = b.Build();
  const MaskPlan plan = PlanPartition(doc);
  // Document order puts the inner span (0, 0) before the outer (0, 2).
  EXPECT_EQ(plan.discarded_inner, (std::vector<int>{0}));
  const MaskedVariant v = EmitMasked(doc, plan, 0);
  EXPECT_EQ(v.discarded_inner, (std::vector<int>{0}));
  EXPECT_EQ(v.masked_mentions(), (std::vector<int>{1}));
  EXPECT_EQ(CodeOf([&] { EmitMaskSet(doc, {0}, 0); }), ErrorCode::kInvalidArgument);
}

TEST(EmitTest, UnmaskRoundTripIsExact) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const Document doc = testing::SyntheticDocument("u", seed, {.sentences = 30,
                                                               .possessive = 0.3});
    const MaskPlan plan = PlanPartition(doc, 10);
    for (int count : {1, 3}) {
      for (size_t s = 0; s < plan.subsets.size(); ++s) {
        const MaskedVariant v = EmitMasked(doc, plan, static_cast<int>(s), count);
        ASSERT_EQ(Text(Unmask(v, doc)), Text(doc.tokens())) << seed << " " << s;
        int masks = 0;
        for (const Token &t : v.tokens) masks += t.surface == "[MASK]";
        EXPECT_EQ(masks, count * static_cast<int>(plan.subsets[s].size()));
      }
    }
  }
}

TEST(EmitTest, TextAndIndexMap) {
  const Document doc = testing::PairDocument();
  const MaskedVariant v = EmitMaskSet(doc, {3}, 2);
  EXPECT_EQ(VariantText(v),
            "Kim thanked the neighbor .\n"
            "She was glad because [MASK] got hired .\n");
  const nlohmann::json map = nlohmann::json::parse(VariantIndexMapJson(v));
  EXPECT_EQ(map["format"], "maskcoref-index-map");
  EXPECT_EQ(map["variant"], 2);
  EXPECT_EQ(map["mask_token"], "[MASK]");
  EXPECT_EQ(map["num_variant_tokens"], doc.num_tokens());
  EXPECT_EQ(map["original_to_variant"].size(), static_cast<size_t>(doc.num_tokens()));
  EXPECT_EQ(map["masked"][0]["mention"], 3);
  EXPECT_EQ(map["masked"][0]["variant_start"], 9);
}

TEST(SampleTest, FractionArithmetic) {
  DocBuilder b("forty");
  for (int i = 0; i < 40; ++i) {
    b.Add("x", "NNP");
    b.Mention(i, i, i);
  }
  const Document doc = b.Build();
  for (const std::vector<int> &s : SampleMask(doc, 0.10, 7, 5)) EXPECT_EQ(s.size(), 4u);
  for (const std::vector<int> &s : SampleMask(doc, 1.0, 7, 3)) {
    EXPECT_EQ(s, MaskableMentions(doc));
  }
  EXPECT_EQ(SampleMask(doc, 0.3, 11, 4), SampleMask(doc, 0.3, 11, 4));
  EXPECT_NE(SampleMask(doc, 0.3, 11, 4), SampleMask(doc, 0.3, 12, 4));
  EXPECT_EQ(SampleMask(doc, 0.001, 1, 1)[0].size(), 1u);
  EXPECT_EQ(CodeOf([&] { SampleMask(doc, 0.0, 1); }), ErrorCode::kInvalidArgument);

  DocBuilder empty("empty");
  empty.Add("x", "NN");
  EXPECT_EQ(CodeOf([&] { SampleMask(empty.Build(), 0.5, 1); }),
            ErrorCode::kNoMaskableMentions);
}

}  // namespace
}  // namespace maskcoref
