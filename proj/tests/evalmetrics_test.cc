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

#include "maskcoref/evalmetrics.h"

#include <algorithm>

#include <gtest/gtest.h>

#include "maskcoref/rng.h"
#include "maskcoref/scoring.h"
#include "test_util.h"

namespace maskcoref {
namespace {

using testing::DocBuilder;

// a..e are 0..4.
const Clusters kGold = {{0, 1, 2}, {3, 4}};
const Clusters kSystem = {{0, 1}, {2, 3, 4}};

TEST(MucTest, Fixture) {
  const Prf prf = MucCounts(kGold, kSystem).ToPrf();
  EXPECT_NEAR(prf.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(prf.recall, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(prf.f1, 2.0 / 3.0, 1e-12);
  const Prf same = MucCounts(kGold, kGold).ToPrf();
  EXPECT_EQ(same.f1, 1.0);
  EXPECT_EQ(MucCounts({{0, 1}}, {{0}, {1}}).ToPrf().recall, 0.0);
}

TEST(BCubedTest, Fixture) {
  const Prf prf = BCubedCounts(kGold, kSystem).ToPrf();
  EXPECT_NEAR(prf.precision, 11.0 / 15.0, 1e-12);
  EXPECT_NEAR(prf.recall, 11.0 / 15.0, 1e-12);
  EXPECT_EQ(BCubedCounts(kGold, kGold).ToPrf().f1, 1.0);
  const Prf split = BCubedCounts({{0, 1, 2, 3}}, {{0}, {1}, {2}, {3}}).ToPrf();
  EXPECT_NEAR(split.recall, 0.25, 1e-12);
  EXPECT_NEAR(split.precision, 1.0, 1e-12);
}

TEST(CeafeTest, Fixture) {
  const MetricCounts counts = CeafeCounts(kGold, kSystem);
  EXPECT_NEAR(counts.p_num, 1.6, 1e-12);
  const Prf prf = counts.ToPrf();
  EXPECT_NEAR(prf.precision, 0.8, 1e-12);
  EXPECT_NEAR(prf.recall, 0.8, 1e-12);
  EXPECT_EQ(CeafeCounts(kGold, kGold).ToPrf().f1, 1.0);
  const Prf disjoint = CeafeCounts({{0, 1}}, {{5, 6}}).ToPrf();
  EXPECT_EQ(disjoint.precision, 0.0);
  EXPECT_EQ(disjoint.recall, 0.0);
  EXPECT_EQ(disjoint.f1, 0.0);
}

// Best total similarity over all injective maps from the smaller side.
double BruteForceAlignment(const Clusters &gold, const Clusters &system) {
  const bool swap = gold.size() > system.size();
  const Clusters &rows = swap ? system : gold;
  const Clusters &cols = swap ? gold : system;
  std::vector<int> perm(cols.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  double best = 0.0;
  do {
    double total = 0.0;
    for (size_t r = 0; r < rows.size(); ++r) total += Phi4(rows[r], cols[perm[r]]);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Clusters RandomPartition(Rng &rng, int n) {
  std::vector<std::vector<int>> blocks;
  for (int m = 0; m < n; ++m) {
    const size_t b = UniformIndex(rng, blocks.size() + 1);
    if (b == blocks.size()) blocks.emplace_back();
    blocks[b].push_back(m);
  }
  return blocks;
}

TEST(CeafeTest, MatchesExhaustiveAlignment) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(UniformIndex(rng, 8));
    const Clusters gold = RandomPartition(rng, n);
    const Clusters system = RandomPartition(rng, n);
    EXPECT_NEAR(CeafeCounts(gold, system).p_num, BruteForceAlignment(gold, system), 1e-9);
  }
}

TEST(AssignmentTest, Rectangular) {
  const std::vector<std::vector<double>> sim = {{1, 5}, {4, 1}, {3, 3}};
  const std::vector<int> a = MaxWeightAssignment(sim);
  EXPECT_EQ(a, (std::vector<int>{1, 0, -1}));
}

TEST(ClusterTest, ScoresAverage) {
  const ClusterScores s = ScoreClusters(CountClusters(kGold, kSystem));
  EXPECT_NEAR(s.conll.f1, (s.muc.f1 + s.b3.f1 + s.ceafe.f1) / 3.0, 1e-15);
}

TEST(ClusterTest, FromAntecedents) {
  // 0 <- 1 <- 3, 2 alone, 4 <- 5.
  const std::vector<int> antecedent = {kNoneCandidate, 0, kNoneCandidate, 1, kNoneCandidate, 4};
  EXPECT_EQ(ClustersFromAntecedents(antecedent), (Clusters{{0, 1, 3}, {4, 5}}));
  EXPECT_EQ(GoldClusters(testing::PairDocument()), (Clusters{{1, 2, 3}}));
}

Document Chain3() {
  DocBuilder b("c3");
  b.Add("Ana", "NNP");
  b.Add("met", "VBD");
  b.Add("her", "PRP");
  b.Add("and", "CC");
  b.Add("she", "PRP");
  b.Mention(0, 0, 0);
  b.Mention(2, 2, 0);
  b.Mention(4, 4, 0);
  return b.Build();
}

AntecedentDistribution PointMass(int target, const std::vector<int> &candidates, int pick) {
  AntecedentDistribution d;
  d.target = target;
  d.support = candidates;
  for (int c : candidates) d.probs.push_back(c == pick ? 1.0 : 0.0);
  return d;
}

TEST(AntecedentTest, ChainCriterion) {
  const Document doc = Chain3();
  const MaskView none = MaskView::None(doc);
  AntecedentEval eval;
  const std::vector<int> c1 = CandidateSet(doc, 1, none);
  const std::vector<int> c2 = CandidateSet(doc, 2, none);
  const AntecedentDistribution p1 = PointMass(1, c1, 0);
  const AntecedentDistribution p2 = PointMass(2, c2, kNoneCandidate);
  TallyPrediction(doc, none, 1, &p1, eval);
  TallyPrediction(doc, none, 2, &p2, eval);
  EXPECT_EQ(eval.unmasked.overall.correct, 1);
  EXPECT_EQ(eval.unmasked.overall.predicted, 2);
  EXPECT_NEAR(eval.unmasked.overall.ToPrf().precision, 0.5, 1e-15);
  EXPECT_TRUE(IsCorrectAntecedent(doc, none, 2, 0));
  EXPECT_TRUE(IsCorrectAntecedent(doc, none, 2, 1));
}

TEST(AntecedentTest, FirstMentionOfEntityPredictedNone) {
  const Document doc = testing::PairDocument();
  const MaskView none = MaskView::None(doc);
  EXPECT_TRUE(IsCorrectAntecedent(doc, none, 1, kNoneCandidate));
  EXPECT_FALSE(IsCorrectAntecedent(doc, none, 1, 0));
  EXPECT_FALSE(IsEvaluated(none, 0));
  EXPECT_TRUE(IsEvaluated(none, 1));
  // Masking the only antecedent makes none correct.
  const std::vector<int> masked = {1};
  const MaskView view = MaskView::FromMasked(doc, masked);
  EXPECT_FALSE(IsCorrectAntecedent(doc, none, 2, kNoneCandidate));
  EXPECT_TRUE(IsCorrectAntecedent(doc, view, 2, kNoneCandidate));
}

TEST(AntecedentTest, MissingPredictionCountsAgainstRecall) {
  const Document doc = Chain3();
  const MaskView none = MaskView::None(doc);
  AntecedentEval eval;
  const AntecedentDistribution p1 = PointMass(1, CandidateSet(doc, 1, none), 0);
  TallyPrediction(doc, none, 1, &p1, eval);
  TallyPrediction(doc, none, 2, nullptr, eval);
  const Prf prf = eval.unmasked.overall.ToPrf();
  EXPECT_EQ(prf.precision, 1.0);
  EXPECT_EQ(prf.recall, 0.5);
  EXPECT_EQ(eval.unmasked.coarse[static_cast<int>(CoarseType::kPronoun)].gold, 2);
  EXPECT_EQ(eval.unmasked.fine[static_cast<int>(FineType::kPron3)].correct, 1);
}

TEST(AntecedentTest, MeanOfRuns) {
  GroupPrf a, b;
  a.overall = {0.5, 0.5, 0.5, false};
  b.overall = {1.0, 0.0, 0.0, true};
  const std::vector<GroupPrf> runs = {a, b};
  const GroupPrf mean = MeanGroupPrf(runs);
  EXPECT_EQ(mean.overall.precision, 0.75);
  EXPECT_EQ(mean.overall.recall, 0.25);
  EXPECT_TRUE(mean.overall.degenerate);
  const std::vector<GroupPrf> same = {a, a, a};
  EXPECT_EQ(MeanGroupPrf(same).overall.f1, 0.5);
}

TEST(AntecedentTest, DegenerateRatio) {
  const Prf prf = Tally{}.ToPrf();
  EXPECT_TRUE(prf.degenerate);
  EXPECT_EQ(prf.f1, 0.0);
}

}  // namespace
}  // namespace maskcoref
