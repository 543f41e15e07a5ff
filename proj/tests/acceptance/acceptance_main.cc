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

// Acceptance checks. Prints one PASS, FAIL or SKIP line per criterion and
// exits non-zero if any criterion fails. An OntoNotes test directory can be
// given as the first argument or at configure time; without one the corpus
// checks are skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "maskcoref/distributions.h"
#include "maskcoref/error.h"
#include "maskcoref/evalmetrics.h"
#include "maskcoref/features.h"
#include "maskcoref/masking.h"
#include "maskcoref/pipeline.h"
#include "maskcoref/predictability.h"
#include "maskcoref/rng.h"
#include "maskcoref/scoring.h"
#include "maskcoref/shallow_scorer.h"
#include "maskcoref/stats.h"
#include "stats_sim.h"
#include "test_util.h"

#ifndef MASKCOREF_ONTONOTES_TEST_DIR
#define MASKCOREF_ONTONOTES_TEST_DIR ""
#endif

namespace maskcoref {
namespace {

namespace fs = std::filesystem;

enum class Status { kPass, kFail, kSkip };

struct Verdict {
  Status status = Status::kPass;
  std::string detail;
};

// Collects failed checks for one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  void Near(double got, double want, double tol, const std::string &what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want << " +- " << tol;
    Expect(std::abs(got - want) <= tol, s.str());
  }
  void Note(const std::string &note) { notes_ += (notes_.empty() ? "" : "; ") + note; }

  Verdict Done() const {
    if (!failed_) return {Status::kPass, notes_};
    std::string detail;
    for (const std::string &f : failures_) detail += (detail.empty() ? "" : "; ") + f;
    return {Status::kFail, detail};
  }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

double BruteForceAlignment(const Clusters &gold, const Clusters &system) {
  const bool swap = gold.size() > system.size();
  const Clusters &rows = swap ? system : gold;
  const Clusters &cols = swap ? gold : system;
  std::vector<int> perm(cols.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (size_t r = 0; r < rows.size(); ++r) total += Phi4(rows[r], cols[perm[r]]);
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Clusters RandomPartition(Rng &rng, int n) {
  Clusters blocks;
  for (int m = 0; m < n; ++m) {
    const size_t b = UniformIndex(rng, blocks.size() + 1);
    if (b == blocks.size()) blocks.emplace_back();
    blocks[b].push_back(m);
  }
  return blocks;
}

Verdict MetricOracles() {
  Checks c;
  const Clusters gold = {{0, 1, 2}, {3, 4}};
  const Clusters system = {{0, 1}, {2, 3, 4}};
  const Prf muc = MucCounts(gold, system).ToPrf();
  const Prf b3 = BCubedCounts(gold, system).ToPrf();
  const Prf ceafe = CeafeCounts(gold, system).ToPrf();
  c.Near(muc.precision, 2.0 / 3.0, 1e-9, "MUC P");
  c.Near(muc.recall, 2.0 / 3.0, 1e-9, "MUC R");
  c.Near(muc.f1, 2.0 / 3.0, 1e-9, "MUC F1");
  c.Near(b3.precision, 11.0 / 15.0, 1e-9, "B3 P");
  c.Near(b3.recall, 11.0 / 15.0, 1e-9, "B3 R");
  c.Near(ceafe.precision, 0.8, 1e-9, "CEAFe P");
  c.Near(ceafe.recall, 0.8, 1e-9, "CEAFe R");
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(UniformIndex(rng, 8));
    const Clusters g = RandomPartition(rng, n);
    const Clusters s = RandomPartition(rng, n);
    c.Near(CeafeCounts(g, s).p_num, BruteForceAlignment(g, s), 1e-9,
           "CEAFe alignment, trial " + std::to_string(trial));
  }
  c.Note("fixture + 200 enumerations");
  return c.Done();
}

Verdict DistributionInvariants() {
  Checks c;
  Rng rng(42);
  double worst_sum = 0.0, worst_shift = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 1 + static_cast<int>(UniformIndex(rng, 15));
    std::vector<int> candidates = {kNoneCandidate};
    std::vector<double> scores = {0.0};
    std::vector<int> entity = {};
    for (int i = 0; i < k; ++i) {
      candidates.push_back(i);
      scores.push_back(30.0 * (UniformUnit(rng) - 0.5));
      entity.push_back(static_cast<int>(UniformIndex(rng, 4)));
    }
    entity.push_back(0);  // the target itself
    const AntecedentDistribution d = ComputeAntecedentDistribution(k, candidates, scores);
    const EntityDistribution e = ComputeEntityDistribution(d, entity);
    double antecedent_sum = 0.0, entity_sum = 0.0;
    for (double p : d.probs) antecedent_sum += p;
    for (const auto &[id, p] : e.probs) entity_sum += p;
    worst_sum = std::max({worst_sum, std::abs(antecedent_sum - 1.0), std::abs(entity_sum - 1.0)});

    const double shift = 1000.0 * (UniformUnit(rng) - 0.5);
    std::vector<double> shifted = scores;
    for (double &s : shifted) s += shift;
    const AntecedentDistribution s = ComputeAntecedentDistribution(k, candidates, shifted);
    c.Expect(s.Argmax() == d.Argmax(), "argmax moved under shift, trial " + std::to_string(trial));
    for (size_t i = 0; i < d.probs.size(); ++i) {
      worst_shift = std::max(worst_shift, std::abs(s.probs[i] - d.probs[i]));
    }
  }
  c.Expect(worst_sum <= 1e-9, "normalization error " + std::to_string(worst_sum));
  c.Expect(worst_shift <= 1e-12, "shift error " + std::to_string(worst_shift));
  c.Note("max |sum-1| " + Fixed(worst_sum * 1e15, 2) + "e-15");
  return c.Done();
}

// Written from the constraint statement: no two coreferent mentions and at
// least `window` tokens strictly between any two mentions of a subset.
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

Verdict MaskPlanValidity() {
  Checks c;
  int subsets = 0;
  for (uint64_t seed = 0; seed < 500; ++seed) {
    testing::SyntheticOptions options;
    options.sentences = 10 + static_cast<int>(seed % 30);
    const Document doc = testing::SyntheticDocument("s" + std::to_string(seed), seed, options);
    const MaskPlan plan = PlanPartition(doc, kDefaultMaskWindow);
    std::vector<int> covered;
    for (size_t s = 0; s < plan.subsets.size(); ++s) {
      ++subsets;
      c.Expect(SubsetOk(doc, plan.subsets[s], kDefaultMaskWindow),
               "doc " + std::to_string(seed) + " subset " + std::to_string(s));
      covered.insert(covered.end(), plan.subsets[s].begin(), plan.subsets[s].end());
      for (int count : {1, 3}) {
        const MaskedVariant v = EmitMasked(doc, plan, static_cast<int>(s), count);
        c.Expect(Unmask(v, doc) == doc.tokens(), "round trip doc " + std::to_string(seed));
      }
    }
    std::sort(covered.begin(), covered.end());
    c.Expect(covered == MaskableMentions(doc), "coverage doc " + std::to_string(seed));
  }
  c.Note(std::to_string(subsets) + " subsets");
  return c.Done();
}

Verdict InformationTheory() {
  Checks c;
  auto dist = [](std::map<int, double> probs) {
    EntityDistribution d;
    d.probs = std::move(probs);
    return d;
  };
  c.Near(ComputeSurprisal(dist({{1, 1.0}}), 1).bits, 0.0, 1e-10, "surprisal P=1");
  c.Near(ComputeSurprisal(dist({{1, 0.5}, {2, 0.5}}), 1).bits, 1.0, 1e-10, "surprisal P=.5");
  c.Near(ComputeSurprisal(dist({{1, 0.25}, {2, 0.75}}), 1).bits, 2.0, 1e-10, "surprisal P=.25");
  c.Near(Entropy(dist({{3, 1.0}})), 0.0, 1e-10, "entropy point mass");
  c.Near(Entropy(dist({{0, .25}, {1, .25}, {2, .25}, {3, .25}})), 2.0, 1e-10, "entropy uniform 4");
  c.Near(Entropy(dist({{0, .5}, {1, .25}, {2, .25}})), 1.5, 1e-10, "entropy {.5,.25,.25}");
  const std::vector<double> p = {1.0, 0.0}, q = {0.5, 0.5};
  // 0.5 * KL(p || m) + 0.5 * KL(q || m), m = {.75, .25}, evaluated directly.
  const double jsd_oracle =
      0.5 * std::log2(1.0 / 0.75) + 0.5 * (0.5 * std::log2(0.5 / 0.75) + 0.5 * std::log2(2.0));
  c.Near(JensenShannon(p, q), jsd_oracle, 1e-10, "JSD {1,0} vs {.5,.5}");
  c.Near(JensenShannon(p, p), 0.0, 1e-10, "JSD p=q");
  c.Near(JensenShannon(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0, 1e-10,
         "JSD disjoint");

  Rng rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + static_cast<int>(UniformIndex(rng, 10));
    std::vector<double> w(k);
    double total = 0.0;
    for (double &x : w) total += x = UniformUnit(rng) + 1e-3;
    EntityDistribution d;
    for (int i = 0; i < k; ++i) d.probs[i] = w[i] / total;
    double expected = 0.0;
    for (const auto &[e, pr] : d.probs) expected += pr * ComputeSurprisal(d, e).bits;
    worst = std::max(worst, std::abs(Entropy(d) - expected));
  }
  c.Expect(worst <= 1e-9, "entropy identity error " + std::to_string(worst));
  return c.Done();
}

Verdict StatisticsEngine() {
  Checks c;
  const double pi = std::acos(-1.0);
  c.Near(Cdf(StandardNormalDist{}, 0.0), 0.5, 1e-10, "Phi(0)");
  c.Near(Cdf(ChiSquared{2}, 2.0), 1.0 - std::exp(-1.0), 1e-10, "ChiSq(2) at 2");
  c.Near(Cdf(StudentT{1}, 1.0), 0.5 + std::atan(1.0) / pi, 1e-10, "t(1) at 1");
  c.Near(Cdf(FisherF{2, 2}, 1.0), 0.5, 1e-10, "F(2,2) at 1");

  Rng rng(20260);
  const std::vector<std::vector<double>> truth = {{-0.4, 0.8, -0.5, 0.0, 0.3},
                                                  {0.2, -0.6, 0.4, 0.7, 0.0}};
  int within = 0, total = 0;
  double worst_gradient = 0.0;
  for (int rep = 0; rep < 300; ++rep) {
    const testing::MultinomialData data = testing::SimulateMultinomial(rng, 5000, truth);
    const MultinomialFit fit = FitMultinomial(data.x, data.y, 3, 0);
    worst_gradient = std::max(worst_gradient, fit.gradient_norm);
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 5; ++j) {
        within += std::abs(fit.coef(k, j) - truth[k][j]) < 3.0 * fit.se(k, j);
        ++total;
      }
    }
  }
  c.Expect(worst_gradient < 1e-8, "gradient norm " + std::to_string(worst_gradient));
  c.Expect(within >= total * 99 / 100,
           "recovery " + std::to_string(within) + "/" + std::to_string(total));
  c.Note("recovery " + std::to_string(within) + "/" + std::to_string(total) + " coefficients over 300 fits");

  // LR test p value at the 5% critical value of chi-squared(2), via fits
  // whose log likelihoods differ by exactly half the statistic.
  MultinomialFit a, b;
  a.loglik = 0.0;
  b.loglik = -5.991 / 2.0;
  a.coef = Eigen::MatrixXd::Zero(2, 2);
  b.coef = Eigen::MatrixXd::Zero(2, 1);
  a.n = b.n = 100;
  a.num_classes = b.num_classes = 3;
  const NestedTest lr = LrTest(a, b);
  c.Near(lr.df, 2.0, 0.0, "LR df");
  c.Near(lr.p, 0.05, 1e-4, "LR p at 5.991");

  double lr_sum = 0.0, f_sum = 0.0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    const testing::MultinomialData data =
        testing::SimulateMultinomial(rng, 300, {{0.2, 0.6, 0.0}, {-0.1, -0.4, 0.0}});
    lr_sum += LrTest(FitMultinomial(data.x, data.y, 3, 0),
                     FitMultinomial(data.x.leftCols(2), data.y, 3, 0))
                  .p;
    const int n = 200;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      x(i, 1) = StandardNormal(rng);
      x(i, 2) = StandardNormal(rng);
      y(i) = 1.0 + 0.5 * x(i, 1) + StandardNormal(rng);
    }
    f_sum += FTest(FitLinear(x, y), FitLinear(x.leftCols(2), y)).p;
  }
  c.Expect(lr_sum / reps >= 0.42 && lr_sum / reps <= 0.58, "null LR mean p " + Fixed(lr_sum / reps));
  c.Expect(f_sum / reps >= 0.42 && f_sum / reps <= 0.58, "null F mean p " + Fixed(f_sum / reps));
  c.Note("null mean p LR " + Fixed(lr_sum / reps, 3) + " F " + Fixed(f_sum / reps, 3));
  return c.Done();
}

Corpus NearestCorpus(int first, int count) {
  std::vector<Document> docs;
  for (int i = first; i < first + count; ++i) {
    docs.push_back(testing::NearestAntecedentDocument("n" + std::to_string(i), i));
  }
  return Corpus(std::move(docs));
}

Verdict ShallowScorerSanity() {
  Checks c;
  // Gradient against central differences at a generic point.
  std::vector<TrainingExample> examples;
  const Corpus small = NearestCorpus(0, 3);
  for (const Document &doc : small.documents()) {
    const SyntaxIndex syntax(doc);
    std::vector<int> targets(doc.num_mentions());
    std::iota(targets.begin(), targets.end(), 0);
    for (TrainingExample &e : BuildTrainingExamples(doc, syntax, MaskView::None(doc), targets)) {
      examples.push_back(std::move(e));
    }
  }
  ShallowWeights w(kNumShallowWeights);
  for (int i = 0; i < kNumShallowWeights; ++i) w(i) = 0.1 * std::sin(1.0 + i);
  const ShallowWeights g = ShallowGradient(examples, w, 1e-2);
  double worst = 0.0;
  for (int i = 0; i < kNumShallowWeights; ++i) {
    ShallowWeights up = w, down = w;
    up(i) += 1e-5;
    down(i) -= 1e-5;
    const double fd =
        (ShallowObjective(examples, up, 1e-2) - ShallowObjective(examples, down, 1e-2)) / 2e-5;
    worst = std::max(worst, std::abs(g(i) - fd) / std::max(1e-6, std::abs(fd)));
  }
  c.Expect(worst < 1e-4, "finite-difference relative error " + std::to_string(worst));

  ShallowTrainConfig config;
  config.seed = 5;
  const ShallowTrainResult trained = TrainShallowScorer(NearestCorpus(0, 20), config);
  LoadedScorer loaded;
  loaded.scorer = std::make_unique<ShallowScorer>(trained.weights);
  RunConfig run;
  run.seed = 5;
  AntecedentEval eval;
  const Corpus held_out = NearestCorpus(1000, 20);
  for (const Document &doc : held_out.documents()) {
    eval += ProcessDocument(doc, loaded, run).eval;
  }
  const double masked = eval.masked.overall.ToPrf().precision;
  const double unmasked = eval.unmasked.overall.ToPrf().precision;
  c.Expect(masked >= 0.99, "held-out masked precision " + Fixed(masked));
  c.Expect(unmasked >= 0.99, "held-out unmasked precision " + Fixed(unmasked));
  c.Note("held-out precision masked " + Fixed(masked, 3) + " unmasked " + Fixed(unmasked, 3));
  return c.Done();
}

// ---------------------------------------------------------------------------
// OntoNotes checks.

Corpus LoadOntoNotes(const std::string &dir) {
  std::vector<std::string> files;
  for (const fs::directory_entry &e : fs::recursive_directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 11 &&
        name.compare(name.size() - 11, 11, "_gold_conll") == 0) {
      files.push_back(e.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::kIo, "no *_gold_conll files under " + dir);
  return LoadCorpus(files);
}

double MaskedF1(const Corpus &corpus, const std::string &scorer, uint64_t seed) {
  RunConfig config;
  config.seed = seed;
  config.iterations = 1;
  const LoadedScorer loaded = LoadScorer(ScorerSpec::Parse(scorer), corpus, true, seed);
  AntecedentEval eval;
  for (const Document &doc : corpus.documents()) eval += ProcessDocument(doc, loaded, config).eval;
  return eval.masked.overall.ToPrf().f1;
}

Verdict OntoNotesBaselines(const Corpus *corpus) {
  if (corpus == nullptr) return {Status::kSkip, "no OntoNotes test directory given"};
  Checks c;
  const double previous = MaskedF1(*corpus, "baseline:previous", 0);
  const double none = MaskedF1(*corpus, "baseline:none", 0);
  double random = 0.0;
  for (uint64_t seed = 1; seed <= 10; ++seed) random += MaskedF1(*corpus, "baseline:random", seed);
  random /= 10.0;
  c.Near(previous, 0.23, 0.01, "previous-mention F1");
  c.Near(none, 0.26, 0.01, "no-antecedent F1");
  c.Near(random, 0.08, 0.01, "random F1 (10 seeds)");
  c.Note("previous " + Fixed(previous, 3) + " none " + Fixed(none, 3) + " random " +
         Fixed(random, 3));
  return c.Done();
}

Verdict OntoNotesAnalysisCounts(const Corpus *corpus) {
  if (corpus == nullptr) return {Status::kSkip, "no OntoNotes test directory given"};
  RunConfig config;
  config.seed = 0;
  config.iterations = 1;
  const LoadedScorer loaded = LoadScorer(ScorerSpec::Parse("baseline:previous"), *corpus, true, 0);
  std::vector<PredictabilityRecord> records;
  for (const Document &doc : corpus->documents()) {
    const DocumentResult r = ProcessDocument(doc, loaded, config);
    records.insert(records.end(), r.records.begin(), r.records.end());
  }
  const AnalysisSet set = FilterAnalysisSet(*corpus, records);
  std::map<CoarseType, int> by_type;
  for (const FeatureRow &row : set.rows) ++by_type[row.outcome_type];
  Checks c;
  const int rows = static_cast<int>(set.rows.size());
  c.Expect(rows == 9758, "rows " + std::to_string(rows) + " want 9758");
  c.Expect(by_type[CoarseType::kPronoun] == 4281,
           "pronouns " + std::to_string(by_type[CoarseType::kPronoun]) + " want 4281");
  c.Expect(by_type[CoarseType::kProperName] == 2213,
           "proper names " + std::to_string(by_type[CoarseType::kProperName]) + " want 2213");
  c.Expect(by_type[CoarseType::kFullNP] == 3264,
           "full NPs " + std::to_string(by_type[CoarseType::kFullNP]) + " want 3264");
  Verdict out = c.Done();
  if (out.status == Status::kFail) {
    // Diagnostic breakdown by exclusion reason.
    std::string diff = " | excluded:";
    for (const auto &[reason, n] : set.excluded) {
      diff += " " + std::string(ExclusionReasonName(reason)) + "=" + std::to_string(n);
    }
    out.detail += diff;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace maskcoref

int main(int argc, char **argv) {
  using namespace maskcoref;
  std::string ontonotes = argc > 1 ? argv[1] : MASKCOREF_ONTONOTES_TEST_DIR;
  std::unique_ptr<Corpus> corpus;
  std::string load_error;
  if (!ontonotes.empty()) {
    try {
      corpus = std::make_unique<Corpus>(LoadOntoNotes(ontonotes));
    } catch (const std::exception &e) {
      load_error = e.what();
    }
  }
  auto conditional = [&](Verdict (*fn)(const Corpus *)) {
    return [&, fn]() -> Verdict {
      if (!load_error.empty()) return {Status::kFail, "cannot load OntoNotes: " + load_error};
      return fn(corpus.get());
    };
  };

  const std::vector<Criterion> criteria = {
      {"metric-oracles", 5, MetricOracles},
      {"distribution-invariants", 10, DistributionInvariants},
      {"mask-plan-validity", 30, MaskPlanValidity},
      {"information-theory", 0, InformationTheory},
      {"statistics-engine", 180, StatisticsEngine},
      {"shallow-scorer-sanity", 120, ShallowScorerSanity},
      {"ontonotes-baselines", 0, conditional(OntoNotesBaselines)},
      {"ontonotes-analysis-counts", 0, conditional(OntoNotesAnalysisCounts)},
  };

  int failed = 0;
  for (const Criterion &criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict out;
    try {
      out = criterion.run();
    } catch (const std::exception &e) {
      out = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.status != Status::kSkip && criterion.budget_seconds > 0 &&
        seconds > criterion.budget_seconds) {
      out.status = Status::kFail;
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("over time budget of ") +
                    std::to_string(static_cast<int>(criterion.budget_seconds)) + " s";
    }
    const char *tag = out.status == Status::kPass   ? "PASS"
                      : out.status == Status::kFail ? "FAIL"
                                                    : "SKIP";
    failed += out.status == Status::kFail;
    std::printf("%s %-26s %7.2fs  %s\n", tag, criterion.name.c_str(), seconds,
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
