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

#include "maskcoref/shallow_scorer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "json_internal.h"
#include "maskcoref/error.h"
#include "maskcoref/masking.h"
#include "text_util.h"

namespace maskcoref {

using nlohmann::json;

namespace {

// Weight layout.
constexpr int kBias = 0;
constexpr int kSentenceBase = 1;
constexpr int kMentionBase = kSentenceBase + kNumDistanceBuckets;
constexpr int kTypeBase = kMentionBase + kNumDistanceBuckets;
constexpr int kSubject = kTypeBase + 3;
constexpr int kTargetMasked = kSubject + 1;
constexpr int kHeadMatch = kTargetMasked + 1;
constexpr int kLogFrequency = kHeadMatch + 1;
static_assert(kLogFrequency + 1 == kNumShallowWeights);

std::string HeadWord(const Document &doc, int mention) {
  const Mention &m = doc.mention(mention);
  const int head = HeadToken(doc.tokens(), m.start, m.end);
  return internal::Lowercase(doc.tokens()[head].surface);
}

// Log of sum(exp(s)) over the entries with mask set, -inf when none.
double LogSumExp(const std::vector<double> &s, const std::vector<bool> *mask) {
  double max = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < s.size(); ++i) {
    if (mask == nullptr || (*mask)[i]) max = std::max(max, s[i]);
  }
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (mask == nullptr || (*mask)[i]) sum += std::exp(s[i] - max);
  }
  return max + std::log(sum);
}

// Scores with the dummy at position 0, and the correct-answer mask in the
// same layout.
void ExampleScores(const TrainingExample &ex, const ShallowWeights &w,
                   std::vector<double> &scores, std::vector<bool> &gold) {
  scores.assign(1, 0.0);
  gold.assign(1, ex.none_gold);
  for (size_t i = 0; i < ex.candidates.size(); ++i) {
    scores.push_back(PairScoreOf(w, ex.candidates[i]));
    gold.push_back(ex.gold[i]);
  }
}

}  // namespace

int DistanceBucket(int distance) {
  if (distance <= 3) return std::max(distance, 0);
  if (distance <= 7) return 4;
  if (distance <= 15) return 5;
  return 6;
}

std::vector<std::string> ShallowFeatureNames() {
  std::vector<std::string> names = {"bias"};
  const char *buckets[] = {"0", "1", "2", "3", "4-7", "8-15", "16+"};
  for (const char *b : buckets) names.push_back(std::string("sentence_distance:") + b);
  for (const char *b : buckets) names.push_back(std::string("mention_distance:") + b);
  for (int t = 0; t < kNumCoarseTypes; ++t) {
    names.push_back("candidate_type:" +
                    std::string(CoarseTypeName(static_cast<CoarseType>(t))));
  }
  names.push_back("candidate_subject");
  names.push_back("target_masked");
  names.push_back("head_match");
  names.push_back("candidate_log_frequency");
  return names;
}

double PairScoreOf(const ShallowWeights &w, const PairFeatures &f) {
  double s = w[kBias] + w[kSentenceBase + f.sentence_bucket] +
             w[kMentionBase + f.mention_bucket] + w[kTypeBase + f.candidate_type] +
             w[kLogFrequency] * f.log_frequency;
  if (f.candidate_subject) s += w[kSubject];
  if (f.target_masked) s += w[kTargetMasked];
  if (f.head_match) s += w[kHeadMatch];
  return s;
}

void AccumulateFeatures(const PairFeatures &f, double scale, ShallowWeights &out) {
  out[kBias] += scale;
  out[kSentenceBase + f.sentence_bucket] += scale;
  out[kMentionBase + f.mention_bucket] += scale;
  out[kTypeBase + f.candidate_type] += scale;
  out[kLogFrequency] += scale * f.log_frequency;
  if (f.candidate_subject) out[kSubject] += scale;
  if (f.target_masked) out[kTargetMasked] += scale;
  if (f.head_match) out[kHeadMatch] += scale;
}

std::vector<PairFeatures> ExtractPairFeatures(const Document &doc,
                                              const SyntaxIndex *syntax,
                                              const MaskView &view, int target,
                                              std::span<const int> candidates) {
  const bool masked = view.is_masked(target);
  const std::string target_head = masked ? "" : HeadWord(doc, target);
  // Visible mentions of each entity before the target, in order.
  std::map<int, int> seen;
  std::vector<int> visible_before(doc.num_mentions(), 0);
  for (int i = 0; i < target; ++i) {
    visible_before[i] = seen[doc.mention(i).entity_id];
    if (!view.is_hidden(i)) ++seen[doc.mention(i).entity_id];
  }

  std::vector<PairFeatures> features;
  for (int c : candidates) {
    if (c == kNoneCandidate) continue;
    const Mention &m = doc.mention(c);
    PairFeatures f;
    f.sentence_bucket = static_cast<uint8_t>(
        DistanceBucket(doc.sentence_of_mention(target) - doc.sentence_of_mention(c)));
    f.mention_bucket = static_cast<uint8_t>(DistanceBucket(target - c - 1));
    f.candidate_type = static_cast<uint8_t>(m.coarse_type);
    f.candidate_subject = syntax != nullptr && syntax->IsSubject(c);
    f.target_masked = masked;
    f.head_match = !masked && HeadWord(doc, c) == target_head;
    f.log_frequency = static_cast<float>(std::log1p(visible_before[c]));
    features.push_back(f);
  }
  return features;
}

std::vector<TrainingExample> BuildTrainingExamples(const Document &doc,
                                                   const SyntaxIndex &syntax,
                                                   const MaskView &view,
                                                   std::span<const int> targets) {
  std::vector<TrainingExample> examples;
  for (int target : targets) {
    if (view.is_hidden(target) && !view.is_masked(target)) continue;
    std::vector<int> candidates = CandidateSet(doc, target, view);
    TrainingExample ex;
    ex.candidates = ExtractPairFeatures(doc, &syntax, view, target, candidates);
    bool any = false;
    for (int c : candidates) {
      if (c == kNoneCandidate) continue;
      const bool gold = doc.mention(c).entity_id == doc.mention(target).entity_id;
      ex.gold.push_back(gold);
      any = any || gold;
    }
    ex.none_gold = !any;
    examples.push_back(std::move(ex));
  }
  return examples;
}

double ShallowObjective(std::span<const TrainingExample> examples,
                        const ShallowWeights &w, double l2) {
  if (examples.empty()) return -0.5 * l2 * w.squaredNorm();
  double total = 0.0;
  std::vector<double> scores;
  std::vector<bool> gold;
  for (const TrainingExample &ex : examples) {
    ExampleScores(ex, w, scores, gold);
    total += LogSumExp(scores, &gold) - LogSumExp(scores, nullptr);
  }
  return total / static_cast<double>(examples.size()) - 0.5 * l2 * w.squaredNorm();
}

ShallowWeights ShallowGradient(std::span<const TrainingExample> examples,
                               const ShallowWeights &w, double l2) {
  ShallowWeights grad = ShallowWeights::Zero(w.size());
  std::vector<double> scores;
  std::vector<bool> gold;
  for (const TrainingExample &ex : examples) {
    ExampleScores(ex, w, scores, gold);
    const double log_all = LogSumExp(scores, nullptr);
    const double log_gold = LogSumExp(scores, &gold);
    // d/dw = E_gold[f] - E_all[f]; the dummy has no features.
    for (size_t i = 0; i < ex.candidates.size(); ++i) {
      const double s = scores[i + 1];
      double coef = -std::exp(s - log_all);
      if (ex.gold[i]) coef += std::exp(s - log_gold);
      AccumulateFeatures(ex.candidates[i], coef, grad);
    }
  }
  if (!examples.empty()) grad /= static_cast<double>(examples.size());
  grad -= l2 * w;
  return grad;
}

ShallowTrainResult TrainShallowScorer(std::span<const TrainingExample> examples,
                                      const ShallowTrainConfig &config) {
  ShallowTrainResult result;
  result.num_examples = static_cast<int>(examples.size());
  ShallowWeights w = ShallowWeights::Zero(kNumShallowWeights);
  double objective = ShallowObjective(examples, w, config.l2);
  ShallowWeights grad = ShallowGradient(examples, w, config.l2);
  double step = config.learning_rate;
  int epoch = 0;
  bool converged = grad.norm() < config.tolerance;
  while (!converged && epoch < config.max_epochs) {
    ++epoch;
    const double slope = grad.squaredNorm();
    bool accepted = false;
    while (step > 1e-14) {
      ShallowWeights next = w + step * grad;
      const double next_objective = ShallowObjective(examples, next, config.l2);
      if (next_objective >= objective + 1e-4 * step * slope) {
        w = std::move(next);
        objective = next_objective;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent direction left at machine precision
    result.objective_trace.push_back(objective);
    grad = ShallowGradient(examples, w, config.l2);
    converged = grad.norm() < config.tolerance;
    step *= 2.0;
  }
  result.weights = w;
  result.converged = converged;
  result.epochs = epoch;
  result.objective = objective;
  result.gradient_norm = grad.norm();
  return result;
}

ShallowTrainResult TrainShallowScorer(const Corpus &corpus,
                                      const ShallowTrainConfig &config) {
  std::vector<TrainingExample> examples;
  for (const Document &doc : corpus.documents()) {
    SyntaxIndex syntax(doc);
    std::vector<int> all(doc.num_mentions());
    for (int i = 0; i < doc.num_mentions(); ++i) all[i] = i;
    for (TrainingExample &ex :
         BuildTrainingExamples(doc, syntax, MaskView::None(doc), all)) {
      examples.push_back(std::move(ex));
    }
    if (config.mask_samples <= 0 || MaskableMentions(doc).empty()) continue;
    for (const std::vector<int> &sample :
         SampleMask(doc, config.mask_fraction, config.seed, config.mask_samples)) {
      MaskView view = MaskView::FromMasked(doc, sample);
      for (TrainingExample &ex : BuildTrainingExamples(doc, syntax, view, sample)) {
        examples.push_back(std::move(ex));
      }
    }
  }
  return TrainShallowScorer(examples, config);
}

ShallowScorer::ShallowScorer(ShallowWeights weights) : weights_(std::move(weights)) {
  if (weights_.size() != kNumShallowWeights || !weights_.allFinite()) {
    throw Error(ErrorCode::kSchemaViolation,
                "shallow scorer needs " + std::to_string(kNumShallowWeights) +
                    " finite weights");
  }
}

AntecedentDistribution ShallowScorer::Score(const ScoringContext &context,
                                            int target,
                                            std::span<const int> candidates) const {
  const Document &doc = *context.doc;
  const MaskView none = MaskView::None(doc);
  const MaskView &view = context.view != nullptr ? *context.view : none;
  std::vector<PairFeatures> features =
      ExtractPairFeatures(doc, context.syntax, view, target, candidates);
  std::vector<double> scores;
  size_t k = 0;
  for (int c : candidates) {
    scores.push_back(c == kNoneCandidate ? 0.0 : PairScoreOf(weights_, features[k++]));
  }
  return ComputeAntecedentDistribution(target, candidates, scores);
}

std::string ShallowWeightsToJson(const ShallowTrainResult &result, int indent) {
  json weights = json::object();
  const std::vector<std::string> names = ShallowFeatureNames();
  std::vector<double> values(result.weights.data(),
                             result.weights.data() + result.weights.size());
  json value = {{"format", "maskcoref-shallow-weights"},
                {"version", 1},
                {"feature_names", names},
                {"weights", values},
                {"converged", result.converged},
                {"epochs", result.epochs},
                {"objective", result.objective},
                {"gradient_norm", result.gradient_norm},
                {"num_examples", result.num_examples}};
  return value.dump(indent);
}

ShallowWeights ShallowWeightsFromJson(std::string_view text) {
  json value = internal::ParseJson(text, "shallow weights");
  try {
    if (value.at("format").get<std::string>() != "maskcoref-shallow-weights" ||
        value.at("feature_names").get<std::vector<std::string>>() !=
            ShallowFeatureNames()) {
      throw Error(ErrorCode::kSchemaViolation,
                  "shallow weights: unexpected format or feature layout");
    }
    std::vector<double> values = value.at("weights").get<std::vector<double>>();
    return Eigen::Map<ShallowWeights>(values.data(),
                                      static_cast<Eigen::Index>(values.size()));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string("shallow weights: ") + e.what());
  }
}

}  // namespace maskcoref
