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

// A log-linear antecedent scorer over a handful of pair features. It stands in
// for a neural mention-pair model so the whole pipeline can run offline:
// s_a(x, y) = w . f(x, y), the dummy antecedent scores 0.

#ifndef MASKCOREF_SHALLOW_SCORER_H_
#define MASKCOREF_SHALLOW_SCORER_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "maskcoref/corpus.h"
#include "maskcoref/features.h"
#include "maskcoref/scoring.h"

namespace maskcoref {

// Bucket of a non-negative distance: 0, 1, 2, 3, 4-7, 8-15, 16+.
int DistanceBucket(int distance);
inline constexpr int kNumDistanceBuckets = 7;

// Compact pair features; see ShallowFeatureNames for the weight layout.
struct PairFeatures {
  uint8_t sentence_bucket = 0;
  uint8_t mention_bucket = 0;  // of (target - candidate - 1)
  uint8_t candidate_type = 0;  // CoarseType
  bool candidate_subject = false;
  bool target_masked = false;
  bool head_match = false;     // only set for unmasked targets
  float log_frequency = 0.0f;  // log1p(visible earlier mentions of the entity)
};

inline constexpr int kNumShallowWeights = 1 + 2 * kNumDistanceBuckets + 3 + 4;
std::vector<std::string> ShallowFeatureNames();

using ShallowWeights = Eigen::VectorXd;

double PairScoreOf(const ShallowWeights &w, const PairFeatures &f);
// Adds `scale * f` to `out`.
void AccumulateFeatures(const PairFeatures &f, double scale, ShallowWeights &out);

// Features of every real candidate of a target; `syntax` may be null.
std::vector<PairFeatures> ExtractPairFeatures(const Document &doc,
                                              const SyntaxIndex *syntax,
                                              const MaskView &view, int target,
                                              std::span<const int> candidates);

// One training target: its real candidates and which of them (plus the dummy)
// are correct.
struct TrainingExample {
  std::vector<PairFeatures> candidates;
  std::vector<bool> gold;  // parallel to candidates
  bool none_gold = false;
};

// Targets of one document variant. A target with no visible true antecedent
// has the dummy as its only correct answer.
std::vector<TrainingExample> BuildTrainingExamples(const Document &doc,
                                                   const SyntaxIndex &syntax,
                                                   const MaskView &view,
                                                   std::span<const int> targets);

struct ShallowTrainConfig {
  double learning_rate = 1.0;  // initial line-search step
  double l2 = 1e-4;
  int max_epochs = 200;
  double tolerance = 1e-6;     // on the gradient norm of the mean objective
  uint64_t seed = 0;
  // Masked training targets come from this many random mask samples per
  // document at this fraction.
  double mask_fraction = 0.15;
  int mask_samples = 3;
};

// Mean marginal log-likelihood of the correct answers minus (l2 / 2) |w|^2.
double ShallowObjective(std::span<const TrainingExample> examples,
                        const ShallowWeights &w, double l2);
ShallowWeights ShallowGradient(std::span<const TrainingExample> examples,
                               const ShallowWeights &w, double l2);

struct ShallowTrainResult {
  ShallowWeights weights;
  bool converged = false;
  int epochs = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  std::vector<double> objective_trace;  // after each accepted step
  int num_examples = 0;
};

// Full-batch gradient ascent with backtracking from zero weights. Stopping at
// max_epochs returns the best weights with converged = false.
ShallowTrainResult TrainShallowScorer(std::span<const TrainingExample> examples,
                                      const ShallowTrainConfig &config);
// Builds examples from every unmasked target plus sampled masked targets.
ShallowTrainResult TrainShallowScorer(const Corpus &corpus,
                                      const ShallowTrainConfig &config);

class ShallowScorer : public AntecedentScorer {
 public:
  explicit ShallowScorer(ShallowWeights weights);

  std::string Name() const override { return "shallow"; }
  AntecedentDistribution Score(const ScoringContext &context, int target,
                               std::span<const int> candidates) const override;
  const ShallowWeights &weights() const { return weights_; }

 private:
  ShallowWeights weights_;
};

std::string ShallowWeightsToJson(const ShallowTrainResult &result, int indent = 2);
// Throws SchemaViolation.
ShallowWeights ShallowWeightsFromJson(std::string_view text);

}  // namespace maskcoref

#endif  // MASKCOREF_SHALLOW_SCORER_H_
