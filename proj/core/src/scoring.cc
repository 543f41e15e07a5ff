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

#include "maskcoref/scoring.h"

#include <algorithm>
#include <cmath>

#include "maskcoref/error.h"
#include "maskcoref/rng.h"
#include "text_util.h"

namespace maskcoref {

double TotalScore(const PairScore &pair, bool gold_boundaries) {
  if (pair.candidate == kNoneCandidate) return 0.0;
  if (gold_boundaries) return pair.s_a;
  if (!pair.s_m_target.has_value() || !pair.s_m_candidate.has_value()) {
    throw Error(ErrorCode::kSchemaViolation,
                "mention scores are required with predicted boundaries (target " +
                    std::to_string(pair.target) + ")");
  }
  return *pair.s_m_target + *pair.s_m_candidate + pair.s_a;
}

double AntecedentDistribution::Prob(int candidate) const {
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] == candidate) return probs[i];
  }
  return 0.0;
}

int AntecedentDistribution::Argmax() const {
  const double best = *std::max_element(probs.begin(), probs.end());
  if (tie_break.has_value() && probs[*tie_break] == best) {
    return support[*tie_break];
  }
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == best) return support[i];
  }
  return kNoneCandidate;
}

AntecedentDistribution ComputeAntecedentDistribution(
    int target, std::span<const int> candidates, std::span<const double> scores) {
  if (candidates.empty() || candidates.size() != scores.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "candidate and score lists must be non-empty and parallel");
  }
  double max_score = -INFINITY;
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFiniteScore,
                  "non-finite score for target " + std::to_string(target));
    }
    max_score = std::max(max_score, s);
  }
  AntecedentDistribution dist;
  dist.target = target;
  dist.support.assign(candidates.begin(), candidates.end());
  dist.probs.resize(scores.size());
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    dist.probs[i] = std::exp(scores[i] - max_score);
    total += dist.probs[i];
  }
  for (double &p : dist.probs) p /= total;
  return dist;
}

AntecedentDistribution AntecedentDistributionFromPairs(
    int target, std::span<const PairScore> pairs, bool gold_boundaries) {
  std::vector<int> candidates = {kNoneCandidate};
  std::vector<double> scores = {0.0};
  for (const PairScore &pair : pairs) {
    if (pair.candidate == kNoneCandidate) continue;
    candidates.push_back(pair.candidate);
    scores.push_back(TotalScore(pair, gold_boundaries));
  }
  return ComputeAntecedentDistribution(target, candidates, scores);
}

double EntityDistribution::Prob(int entity) const {
  auto it = probs.find(entity);
  return it == probs.end() ? 0.0 : it->second;
}

int EntityDistribution::Top() const {
  int best = kNewEntity;
  double best_prob = -1.0;
  for (const auto &[entity, p] : probs) {
    if (p > best_prob) {
      best = entity;
      best_prob = p;
    }
  }
  return best;
}

EntityDistribution ComputeEntityDistribution(
    const AntecedentDistribution &dist, std::span<const int> entity_of_mention) {
  EntityDistribution out;
  out.target = dist.target;
  out.probs[kNewEntity] = 0.0;
  for (size_t i = 0; i < dist.support.size(); ++i) {
    int candidate = dist.support[i];
    if (candidate == kNoneCandidate) {
      out.probs[kNewEntity] += dist.probs[i];
      continue;
    }
    if (candidate < 0 || candidate >= static_cast<int>(entity_of_mention.size())) {
      throw Error(ErrorCode::kUnknownEntity,
                  "candidate mention " + std::to_string(candidate) +
                      " has no entity id");
    }
    out.probs[entity_of_mention[candidate]] += dist.probs[i];
  }
  return out;
}

EntityDistribution ComputeEntityDistribution(const AntecedentDistribution &dist,
                                             const Document &doc) {
  std::vector<int> entities(doc.num_mentions());
  for (int i = 0; i < doc.num_mentions(); ++i) {
    entities[i] = doc.mention(i).entity_id;
  }
  return ComputeEntityDistribution(dist, entities);
}

MaskView MaskView::None(const Document &doc) {
  MaskView view;
  view.masked.assign(doc.num_mentions(), false);
  view.hidden.assign(doc.num_mentions(), false);
  return view;
}

MaskView MaskView::FromMasked(const Document &doc, std::span<const int> masked) {
  MaskView view = None(doc);
  for (int m : masked) {
    view.masked[m] = true;
    view.hidden[m] = true;
  }
  for (int m : masked) {
    const Mention &outer = doc.mention(m);
    for (int i = 0; i < doc.num_mentions(); ++i) {
      const Mention &inner = doc.mention(i);
      if (i != m && outer.start <= inner.start && inner.end <= outer.end) {
        view.hidden[i] = true;
      }
    }
  }
  return view;
}

std::vector<int> CandidateSet(const Document &doc, int target,
                              const MaskView &view) {
  (void)doc;
  std::vector<int> candidates = {kNoneCandidate};
  for (int i = 0; i < target; ++i) {
    if (!view.is_hidden(i)) candidates.push_back(i);
  }
  return candidates;
}

std::string BaselineScorer::Name() const {
  switch (kind_) {
    case BaselineKind::kRandom: return "baseline:random";
    case BaselineKind::kPreviousMention: return "baseline:previous";
    case BaselineKind::kNoAntecedent: return "baseline:none";
  }
  return "baseline";
}

AntecedentDistribution BaselineScorer::Score(const ScoringContext &context,
                                             int target,
                                             std::span<const int> candidates) const {
  AntecedentDistribution dist;
  dist.target = target;
  dist.support.assign(candidates.begin(), candidates.end());
  dist.probs.assign(candidates.size(), 0.0);
  const int n = static_cast<int>(candidates.size());
  switch (kind_) {
    case BaselineKind::kRandom: {
      for (double &p : dist.probs) p = 1.0 / n;
      uint64_t key = internal::Fnv1a(context.doc != nullptr ? context.doc->doc_id() : "");
      key = SplitMix64(key ^ SplitMix64(seed_));
      key = SplitMix64(key ^ static_cast<uint64_t>(context.variant + 1));
      Rng rng(SplitMix64(key ^ static_cast<uint64_t>(target)));
      dist.tie_break = static_cast<int>(UniformIndex(rng, n));
      break;
    }
    case BaselineKind::kPreviousMention: {
      int best = 0;
      for (int i = 0; i < n; ++i) {
        if (candidates[i] != kNoneCandidate &&
            (candidates[best] == kNoneCandidate || candidates[i] > candidates[best])) {
          best = i;
        }
      }
      dist.probs[best] = 1.0;
      break;
    }
    case BaselineKind::kNoAntecedent: {
      auto it = std::find(candidates.begin(), candidates.end(), kNoneCandidate);
      if (it == candidates.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "candidate set lacks the dummy antecedent");
      }
      dist.probs[it - candidates.begin()] = 1.0;
      break;
    }
  }
  return dist;
}

std::optional<BaselineKind> ParseBaselineKind(std::string_view name) {
  if (name == "random") return BaselineKind::kRandom;
  if (name == "previous") return BaselineKind::kPreviousMention;
  if (name == "none") return BaselineKind::kNoAntecedent;
  return std::nullopt;
}

}  // namespace maskcoref
