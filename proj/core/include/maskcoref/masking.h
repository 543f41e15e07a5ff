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

// Mask planning. Every non-embedded mention is masked in exactly one variant
// of its document; mentions masked together must not corefer and must lie
// outside each other's token window.

#ifndef MASKCOREF_MASKING_H_
#define MASKCOREF_MASKING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "maskcoref/corpus.h"

namespace maskcoref {

inline constexpr int kDefaultMaskWindow = 50;
inline constexpr char kDefaultMaskToken[] = "[MASK]";

struct MaskPlan {
  std::string doc_id;
  std::vector<std::vector<int>> subsets;  // ascending mention indices
  int window = kDefaultMaskWindow;
  std::vector<int> discarded_inner;       // embedded mentions, ascending

  bool operator==(const MaskPlan &) const = default;
};

// Mentions that may be masked: those not embedded in another mention.
std::vector<int> MaskableMentions(const Document &doc);

// True when `a` and `b` may not be masked in the same variant: they corefer,
// or one overlaps the other's window of `window` source tokens on either side.
bool MasksConflict(const Document &doc, int a, int b, int window);

// Greedy first-fit over maskable mentions in document order, each into the
// earliest subset it does not conflict with.
MaskPlan PlanPartition(const Document &doc, int window = kDefaultMaskWindow);

// Independent brute-force check of a plan: subsets are disjoint, cover the
// maskable mentions exactly, and contain no conflicting pair. Returns an
// empty string when valid, else a description of the first violation.
std::string VerifyPlan(const Document &doc, const MaskPlan &plan);

struct MaskedSpan {
  int mention = 0;
  int variant_start = 0;  // inclusive, in variant tokens
  int variant_end = 0;    // inclusive
};

struct MaskedVariant {
  std::string doc_id;
  int subset_index = 0;
  int mask_token_count = 1;
  std::string mask_token = kDefaultMaskToken;
  std::vector<Token> tokens;
  // Per source token: its variant index, or -1 inside a masked span.
  std::vector<int> index_map;
  // Per variant token: its source index, or -1 for mask tokens.
  std::vector<int> inverse_map;
  std::vector<MaskedSpan> masked;    // ascending by mention
  std::vector<int> discarded_inner;  // mentions inside masked spans

  std::vector<int> masked_mentions() const;
};

// Replaces each mention of a mask set by `mask_token_count` mask tokens
// regardless of its length. Throws InvalidArgument for a count outside
// {1, 3} or an embedded mention in the set.
MaskedVariant EmitMaskSet(const Document &doc, const std::vector<int> &mask_set,
                          int subset_index, int mask_token_count = 1,
                          const std::string &mask_token = kDefaultMaskToken);

// Throws BadSubsetIndex.
MaskedVariant EmitMasked(const Document &doc, const MaskPlan &plan,
                         int subset_index, int mask_token_count = 1,
                         const std::string &mask_token = kDefaultMaskToken);

// Source token stream rebuilt from a variant: unmasked tokens through the
// index map, masked spans from `doc`.
std::vector<Token> Unmask(const MaskedVariant &variant, const Document &doc);

// `iterations` independent uniform samples without replacement of
// ceil(fraction * N) maskable mentions each, deterministic in (seed, doc id).
// Throws NoMaskableMentions, InvalidArgument for fraction outside (0, 1].
std::vector<std::vector<int>> SampleMask(const Document &doc, double fraction,
                                         uint64_t seed, int iterations = 5);

std::string MaskPlanToJson(const MaskPlan &plan, int indent = -1);
// Throws SchemaViolation.
MaskPlan MaskPlanFromJson(std::string_view text);

// Whitespace-tokenized text, one sentence per line.
std::string VariantText(const MaskedVariant &variant);
// Sidecar describing how variant tokens map back to the source document.
std::string VariantIndexMapJson(const MaskedVariant &variant, int indent = -1);

}  // namespace maskcoref

#endif  // MASKCOREF_MASKING_H_
