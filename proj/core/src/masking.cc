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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"
#include "json_internal.h"
#include "maskcoref/error.h"
#include "maskcoref/rng.h"
#include "text_util.h"

namespace maskcoref {

using nlohmann::json;

std::vector<int> MaskableMentions(const Document &doc) {
  std::vector<int> result;
  for (int i = 0; i < doc.num_mentions(); ++i) {
    if (!doc.mention(i).is_embedded) result.push_back(i);
  }
  return result;
}

bool MasksConflict(const Document &doc, int a, int b, int window) {
  const Mention &m = doc.mention(a);
  const Mention &n = doc.mention(b);
  if (m.entity_id == n.entity_id) return true;
  return n.end >= m.start - window && n.start <= m.end + window;
}

MaskPlan PlanPartition(const Document &doc, int window) {
  MaskPlan plan;
  plan.doc_id = doc.doc_id();
  plan.window = window;
  for (int i : MaskableMentions(doc)) {
    bool placed = false;
    for (std::vector<int> &subset : plan.subsets) {
      bool ok = true;
      for (int j : subset) {
        if (MasksConflict(doc, j, i, window)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        subset.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) plan.subsets.push_back({i});
  }
  for (int i = 0; i < doc.num_mentions(); ++i) {
    if (doc.mention(i).is_embedded) plan.discarded_inner.push_back(i);
  }
  return plan;
}

std::string VerifyPlan(const Document &doc, const MaskPlan &plan) {
  std::vector<int> seen(doc.num_mentions(), 0);
  for (size_t s = 0; s < plan.subsets.size(); ++s) {
    const std::vector<int> &subset = plan.subsets[s];
    for (int m : subset) {
      if (m < 0 || m >= doc.num_mentions()) {
        return "subset " + std::to_string(s) + " references mention " +
               std::to_string(m) + " out of range";
      }
      if (doc.mention(m).is_embedded) {
        return "embedded mention " + std::to_string(m) + " is in subset " +
               std::to_string(s);
      }
      ++seen[m];
    }
    for (int m : subset) {
      const Mention &a = doc.mention(m);
      for (int n : subset) {
        if (n == m) continue;
        const Mention &b = doc.mention(n);
        if (a.entity_id == b.entity_id && n < m) {
          return "mention " + std::to_string(n) + " is an antecedent of " +
                 std::to_string(m) + " in subset " + std::to_string(s);
        }
        // Any token of b within [a.start - w, a.end + w].
        for (int t = b.start; t <= b.end; ++t) {
          if (t >= a.start - plan.window && t <= a.end + plan.window) {
            return "mention " + std::to_string(n) + " lies in the window of " +
                   std::to_string(m) + " in subset " + std::to_string(s);
          }
        }
      }
    }
  }
  for (int m = 0; m < doc.num_mentions(); ++m) {
    const int expected = doc.mention(m).is_embedded ? 0 : 1;
    if (seen[m] != expected) {
      return "mention " + std::to_string(m) + " appears in " +
             std::to_string(seen[m]) + " subsets";
    }
  }
  return "";
}

std::vector<int> MaskedVariant::masked_mentions() const {
  std::vector<int> result;
  for (const MaskedSpan &span : masked) result.push_back(span.mention);
  return result;
}

MaskedVariant EmitMaskSet(const Document &doc, const std::vector<int> &mask_set,
                          int subset_index, int mask_token_count,
                          const std::string &mask_token) {
  if (mask_token_count != 1 && mask_token_count != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask token count must be 1 or 3, got " +
                    std::to_string(mask_token_count));
  }
  std::vector<int> sorted = mask_set;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int m : sorted) {
    if (m < 0 || m >= doc.num_mentions() || doc.mention(m).is_embedded) {
      throw Error(ErrorCode::kInvalidArgument,
                  doc.doc_id() + ": mention " + std::to_string(m) +
                      " cannot be masked");
    }
  }

  MaskedVariant variant;
  variant.doc_id = doc.doc_id();
  variant.subset_index = subset_index;
  variant.mask_token_count = mask_token_count;
  variant.mask_token = mask_token;
  variant.index_map.assign(doc.num_tokens(), -1);

  // Masked spans in source order. Overlapping spans (crossing annotations)
  // collapse into one masked region shared by all of their mentions.
  std::vector<int> by_start = sorted;
  std::sort(by_start.begin(), by_start.end(), [&](int a, int b) {
    return doc.mention(a).start < doc.mention(b).start;
  });
  const std::vector<Token> &source = doc.tokens();
  int t = 0;
  for (size_t i = 0; i < by_start.size();) {
    const int region_start = doc.mention(by_start[i]).start;
    int region_end = doc.mention(by_start[i]).end;
    size_t j = i + 1;
    while (j < by_start.size() && doc.mention(by_start[j]).start <= region_end) {
      region_end = std::max(region_end, doc.mention(by_start[j]).end);
      ++j;
    }
    for (; t < region_start; ++t) {
      variant.index_map[t] = static_cast<int>(variant.tokens.size());
      variant.inverse_map.push_back(t);
      variant.tokens.push_back(source[t]);
    }
    const int variant_start = static_cast<int>(variant.tokens.size());
    for (int k = 0; k < mask_token_count; ++k) {
      Token mask;
      mask.surface = mask_token;
      mask.pos = "MASK";
      mask.sentence = source[region_start].sentence;
      mask.parse_bit = "*";
      variant.tokens.push_back(mask);
      variant.inverse_map.push_back(-1);
    }
    for (size_t k = i; k < j; ++k) {
      variant.masked.push_back(
          {by_start[k], variant_start, static_cast<int>(variant.tokens.size()) - 1});
    }
    t = region_end + 1;
    i = j;
  }
  for (; t < doc.num_tokens(); ++t) {
    variant.index_map[t] = static_cast<int>(variant.tokens.size());
    variant.inverse_map.push_back(t);
    variant.tokens.push_back(source[t]);
  }
  std::sort(variant.masked.begin(), variant.masked.end(),
            [](const MaskedSpan &a, const MaskedSpan &b) { return a.mention < b.mention; });

  for (int i = 0; i < doc.num_mentions(); ++i) {
    const Mention &inner = doc.mention(i);
    for (int m : sorted) {
      const Mention &outer = doc.mention(m);
      if (i != m && !std::binary_search(sorted.begin(), sorted.end(), i) &&
          outer.start <= inner.start && inner.end <= outer.end) {
        variant.discarded_inner.push_back(i);
        break;
      }
    }
  }
  return variant;
}

MaskedVariant EmitMasked(const Document &doc, const MaskPlan &plan,
                         int subset_index, int mask_token_count,
                         const std::string &mask_token) {
  if (subset_index < 0 || subset_index >= static_cast<int>(plan.subsets.size())) {
    throw Error(ErrorCode::kBadSubsetIndex,
                doc.doc_id() + ": subset " + std::to_string(subset_index) +
                    " of " + std::to_string(plan.subsets.size()));
  }
  return EmitMaskSet(doc, plan.subsets[subset_index], subset_index,
                     mask_token_count, mask_token);
}

std::vector<Token> Unmask(const MaskedVariant &variant, const Document &doc) {
  std::vector<Token> tokens(variant.index_map.size());
  for (size_t t = 0; t < variant.index_map.size(); ++t) {
    if (variant.index_map[t] >= 0) tokens[t] = variant.tokens[variant.index_map[t]];
  }
  for (const MaskedSpan &span : variant.masked) {
    const Mention &m = doc.mention(span.mention);
    for (int t = m.start; t <= m.end; ++t) tokens[t] = doc.tokens()[t];
  }
  return tokens;
}

std::vector<std::vector<int>> SampleMask(const Document &doc, double fraction,
                                         uint64_t seed, int iterations) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "mask fraction must be in (0, 1]");
  }
  std::vector<int> pool = MaskableMentions(doc);
  if (pool.empty()) {
    throw Error(ErrorCode::kNoMaskableMentions,
                doc.doc_id() + " has no maskable mentions");
  }
  const int n = static_cast<int>(pool.size());
  // The epsilon keeps exact products such as 0.1 * 40 from rounding up.
  const int k = std::clamp(static_cast<int>(std::ceil(fraction * n - 1e-9)), 1, n);
  Rng rng(SplitMix64(seed ^ internal::Fnv1a(doc.doc_id())));
  std::vector<std::vector<int>> samples;
  for (int it = 0; it < iterations; ++it) {
    std::vector<int> order = pool;
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(UniformIndex(rng, n - i));
      std::swap(order[i], order[j]);
    }
    std::vector<int> sample(order.begin(), order.begin() + k);
    std::sort(sample.begin(), sample.end());
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::string MaskPlanToJson(const MaskPlan &plan, int indent) {
  json value = {{"format", "maskcoref-mask-plan"},
                {"version", 1},
                {"doc_id", plan.doc_id},
                {"window", plan.window},
                {"subsets", plan.subsets},
                {"discarded_inner", plan.discarded_inner}};
  return value.dump(indent);
}

MaskPlan MaskPlanFromJson(std::string_view text) {
  json value = internal::ParseJson(text, "mask plan");
  try {
    MaskPlan plan;
    plan.doc_id = value.at("doc_id").get<std::string>();
    plan.window = value.at("window").get<int>();
    plan.subsets = value.at("subsets").get<std::vector<std::vector<int>>>();
    plan.discarded_inner = value.at("discarded_inner").get<std::vector<int>>();
    return plan;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("mask plan: ") + e.what());
  }
}

std::string VariantText(const MaskedVariant &variant) {
  std::string out;
  for (size_t t = 0; t < variant.tokens.size(); ++t) {
    if (t > 0) {
      out += variant.tokens[t].sentence != variant.tokens[t - 1].sentence ? '\n' : ' ';
    }
    out += variant.tokens[t].surface;
  }
  if (!variant.tokens.empty()) out += '\n';
  return out;
}

std::string VariantIndexMapJson(const MaskedVariant &variant, int indent) {
  json masked = json::array();
  for (const MaskedSpan &span : variant.masked) {
    masked.push_back({{"mention", span.mention},
                      {"variant_start", span.variant_start},
                      {"variant_end", span.variant_end}});
  }
  json value = {{"format", "maskcoref-index-map"},
                {"version", 1},
                {"doc_id", variant.doc_id},
                {"variant", variant.subset_index},
                {"mask_token", variant.mask_token},
                {"mask_token_count", variant.mask_token_count},
                {"num_variant_tokens", variant.tokens.size()},
                {"original_to_variant", variant.index_map},
                {"masked", masked},
                {"discarded_inner", variant.discarded_inner}};
  return value.dump(indent);
}

}  // namespace maskcoref
