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

// Parse bits look like "(TOP(S(NP*", "*", "*))": opening brackets with labels
// before the leaf marker '*', closing brackets after it.

#include <algorithm>

#include "maskcoref/features.h"

namespace maskcoref {
namespace {

std::string BaseLabel(std::string_view label) {
  if (label.empty() || label.front() == '-') return std::string(label);
  size_t cut = label.find_first_of("-=");
  return std::string(label.substr(0, cut));
}

bool IsClauseLabel(std::string_view label) {
  return label == "S" || label == "SINV" || label == "SQ";
}

}  // namespace

SyntaxIndex::SyntaxIndex(const Document &doc) : doc_(&doc) {
  const int num_sentences = static_cast<int>(doc.sentences().size());
  parsed_.assign(num_sentences, false);
  roots_.assign(num_sentences, -1);
  clauses_.resize(num_sentences);

  for (int s = 0; s < num_sentences; ++s) {
    const SentenceRange &range = doc.sentences()[s];
    const size_t first_node = nodes_.size();
    std::vector<int> stack;
    std::vector<int> roots;
    bool ok = true;
    for (int t = range.begin; t < range.end && ok; ++t) {
      std::string_view bit = doc.tokens()[t].parse_bit;
      size_t star = bit.find('*');
      if (star == std::string_view::npos) {
        ok = false;
        break;
      }
      std::string_view opening = bit.substr(0, star);
      size_t pos = 0;
      while (pos < opening.size()) {
        if (opening[pos] != '(') {
          ok = false;
          break;
        }
        size_t next = opening.find('(', pos + 1);
        std::string_view label = opening.substr(
            pos + 1, next == std::string_view::npos ? std::string_view::npos
                                                    : next - pos - 1);
        ConstituentNode node;
        node.label = BaseLabel(label);
        node.start = t;
        node.end = t;
        node.sentence = s;
        node.parent = stack.empty() ? -1 : stack.back();
        const int id = static_cast<int>(nodes_.size());
        if (node.parent >= 0) {
          nodes_[node.parent].children.push_back(id);
        } else {
          roots.push_back(id);
        }
        nodes_.push_back(std::move(node));
        stack.push_back(id);
        pos = next == std::string_view::npos ? opening.size() : next;
      }
      for (char c : bit.substr(star + 1)) {
        if (c != ')' || stack.empty()) {
          ok = false;
          break;
        }
        nodes_[stack.back()].end = t;
        stack.pop_back();
      }
    }
    if (!ok || !stack.empty() || roots.size() != 1) {
      nodes_.resize(first_node);
      continue;
    }
    parsed_[s] = true;
    roots_[s] = roots.front();
    for (size_t id = first_node; id < nodes_.size(); ++id) {
      if (IsClauseLabel(nodes_[id].label)) {
        clauses_[s].push_back(static_cast<int>(id));
      }
    }
  }
}

int SyntaxIndex::unparsed_sentences() const {
  return static_cast<int>(std::count(parsed_.begin(), parsed_.end(), false));
}

int SyntaxIndex::MaximalNp(int mention) const {
  const Mention &m = doc_->mention(mention);
  const int s = doc_->sentence_of_mention(mention);
  if (!parsed_[s]) return -1;
  for (size_t id = roots_[s]; id < nodes_.size() && nodes_[id].sentence == s; ++id) {
    const ConstituentNode &node = nodes_[id];
    if (node.label == "NP" && node.start == m.start && node.end == m.end) {
      return static_cast<int>(id);
    }
  }
  return -1;
}

bool SyntaxIndex::IsSubject(int mention) const {
  const int np = MaximalNp(mention);
  if (np < 0) return false;
  const int parent = nodes_[np].parent;
  if (parent < 0) return false;
  const ConstituentNode &clause = nodes_[parent];
  const bool clause_like = IsClauseLabel(clause.label) ||
                           (clauses_[clause.sentence].empty() &&
                            parent == roots_[clause.sentence]);
  if (!clause_like) return false;
  auto it = std::find(clause.children.begin(), clause.children.end(), np);
  for (++it; it != clause.children.end(); ++it) {
    if (nodes_[*it].label == "VP") return true;
  }
  return false;
}

int SyntaxIndex::ClauseOf(int mention) const {
  const Mention &m = doc_->mention(mention);
  const int s = doc_->sentence_of_mention(mention);
  if (!parsed_[s]) return -1;
  int innermost = -1;
  for (int id : clauses_[s]) {
    if (nodes_[id].start <= m.start && m.end <= nodes_[id].end) innermost = id;
  }
  return innermost >= 0 ? innermost : roots_[s];
}

int SyntaxIndex::PreviousClause(int mention, PrevSubjectMode mode) const {
  const int own = ClauseOf(mention);
  if (own < 0) return -1;
  const int start = doc_->mention(mention).start;
  for (int s = doc_->sentence_of_mention(mention); s >= 0; --s) {
    if (!parsed_[s]) return -1;
    std::vector<int> candidates = clauses_[s];
    if (candidates.empty()) candidates.push_back(roots_[s]);
    int best = -1;
    for (int id : candidates) {
      if (id == own || nodes_[id].start >= start) continue;
      if (best < 0 || nodes_[id].start >= nodes_[best].start) best = id;
    }
    if (best < 0) continue;
    if (mode == PrevSubjectMode::kSentence &&
        s != doc_->sentence_of_mention(mention)) {
      return candidates.front();
    }
    return best;
  }
  return -1;
}

SubjectFlags SyntaxIndex::Flags(int mention, PrevSubjectMode mode) const {
  SubjectFlags flags;
  if (!parsed_[doc_->sentence_of_mention(mention)]) {
    flags.parse_unavailable = true;
    return flags;
  }
  flags.mention_is_subject = IsSubject(mention);
  if (doc_->mention(mention).is_first_of_entity) return flags;
  const int antecedent = ClosestAntecedent(*doc_, mention);
  for (int s = doc_->sentence_of_mention(antecedent);
       s < doc_->sentence_of_mention(mention); ++s) {
    if (!parsed_[s]) {
      flags.parse_unavailable = true;
      return flags;
    }
  }
  const int previous = PreviousClause(mention, mode);
  if (previous >= 0 && IsSubject(antecedent)) {
    flags.antecedent_prev_subject = nodes_[MaximalNp(antecedent)].parent == previous;
  }
  return flags;
}

SubjectFlags ComputeSubjectFlags(const Document &doc, int mention,
                                 PrevSubjectMode mode) {
  return SyntaxIndex(doc).Flags(mention, mode);
}

}  // namespace maskcoref
