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

// End-to-end commands: ingest CoNLL files, plan and export masked variants,
// train the shallow scorer, and run plan -> score -> evaluate ->
// predictability -> regressions -> figures.

#ifndef MASKCOREF_PIPELINE_H_
#define MASKCOREF_PIPELINE_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maskcoref/analysis.h"
#include "maskcoref/corpus.h"
#include "maskcoref/evalmetrics.h"
#include "maskcoref/external_scores.h"
#include "maskcoref/features.h"
#include "maskcoref/masking.h"
#include "maskcoref/predictability.h"
#include "maskcoref/scoring.h"
#include "maskcoref/shallow_scorer.h"

namespace maskcoref {

inline constexpr char kToolVersion[] = "0.1.0";

struct ScorerSpec {
  enum class Kind { kBaseline, kShallow, kExternal };
  Kind kind = Kind::kBaseline;
  BaselineKind baseline = BaselineKind::kNoAntecedent;
  std::string path;  // weights or scores file

  // "baseline:{random,previous,none}", "shallow:PATH", "external:PATH".
  // Throws InvalidArgument.
  static ScorerSpec Parse(std::string_view text);
  std::string ToString() const;
};

struct RunConfig {
  std::vector<std::string> inputs;
  bool gold_boundaries = true;
  int mask_window = kDefaultMaskWindow;
  int mask_tokens = 1;
  double mask_fraction = 0.10;
  int iterations = 5;
  std::optional<uint64_t> seed;
  ScorerSpec scorer;
  PrevSubjectMode prev_subject = PrevSubjectMode::kClause;
  bool strict_analysis = false;
  std::string out_dir;
  int workers = 1;  // does not affect outputs

  // Output-relevant settings plus content hashes of the input files.
  std::string CanonicalJson() const;
  // Hex FNV-1a of CanonicalJson().
  std::string Hash() const;
};

std::string ReadFile(const std::string &path);
// Creates parent directories, truncates and writes. Throws Io.
void WriteFile(const std::string &path, std::string_view contents);

// A .json path is read as a corpus file, anything else as CoNLL. Several
// inputs are merged; duplicate ids throw DuplicateDocId.
Corpus LoadCorpus(const std::vector<std::string> &paths);

struct IngestSummary {
  int documents = 0;
  int mentions = 0;
  int entities = 0;
};
IngestSummary CmdIngest(const std::vector<std::string> &conll_paths,
                        const std::string &out_path);

// A scorer and the score table it borrows, if external.
struct LoadedScorer {
  std::unique_ptr<ExternalScoreTable> table;
  std::unique_ptr<AntecedentScorer> scorer;
  const ExternalScorer *external = nullptr;
};
LoadedScorer LoadScorer(const ScorerSpec &spec, const Corpus &corpus,
                        bool gold_boundaries, uint64_t seed);

// Per-document results of the pipeline.
struct DocumentResult {
  AntecedentEval eval;
  std::vector<AntecedentEval> sampled;  // one per iteration
  ClusterCounts clusters;
  std::vector<PredictabilityRecord> records;
  // Per record: shallow features (nullopt for entity-first mentions) and
  // whether the subject flags lacked a parse.
  std::vector<std::optional<ShallowFeatures>> features;
  std::vector<bool> parse_unavailable;
  // Per record: the three-way split (true entity, other entities, new).
  std::vector<std::array<double, 3>> splits;
  int variants = 0;
};

// Scores one document under every plan variant, the unmasked document and
// the sampled masks (internal scorers only).
DocumentResult ProcessDocument(const Document &doc, const LoadedScorer &loaded,
                               const RunConfig &config);

struct PipelineSummary {
  int documents = 0;
  int variants = 0;
  int records = 0;
  Prf masked;
  Prf unmasked;
  std::string config_hash;
  std::vector<std::string> warnings;
};

// Writes config.json, eval.json, predictability.csv, analysis.json,
// analysis.md and figures/ under config.out_dir.
PipelineSummary CmdPipeline(const RunConfig &config);

// Writes one plan per document and, per variant, the masked text and its
// index map (including the targets and candidate sets to score). Variant -1
// is the unmasked document.
struct MaskExportSummary {
  int documents = 0;
  int variants = 0;
};
MaskExportSummary CmdMask(const RunConfig &config);

ShallowTrainResult CmdTrain(const RunConfig &config, const ShallowTrainConfig &train,
                            const std::string &weights_out);

// Writes comparison.json with mean JSD, accuracy and relative accuracy.
HumanComparison CmdHumanCompare(const RunConfig &config, const std::string &guesses,
                                const std::string &out_path);

// File-name-safe form of a document id.
std::string SafeFileName(std::string_view doc_id);

}  // namespace maskcoref

#endif  // MASKCOREF_PIPELINE_H_
