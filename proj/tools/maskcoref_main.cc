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

// maskcoref: masked coreference evaluation and referent predictability.
//
//   maskcoref ingest FILE... --out corpus.json
//   maskcoref mask corpus.json --out variants/
//   maskcoref train corpus.json --seed 1 --out weights.json
//   maskcoref pipeline corpus.json --scorer shallow:weights.json --seed 1 --out run/
//   maskcoref human-compare corpus.json --guesses g.jsonl --scorer ... --out c.json
//
// Exit codes: 0 success, 2 input error, 3 reference error, 4 numerical
// failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maskcoref/error.h"
#include "maskcoref/pipeline.h"

namespace {

using maskcoref::RunConfig;

struct Flags {
  std::vector<std::string> inputs;
  bool predicted = false;
  int mask_window = maskcoref::kDefaultMaskWindow;
  int mask_tokens = 1;
  double mask_fraction = 0.10;
  int iterations = 5;
  std::optional<uint64_t> seed;
  std::string scorer = "baseline:none";
  std::string prev_subject = "clause";
  bool strict_analysis = false;
  std::string out;
  int workers = 1;
};

void AddInputs(CLI::App *cmd, Flags &f) {
  cmd->add_option("inputs", f.inputs, "Corpus JSON or CoNLL files")->required();
}

void AddOut(CLI::App *cmd, Flags &f, const std::string &what) {
  cmd->add_option("--out,-o", f.out, what)->required();
}

void AddMaskFlags(CLI::App *cmd, Flags &f) {
  auto *gold = cmd->add_flag("--gold-boundaries", "Gold mention boundaries (default)");
  cmd->add_flag("--predicted", f.predicted, "Predicted mention boundaries")->excludes(gold);
  cmd->add_option("--mask-window", f.mask_window, "Tokens protected on each side of a mask")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--mask-tokens", f.mask_tokens, "Mask tokens per mention")
      ->check(CLI::IsMember({1, 3}));
  cmd->add_option("--seed", f.seed, "Seed for every stochastic step");
}

void AddRunFlags(CLI::App *cmd, Flags &f) {
  cmd->add_option("--mask-fraction", f.mask_fraction, "Fraction masked per sample")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--iterations", f.iterations, "Random mask samples")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--prev-subject", f.prev_subject, "Previous subject scope")
      ->check(CLI::IsMember({"clause", "sentence"}));
  cmd->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
}

void AddScorer(CLI::App *cmd, Flags &f) {
  cmd->add_option("--scorer", f.scorer,
                  "baseline:{random,previous,none}, shallow:WEIGHTS or external:SCORES");
}

RunConfig ToConfig(const Flags &f) {
  RunConfig config;
  config.inputs = f.inputs;
  config.gold_boundaries = !f.predicted;
  config.mask_window = f.mask_window;
  config.mask_tokens = f.mask_tokens;
  config.mask_fraction = f.mask_fraction;
  config.iterations = f.iterations;
  config.seed = f.seed;
  config.scorer = maskcoref::ScorerSpec::Parse(f.scorer);
  config.prev_subject = f.prev_subject == "sentence"
                            ? maskcoref::PrevSubjectMode::kSentence
                            : maskcoref::PrevSubjectMode::kClause;
  config.strict_analysis = f.strict_analysis;
  config.out_dir = f.out;
  config.workers = f.workers;
  return config;
}

void PrintPrf(const char *label, const maskcoref::Prf &prf) {
  std::printf("%s P=%.4f R=%.4f F1=%.4f\n", label, prf.precision, prf.recall, prf.f1);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Masked coreference evaluation and referent predictability"};
  app.require_subcommand(1);
  Flags f;

  CLI::App *ingest = app.add_subcommand("ingest", "Parse CoNLL files into corpus JSON");
  AddInputs(ingest, f);
  AddOut(ingest, f, "Corpus JSON to write");

  CLI::App *mask = app.add_subcommand("mask", "Export mask plans and masked variants");
  AddInputs(mask, f);
  AddMaskFlags(mask, f);
  AddOut(mask, f, "Output directory");

  CLI::App *train = app.add_subcommand("train", "Train the shallow antecedent scorer");
  maskcoref::ShallowTrainConfig train_config;
  AddInputs(train, f);
  AddMaskFlags(train, f);
  AddOut(train, f, "Weights JSON to write");
  train->add_option("--l2", train_config.l2, "L2 penalty")->check(CLI::NonNegativeNumber);
  train->add_option("--max-epochs", train_config.max_epochs, "Gradient steps")
      ->check(CLI::PositiveNumber);

  CLI::App *pipeline = app.add_subcommand("pipeline", "Score, evaluate, analyse and plot");
  AddInputs(pipeline, f);
  AddMaskFlags(pipeline, f);
  AddRunFlags(pipeline, f);
  AddScorer(pipeline, f);
  pipeline->add_flag("--strict-analysis", f.strict_analysis,
                     "Fail when any regression cannot be fitted");
  AddOut(pipeline, f, "Output directory");

  CLI::App *human = app.add_subcommand("human-compare", "Compare scorer to human guesses");
  std::string guesses;
  AddInputs(human, f);
  AddMaskFlags(human, f);
  AddScorer(human, f);
  human->add_option("--guesses", guesses, "Human guess JSONL")->required();
  AddOut(human, f, "comparison.json to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) {
      const maskcoref::IngestSummary s = maskcoref::CmdIngest(f.inputs, f.out);
      std::printf("documents=%d mentions=%d entities=%d\n", s.documents, s.mentions,
                  s.entities);
      return 0;
    }
    const RunConfig config = ToConfig(f);
    if (mask->parsed()) {
      const maskcoref::MaskExportSummary s = maskcoref::CmdMask(config);
      std::printf("documents=%d variants=%d config_hash=%s\n", s.documents, s.variants,
                  config.Hash().c_str());
    } else if (train->parsed()) {
      const maskcoref::ShallowTrainResult r =
          maskcoref::CmdTrain(config, train_config, f.out);
      std::printf("examples=%d epochs=%d objective=%.6f gradient_norm=%.3g\n",
                  r.num_examples, r.epochs, r.objective, r.gradient_norm);
      if (!r.converged) {
        std::fprintf(stderr, "warning: training stopped before convergence\n");
      }
    } else if (pipeline->parsed()) {
      const maskcoref::PipelineSummary s = maskcoref::CmdPipeline(config);
      std::printf("documents=%d variants=%d records=%d config_hash=%s\n", s.documents,
                  s.variants, s.records, s.config_hash.c_str());
      PrintPrf("masked", s.masked);
      PrintPrf("unmasked", s.unmasked);
      for (const std::string &w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    } else if (human->parsed()) {
      const maskcoref::HumanComparison c =
          maskcoref::CmdHumanCompare(config, guesses, f.out);
      std::printf("n=%d mean_jsd=%.4f accuracy=%.4f relative_accuracy=%.4f\n", c.n,
                  c.mean_jsd, c.accuracy, c.relative_accuracy);
    }
  } catch (const maskcoref::Error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception &e) {
    // Filesystem and allocation failures surface as input errors.
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
