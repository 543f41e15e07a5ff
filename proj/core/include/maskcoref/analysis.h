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

// The mention-form regressions: mention type (multinomial, pronoun baseline)
// and mention length (linear) on predictability and shallow predictors.

#ifndef MASKCOREF_ANALYSIS_H_
#define MASKCOREF_ANALYSIS_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maskcoref/features.h"
#include "maskcoref/stats.h"

namespace maskcoref {

struct ModelSpec {
  std::string name;
  Outcome outcome = Outcome::kType;
  std::vector<Predictor> predictors;
  bool non_pronominal_only = false;
};

// Surprisal-only and full models for type, token length and character
// length, their entropy variants, and length models on non-pronominal
// mentions.
std::vector<ModelSpec> StandardModels();

struct CoefficientRow {
  std::string term;
  std::string outcome_class;  // non-baseline class for type models
  double estimate = 0.0;
  double se = 0.0;
  double statistic = 0.0;  // z or t
  double p = 1.0;
};

struct ModelReport {
  ModelSpec spec;
  std::string family;  // "multinomial" or "linear"
  int n = 0;
  std::vector<CoefficientRow> coefficients;
  std::vector<NestedTest> tests;  // one per predictor, dropping it
  double loglik = 0.0;            // multinomial
  double deviance = 0.0;          // multinomial
  double rss = 0.0;               // linear
  double r2 = 0.0;                // linear
  // Set when the fit failed; the module-qualified code and message.
  std::string error_code;
  std::string error_message;
};

struct AnalysisReport {
  int rows = 0;
  std::array<int, kNumCoarseTypes> rows_by_type{};
  std::map<ExclusionReason, int> excluded;
  int parse_unavailable = 0;
  std::optional<double> spearman_rho;  // entropy vs surprisal
  std::optional<double> spearman_p;
  std::vector<ModelReport> models;
};

// Fits one model. Throws whatever the fit throws.
ModelReport FitModel(std::span<const FeatureRow> rows, const ModelSpec &spec);

// Fits every model in `specs`. A set lacking one of the three mention types
// throws ClassMissing; other per-model failures are recorded in the report
// unless `strict`, in which case they propagate.
AnalysisReport RunAnalysis(const AnalysisSet &set,
                           const std::vector<ModelSpec> &specs = StandardModels(),
                           bool strict = false);

std::string AnalysisReportToJson(const AnalysisReport &report,
                                 const std::string &config_hash,
                                 const std::string &tool_version);
// Coefficient tables with significance stars at .05 and a note on the LR
// degrees of freedom of multi-parameter terms.
std::string AnalysisReportToMarkdown(const AnalysisReport &report);

}  // namespace maskcoref

#endif  // MASKCOREF_ANALYSIS_H_
