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

#include "maskcoref/analysis.h"

#include <sstream>

#include "json.hpp"
#include "maskcoref/error.h"
#include "maskcoref/predictability.h"
#include "text_util.h"

namespace maskcoref {

using nlohmann::json;

namespace {

const std::vector<Predictor> kShallow = {
    Predictor::kDistance,         Predictor::kFrequency,
    Predictor::kAntecedentPrevSubject, Predictor::kMentionIsSubject,
    Predictor::kAntecedentType,
};

std::vector<Predictor> With(std::vector<Predictor> base,
                            std::initializer_list<Predictor> extra) {
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kType: return "mention_type";
    case Outcome::kLengthTokens: return "length_tokens";
    case Outcome::kLengthChars: return "length_chars";
  }
  return "?";
}

}  // namespace

std::vector<ModelSpec> StandardModels() {
  const Predictor s = Predictor::kSurprisal;
  const Predictor e = Predictor::kEntropy;
  std::vector<ModelSpec> specs;
  const std::pair<Outcome, std::string> outcomes[] = {
      {Outcome::kType, "type"},
      {Outcome::kLengthTokens, "tokens"},
      {Outcome::kLengthChars, "chars"},
  };
  for (const auto &[outcome, prefix] : outcomes) {
    specs.push_back({prefix + "_surprisal", outcome, {s}, false});
    specs.push_back({prefix + "_full", outcome, With(kShallow, {s}), false});
  }
  specs.push_back({"type_surprisal_entropy", Outcome::kType, {s, e}, false});
  specs.push_back({"type_full_entropy", Outcome::kType, With(kShallow, {s, e}), false});
  specs.push_back({"tokens_surprisal_entropy", Outcome::kLengthTokens, {s, e}, false});
  specs.push_back(
      {"tokens_full_entropy", Outcome::kLengthTokens, With(kShallow, {s, e}), false});
  specs.push_back({"tokens_nonpronominal_surprisal", Outcome::kLengthTokens, {s}, true});
  specs.push_back(
      {"tokens_nonpronominal_full", Outcome::kLengthTokens, With(kShallow, {s}), true});
  return specs;
}

ModelReport FitModel(std::span<const FeatureRow> all_rows, const ModelSpec &spec) {
  std::vector<FeatureRow> rows;
  for (const FeatureRow &row : all_rows) {
    if (!spec.non_pronominal_only || row.outcome_type != CoarseType::kPronoun) {
      rows.push_back(row);
    }
  }
  ModelReport report;
  report.spec = spec;
  report.n = static_cast<int>(rows.size());
  const Formula formula{spec.predictors, true};
  const Design design = BuildDesign(rows, formula);

  auto reduced_design = [&](size_t drop) {
    Formula reduced = formula;
    reduced.predictors.erase(reduced.predictors.begin() + static_cast<long>(drop));
    return BuildDesign(rows, reduced);
  };

  if (spec.outcome == Outcome::kType) {
    report.family = "multinomial";
    const std::vector<int> labels = TypeLabels(rows);
    const MultinomialFit fit = FitMultinomial(design.x, labels, kNumCoarseTypes,
                                              static_cast<int>(CoarseType::kPronoun),
                                              design.columns);
    for (size_t k = 0; k < fit.classes.size(); ++k) {
      for (size_t j = 0; j < design.columns.size(); ++j) {
        report.coefficients.push_back(
            {design.columns[j],
             std::string(CoarseTypeName(static_cast<CoarseType>(fit.classes[k]))),
             fit.coef(k, j), fit.se(k, j), fit.z(k, j), fit.p(k, j)});
      }
    }
    report.loglik = fit.loglik;
    report.deviance = fit.deviance;
    for (size_t d = 0; d < spec.predictors.size(); ++d) {
      const Design reduced = reduced_design(d);
      const MultinomialFit reduced_fit =
          FitMultinomial(reduced.x, labels, kNumCoarseTypes,
                         static_cast<int>(CoarseType::kPronoun), reduced.columns);
      report.tests.push_back(
          LrTest(fit, reduced_fit, std::string(PredictorName(spec.predictors[d]))));
    }
  } else {
    report.family = "linear";
    const Eigen::VectorXd y = OutcomeVector(rows, spec.outcome);
    const LinearFit fit = FitLinear(design.x, y, design.columns);
    for (size_t j = 0; j < design.columns.size(); ++j) {
      report.coefficients.push_back(
          {design.columns[j], "", fit.coef[j], fit.se[j], fit.t[j], fit.p[j]});
    }
    report.rss = fit.rss;
    report.r2 = fit.r2;
    for (size_t d = 0; d < spec.predictors.size(); ++d) {
      const Design reduced = reduced_design(d);
      const LinearFit reduced_fit = FitLinear(reduced.x, y, reduced.columns);
      report.tests.push_back(
          FTest(fit, reduced_fit, std::string(PredictorName(spec.predictors[d]))));
    }
  }
  return report;
}

AnalysisReport RunAnalysis(const AnalysisSet &set, const std::vector<ModelSpec> &specs,
                           bool strict) {
  AnalysisReport report;
  report.rows = static_cast<int>(set.rows.size());
  report.excluded = set.excluded;
  report.parse_unavailable = set.parse_unavailable;
  for (const FeatureRow &row : set.rows) {
    ++report.rows_by_type[static_cast<int>(row.outcome_type)];
  }
  if (set.rows.empty()) {
    throw Error(ErrorCode::kEmptyFilter, "the analysis set is empty");
  }
  for (int t = 0; t < kNumCoarseTypes; ++t) {
    if (report.rows_by_type[t] == 0) {
      throw Error(ErrorCode::kClassMissing,
                  "no " + std::string(CoarseTypeName(static_cast<CoarseType>(t))) +
                      " rows in the analysis set");
    }
  }

  std::vector<double> surprisal, entropy;
  for (const FeatureRow &row : set.rows) {
    surprisal.push_back(row.surprisal_bits);
    entropy.push_back(row.entropy_bits);
  }
  if (set.rows.size() >= 3) {
    try {
      const SpearmanResult rs = Spearman(entropy, surprisal);
      report.spearman_rho = rs.rho;
      report.spearman_p = rs.p_value;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kDegenerateRanks) throw;
    }
  }

  for (const ModelSpec &spec : specs) {
    try {
      report.models.push_back(FitModel(set.rows, spec));
    } catch (const Error &e) {
      if (strict) throw;
      ModelReport failed;
      failed.spec = spec;
      failed.family = spec.outcome == Outcome::kType ? "multinomial" : "linear";
      failed.error_code = std::string(ErrorCodeName(e.code()));
      failed.error_message = e.what();
      report.models.push_back(std::move(failed));
    }
  }
  return report;
}

namespace {

json TestToJson(const NestedTest &test) {
  json value = {{"kind", test.kind},
                {"dropped", test.dropped},
                {"statistic", test.statistic},
                {"df", test.df},
                {"p", test.p}};
  if (test.kind == "F") value["df2"] = test.df2;
  return value;
}

}  // namespace

std::string AnalysisReportToJson(const AnalysisReport &report,
                                 const std::string &config_hash,
                                 const std::string &tool_version) {
  json excluded = json::object();
  for (const auto &[reason, count] : report.excluded) {
    excluded[std::string(ExclusionReasonName(reason))] = count;
  }
  json by_type = json::object();
  for (int t = 0; t < kNumCoarseTypes; ++t) {
    by_type[std::string(CoarseTypeName(static_cast<CoarseType>(t)))] =
        report.rows_by_type[t];
  }
  json models = json::array();
  for (const ModelReport &model : report.models) {
    json predictors = json::array();
    for (Predictor p : model.spec.predictors) predictors.push_back(PredictorName(p));
    json m = {{"name", model.spec.name},
              {"family", model.family},
              {"outcome", OutcomeName(model.spec.outcome)},
              {"predictors", predictors},
              {"non_pronominal_only", model.spec.non_pronominal_only}};
    if (!model.error_code.empty()) {
      m["error"] = {{"code", model.error_code}, {"message", model.error_message}};
      models.push_back(m);
      continue;
    }
    m["n"] = model.n;
    json coefs = json::array();
    for (const CoefficientRow &c : model.coefficients) {
      json row = {{"term", c.term},
                  {"estimate", c.estimate},
                  {"se", c.se},
                  {model.family == "linear" ? "t" : "z", c.statistic},
                  {"p", c.p}};
      if (!c.outcome_class.empty()) row["class"] = c.outcome_class;
      coefs.push_back(row);
    }
    m["coefficients"] = coefs;
    json tests = json::array();
    for (const NestedTest &t : model.tests) tests.push_back(TestToJson(t));
    m["tests"] = tests;
    if (model.family == "multinomial") {
      m["loglik"] = model.loglik;
      m["deviance"] = model.deviance;
    } else {
      m["rss"] = model.rss;
      m["r2"] = model.r2;
    }
    models.push_back(m);
  }
  json value = {{"config_hash", config_hash},
                {"tool_version", tool_version},
                {"rows", report.rows},
                {"rows_by_type", by_type},
                {"excluded", excluded},
                {"parse_unavailable", report.parse_unavailable},
                {"models", models}};
  if (report.spearman_rho.has_value()) {
    value["entropy_surprisal_spearman"] = {{"rho", *report.spearman_rho},
                                           {"p", *report.spearman_p}};
  }
  return value.dump(2) + "\n";
}

std::string AnalysisReportToMarkdown(const AnalysisReport &report) {
  using internal::FormatFixed;
  std::ostringstream out;
  out << "# Mention form analysis\n\n";
  out << report.rows << " mentions (" << report.rows_by_type[0] << " pronouns, "
      << report.rows_by_type[1] << " proper names, " << report.rows_by_type[2]
      << " full NPs).\n";
  if (report.spearman_rho.has_value()) {
    out << "\nSpearman correlation of entropy and surprisal: rho = "
        << FormatFixed(*report.spearman_rho, 3) << ", p = "
        << FormatFixed(*report.spearman_p, 4) << ".\n";
  }
  bool multi_df = false;
  for (const ModelReport &model : report.models) {
    out << "\n## " << model.spec.name << "\n\n";
    if (!model.error_code.empty()) {
      out << "Fit failed: `" << model.error_code << "` " << model.error_message << "\n";
      continue;
    }
    const bool linear = model.family == "linear";
    out << "n = " << model.n << ", ";
    if (linear) {
      out << "R^2 = " << FormatFixed(model.r2, 3) << "\n\n";
      out << "| term | beta | s.e. | t | p |\n|---|---|---|---|---|\n";
    } else {
      out << "deviance = " << FormatFixed(model.deviance, 2) << "\n\n";
      out << "| class | term | beta | s.e. | z | p |\n|---|---|---|---|---|---|\n";
    }
    for (const CoefficientRow &c : model.coefficients) {
      out << "| ";
      if (!linear) out << c.outcome_class << " | ";
      out << c.term << " | " << FormatFixed(c.estimate, 3) << (c.p < 0.05 ? "*" : "")
          << " | " << FormatFixed(c.se, 3) << " | " << FormatFixed(c.statistic, 2)
          << " | " << FormatFixed(c.p, 4) << " |\n";
    }
    out << "\n| dropped | " << (linear ? "F" : "LR chi^2") << " | df | p |\n"
        << "|---|---|---|---|\n";
    for (const NestedTest &t : model.tests) {
      std::string df = FormatFixed(t.df, 0);
      if (linear) df += ", " + FormatFixed(t.df2, 0);
      if (!linear && t.df > 2) {
        df += " [a]";
        multi_df = true;
      }
      out << "| " << t.dropped << " | " << FormatFixed(t.statistic, 2)
          << (t.p < 0.05 ? "*" : "") << " | " << df << " | " << FormatFixed(t.p, 4)
          << " |\n";
    }
  }
  out << "\n\\* p < .05\n";
  if (multi_df) {
    out << "\n[a] Degrees of freedom count every removed parameter: a three-level "
           "term in a three-class model removes four.\n";
  }
  return out.str();
}

}  // namespace maskcoref
