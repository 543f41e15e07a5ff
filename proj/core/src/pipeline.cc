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

#include "maskcoref/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "json_internal.h"
#include "maskcoref/error.h"
#include "maskcoref/report.h"
#include "text_util.h"

namespace maskcoref {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

uint64_t RequireSeed(const RunConfig &config, std::string_view what) {
  if (!config.seed.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " is stochastic and needs --seed");
  }
  return *config.seed;
}

std::string FileHash(const std::string &path) {
  return internal::Hex64(internal::Fnv1a(ReadFile(path)));
}

json Stamp(const RunConfig &config) {
  return {{"config_hash", config.Hash()}, {"tool_version", kToolVersion}};
}

// Documents in id order, the deterministic merge order.
std::vector<const Document *> SortedDocuments(const Corpus &corpus) {
  std::vector<const Document *> docs;
  for (const Document &doc : corpus.documents()) docs.push_back(&doc);
  std::sort(docs.begin(), docs.end(), [](const Document *a, const Document *b) {
    return a->doc_id() < b->doc_id();
  });
  return docs;
}

// Runs fn(i) for i in [0, n) on `workers` threads. The exception of the
// lowest failing index is rethrown so failures do not depend on scheduling.
template <typename Fn>
void ParallelFor(int n, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(workers, 1, std::max(n, 1));
  if (threads == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(run);
    for (std::thread &t : pool) t.join();
  }
  for (const std::exception_ptr &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// The target's entity if a mention of it is visible, else a new entity.
int TrueReferent(const Document &doc, const std::vector<int> &candidates, int target) {
  const int entity = doc.mention(target).entity_id;
  for (int c : candidates) {
    if (c != kNoneCandidate && doc.mention(c).entity_id == entity) return entity;
  }
  return kNewEntity;
}

json PrfJson(const Prf &prf) {
  json value = {{"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
  if (prf.degenerate) value["degenerate"] = true;
  return value;
}

json TallyJson(const Tally &tally) {
  json value = PrfJson(tally.ToPrf());
  value["correct"] = tally.correct;
  value["predicted"] = tally.predicted;
  value["gold"] = tally.gold;
  return value;
}

json GroupJson(const GroupTallies &group) {
  json coarse = json::object(), fine = json::object();
  for (int t = 0; t < kNumCoarseTypes; ++t) {
    coarse[std::string(CoarseTypeName(static_cast<CoarseType>(t)))] =
        TallyJson(group.coarse[t]);
  }
  for (int t = 0; t < kNumFineTypes; ++t) {
    fine[std::string(FineTypeName(static_cast<FineType>(t)))] = TallyJson(group.fine[t]);
  }
  return {{"overall", TallyJson(group.overall)}, {"coarse", coarse}, {"fine", fine}};
}

json GroupPrfJson(const GroupPrf &group) {
  json coarse = json::object(), fine = json::object();
  for (int t = 0; t < kNumCoarseTypes; ++t) {
    coarse[std::string(CoarseTypeName(static_cast<CoarseType>(t)))] =
        PrfJson(group.coarse[t]);
  }
  for (int t = 0; t < kNumFineTypes; ++t) {
    fine[std::string(FineTypeName(static_cast<FineType>(t)))] = PrfJson(group.fine[t]);
  }
  return {{"overall", PrfJson(group.overall)}, {"coarse", coarse}, {"fine", fine}};
}

}  // namespace

ScorerSpec ScorerSpec::Parse(std::string_view text) {
  const size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "scorer must be baseline:KIND, shallow:PATH or external:PATH, got '" +
                    std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  ScorerSpec spec;
  if (kind == "baseline") {
    std::optional<BaselineKind> baseline = ParseBaselineKind(arg);
    if (!baseline.has_value()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown baseline '" + std::string(arg) +
                      "' (expected random, previous or none)");
    }
    spec.kind = Kind::kBaseline;
    spec.baseline = *baseline;
  } else if ((kind == "shallow" || kind == "external") && !arg.empty()) {
    spec.kind = kind == "shallow" ? Kind::kShallow : Kind::kExternal;
    spec.path = std::string(arg);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "bad scorer '" + std::string(text) + "'");
  }
  return spec;
}

std::string ScorerSpec::ToString() const {
  switch (kind) {
    case Kind::kBaseline: {
      switch (baseline) {
        case BaselineKind::kRandom: return "baseline:random";
        case BaselineKind::kPreviousMention: return "baseline:previous";
        case BaselineKind::kNoAntecedent: return "baseline:none";
      }
      break;
    }
    case Kind::kShallow: return "shallow:" + path;
    case Kind::kExternal: return "external:" + path;
  }
  return "";
}

std::string RunConfig::CanonicalJson() const {
  json input_list = json::array();
  for (const std::string &path : inputs) {
    input_list.push_back({{"path", path}, {"fnv1a", FileHash(path)}});
  }
  json scorer_json = {{"spec", scorer.ToString()}};
  if (!scorer.path.empty()) scorer_json["fnv1a"] = FileHash(scorer.path);
  json value = {{"inputs", input_list},
                {"gold_boundaries", gold_boundaries},
                {"mask_window", mask_window},
                {"mask_tokens", mask_tokens},
                {"mask_fraction", mask_fraction},
                {"iterations", iterations},
                {"seed", seed.has_value() ? json(*seed) : json(nullptr)},
                {"scorer", scorer_json},
                {"prev_subject",
                 prev_subject == PrevSubjectMode::kClause ? "clause" : "sentence"},
                {"strict_analysis", strict_analysis}};
  return value.dump();
}

std::string RunConfig::Hash() const {
  return internal::Hex64(internal::Fnv1a(CanonicalJson()));
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string &path, std::string_view contents) {
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

Corpus LoadCorpus(const std::vector<std::string> &paths) {
  if (paths.empty()) throw Error(ErrorCode::kInvalidArgument, "no input files");
  Corpus corpus;
  for (const std::string &path : paths) {
    if (fs::path(path).extension() == ".json") {
      corpus.Merge(CorpusFromJson(ReadFile(path)));
    } else {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
      corpus.Merge(ParseConll(in, path));
    }
  }
  return corpus;
}

IngestSummary CmdIngest(const std::vector<std::string> &conll_paths,
                        const std::string &out_path) {
  Corpus corpus = LoadCorpus(conll_paths);
  WriteFile(out_path, CorpusToJson(corpus) + "\n");
  return {corpus.size(), corpus.num_mentions(), corpus.num_entities()};
}

LoadedScorer LoadScorer(const ScorerSpec &spec, const Corpus &corpus,
                        bool gold_boundaries, uint64_t seed) {
  LoadedScorer loaded;
  switch (spec.kind) {
    case ScorerSpec::Kind::kBaseline:
      loaded.scorer = std::make_unique<BaselineScorer>(spec.baseline, seed);
      break;
    case ScorerSpec::Kind::kShallow:
      loaded.scorer =
          std::make_unique<ShallowScorer>(ShallowWeightsFromJson(ReadFile(spec.path)));
      break;
    case ScorerSpec::Kind::kExternal: {
      std::ifstream in(spec.path);
      if (!in) throw Error(ErrorCode::kIo, "cannot read " + spec.path);
      loaded.table = std::make_unique<ExternalScoreTable>(LoadExternalScores(in, corpus));
      auto scorer = std::make_unique<ExternalScorer>(loaded.table.get(), gold_boundaries);
      loaded.external = scorer.get();
      loaded.scorer = std::move(scorer);
      break;
    }
  }
  return loaded;
}

DocumentResult ProcessDocument(const Document &doc, const LoadedScorer &loaded,
                               const RunConfig &config) {
  DocumentResult result;
  const SyntaxIndex syntax(doc);
  const MaskPlan plan = PlanPartition(doc, config.mask_window);
  result.variants = static_cast<int>(plan.subsets.size());

  // Scores a target, or returns nullopt for a prediction missing from an
  // external file in predicted-boundary mode.
  auto score = [&](const ScoringContext &context, int target,
                   const std::vector<int> &candidates)
      -> std::optional<AntecedentDistribution> {
    if (loaded.external != nullptr && !config.gold_boundaries &&
        !loaded.external->Has(context, target)) {
      return std::nullopt;
    }
    return loaded.scorer->Score(context, target, candidates);
  };

  struct Pending {
    int mention;
    bool masked;
    PredictabilityRecord record;
    std::array<double, 3> split;
  };
  std::vector<Pending> pending;
  auto record = [&](const AntecedentDistribution &dist, const std::vector<int> &candidates,
                    int target, bool masked) {
    const EntityDistribution entities = ComputeEntityDistribution(dist, doc);
    const int truth = TrueReferent(doc, candidates, target);
    Pending p{target, masked,
              MakePredictabilityRecord({doc.doc_id(), target}, entities, truth, masked),
              {0.0, 0.0, 0.0}};
    for (const auto &[entity, prob] : entities.probs) {
      if (entity == truth) {
        p.split[0] += prob;
      } else if (entity == kNewEntity) {
        p.split[2] += prob;
      } else {
        p.split[1] += prob;
      }
    }
    pending.push_back(std::move(p));
  };

  // Unmasked document.
  const MaskView none = MaskView::None(doc);
  std::vector<int> antecedent(doc.num_mentions(), kNoneCandidate);
  ScoringContext context{&doc, &none, kUnmaskedVariant, &syntax};
  for (int t = 0; t < doc.num_mentions(); ++t) {
    const std::vector<int> candidates = CandidateSet(doc, t, none);
    const std::optional<AntecedentDistribution> dist = score(context, t, candidates);
    TallyPrediction(doc, none, t, dist ? &*dist : nullptr, result.eval);
    if (!dist) continue;
    antecedent[t] = dist->Argmax();
    record(*dist, candidates, t, false);
  }
  result.clusters = CountClusters(GoldClusters(doc), ClustersFromAntecedents(antecedent));

  // One variant per plan subset; only the masked mentions are targets.
  for (size_t s = 0; s < plan.subsets.size(); ++s) {
    const MaskView view = MaskView::FromMasked(doc, plan.subsets[s]);
    ScoringContext masked_context{&doc, &view, static_cast<int>(s), &syntax};
    for (int t : plan.subsets[s]) {
      const std::vector<int> candidates = CandidateSet(doc, t, view);
      const std::optional<AntecedentDistribution> dist =
          score(masked_context, t, candidates);
      TallyPrediction(doc, view, t, dist ? &*dist : nullptr, result.eval);
      if (dist) record(*dist, candidates, t, true);
    }
  }

  // Random mask samples, masked jointly without the partition constraints.
  if (loaded.external == nullptr && !MaskableMentions(doc).empty()) {
    const std::vector<std::vector<int>> samples = SampleMask(
        doc, config.mask_fraction, RequireSeed(config, "sampled evaluation"),
        config.iterations);
    for (size_t it = 0; it < samples.size(); ++it) {
      const MaskView view = MaskView::FromMasked(doc, samples[it]);
      ScoringContext sample_context{&doc, &view, -2 - static_cast<int>(it), &syntax};
      AntecedentEval eval;
      for (int t : samples[it]) {
        const std::vector<int> candidates = CandidateSet(doc, t, view);
        const AntecedentDistribution dist =
            loaded.scorer->Score(sample_context, t, candidates);
        TallyPrediction(doc, view, t, &dist, eval);
      }
      result.sampled.push_back(eval);
    }
  }

  std::stable_sort(pending.begin(), pending.end(), [](const Pending &a, const Pending &b) {
    return std::tie(a.mention, a.masked) < std::tie(b.mention, b.masked);
  });
  for (Pending &p : pending) {
    result.records.push_back(std::move(p.record));
    result.splits.push_back(p.split);
    result.features.push_back(
        ComputeShallowFeatures(doc, syntax, p.mention, config.prev_subject));
    result.parse_unavailable.push_back(
        syntax.Flags(p.mention, config.prev_subject).parse_unavailable);
  }
  return result;
}

namespace {

std::string PredictabilityCsv(const Corpus &corpus,
                              const std::vector<const Document *> &docs,
                              const std::vector<DocumentResult> &results,
                              const RunConfig &config) {
  std::string out = "# config_hash=" + config.Hash() +
                    " tool_version=" + std::string(kToolVersion) + "\n";
  out +=
      "doc_id,mention_index,coarse_type,fine_type,len_tokens,len_chars,"
      "surprisal_bits,entropy_bits,clipped,distance,frequency,ant_prev_subj,"
      "ment_subj,ant_type,is_masked_eval\n";
  (void)corpus;
  for (size_t d = 0; d < docs.size(); ++d) {
    const Document &doc = *docs[d];
    const DocumentResult &r = results[d];
    for (size_t i = 0; i < r.records.size(); ++i) {
      const PredictabilityRecord &rec = r.records[i];
      const Mention &m = doc.mention(rec.mention.mention_index);
      const std::optional<ShallowFeatures> &f = r.features[i];
      std::string id = doc.doc_id();
      if (id.find_first_of(",\"") != std::string::npos) id = "\"" + id + "\"";
      out += id + "," + std::to_string(rec.mention.mention_index) + "," +
             std::string(CoarseTypeName(m.coarse_type)) + "," +
             std::string(FineTypeName(m.fine_type)) + "," +
             std::to_string(m.length_tokens) + "," +
             std::to_string(m.length_chars_nospace) + "," +
             internal::FormatDouble(rec.surprisal_bits) + "," +
             internal::FormatDouble(rec.entropy_bits) + "," +
             (rec.clipped ? "1" : "0") + ",";
      if (f.has_value()) {
        out += std::to_string(f->distance_sentences) + "," +
               std::to_string(f->frequency) + ",";
        if (r.parse_unavailable[i]) {
          out += "NA,NA,";
        } else {
          out += std::string(f->antecedent_prev_subject ? "1" : "0") + "," +
                 (f->mention_is_subject ? "1" : "0") + ",";
        }
        out += std::string(CoarseTypeName(f->antecedent_type));
      } else {
        out += "NA,NA,NA,NA,NA";
      }
      out += std::string(",") + (rec.masked ? "1" : "0") + "\n";
    }
  }
  return out;
}

struct FigureOutput {
  std::string name;
  FigureSpec spec;
  DataTable table;
  std::vector<std::string> comments;
};

std::vector<FigureOutput> BuildFigures(const GroupTallies &masked,
                                       const GroupTallies &unmasked,
                                       const std::optional<AnalysisSet> &set,
                                       const std::vector<DocumentResult> &results,
                                       json &skipped) {
  std::vector<FigureOutput> figures;

  auto bars = [&](const std::string &name, bool fine) {
    FigureOutput fig;
    fig.name = name;
    std::vector<std::string> type, group;
    std::vector<double> precision, count;
    const int n = fine ? kNumFineTypes : kNumCoarseTypes;
    for (int t = 0; t < n; ++t) {
      const std::string label =
          fine ? std::string(FineTypeName(static_cast<FineType>(t)))
               : std::string(CoarseTypeName(static_cast<CoarseType>(t)));
      for (int g = 0; g < 2; ++g) {
        const Tally &tally = fine ? (g ? unmasked : masked).fine[t]
                                  : (g ? unmasked : masked).coarse[t];
        type.push_back(label);
        group.push_back(g ? "unmasked" : "masked");
        precision.push_back(tally.ToPrf().precision);
        count.push_back(tally.predicted);
      }
    }
    fig.table.AddText("type", type);
    fig.table.AddText("condition", group);
    fig.table.AddNumeric("precision", precision);
    fig.table.AddNumeric("predicted", count);
    fig.comments = {"Antecedent precision by mention type.",
                    "type: mention type; condition: masked or unmasked target;",
                    "precision: share of predictions naming a true antecedent (0 when "
                    "no predictions); predicted: number of predictions."};
    fig.spec.kind = FigureKind::kBars;
    fig.spec.title = fine ? "Antecedent precision by fine mention type"
                          : "Antecedent precision by mention type";
    fig.spec.x_label = "mention type";
    fig.spec.y_label = "precision";
    fig.spec.category_column = "type";
    fig.spec.value_column = "precision";
    fig.spec.group_column = "condition";
    figures.push_back(std::move(fig));
  };
  bars("precision_by_type", false);
  bars("precision_by_fine_type", true);

  if (set.has_value() && !set->rows.empty()) {
    FigureOutput box;
    box.name = "surprisal_by_type";
    std::vector<std::string> type;
    std::vector<double> surprisal, length;
    for (const FeatureRow &row : set->rows) {
      type.push_back(std::string(CoarseTypeName(row.outcome_type)));
      surprisal.push_back(row.surprisal_bits);
      length.push_back(row.outcome_len_tokens);
    }
    box.table.AddText("type", type);
    box.table.AddNumeric("surprisal_bits", surprisal);
    box.comments = {"Masked surprisal of the analysis-set mentions by mention type.",
                    "type: mention type; surprisal_bits: -log2 P(true referent).",
                    "The y axis is clipped at the 95th percentile."};
    box.spec.kind = FigureKind::kBox;
    box.spec.title = "Surprisal by mention type";
    box.spec.x_label = "mention type";
    box.spec.y_label = "surprisal (bits)";
    box.spec.category_column = "type";
    box.spec.value_column = "surprisal_bits";
    box.spec.clip_quantile = 0.95;
    figures.push_back(std::move(box));

    if (set->rows.size() >= 10) {
      FigureOutput scatter;
      scatter.name = "surprisal_vs_length";
      scatter.table.AddNumeric("length_tokens", length);
      scatter.table.AddNumeric("surprisal_bits", surprisal);
      scatter.comments = {
          "Mention length against masked surprisal for the analysis set.",
          "length_tokens: mention length in tokens; surprisal_bits: -log2 P(true "
          "referent).",
          "The line is a local linear tricube smoother with span 0.3."};
      scatter.spec.kind = FigureKind::kScatterSmooth;
      scatter.spec.title = "Mention length and surprisal";
      scatter.spec.x_label = "surprisal (bits)";
      scatter.spec.y_label = "length (tokens)";
      scatter.spec.x_column = "surprisal_bits";
      scatter.spec.value_column = "length_tokens";
      figures.push_back(std::move(scatter));
    } else {
      skipped.push_back({{"name", "surprisal_vs_length"},
                         {"reason", "fewer than 10 analysis rows"}});
    }
  } else {
    skipped.push_back({{"name", "surprisal_by_type"}, {"reason", "no analysis rows"}});
    skipped.push_back({{"name", "surprisal_vs_length"}, {"reason", "no analysis rows"}});
  }

  FigureOutput ternary;
  ternary.name = "probability_split";
  std::vector<double> p_true, p_other, p_new;
  for (const DocumentResult &r : results) {
    for (size_t i = 0; i < r.records.size(); ++i) {
      if (!r.records[i].masked) continue;
      p_true.push_back(r.splits[i][0]);
      p_other.push_back(r.splits[i][1]);
      p_new.push_back(r.splits[i][2]);
    }
  }
  if (!p_true.empty()) {
    ternary.table.AddNumeric("p_true", p_true);
    ternary.table.AddNumeric("p_other", p_other);
    ternary.table.AddNumeric("p_new", p_new);
    ternary.comments = {
        "Division of referent probability for masked mentions.",
        "p_true: the true referent (new entity for first mentions); p_other: other "
        "entities; p_new: a new entity when that is not the truth."};
    ternary.spec.kind = FigureKind::kTernary;
    ternary.spec.title = "Referent probability split (masked)";
    ternary.spec.ternary = {"p_true", "p_other", "p_new"};
    ternary.spec.corner_labels = {"true", "other", "new"};
    figures.push_back(std::move(ternary));
  } else {
    skipped.push_back({{"name", "probability_split"}, {"reason", "no masked records"}});
  }
  return figures;
}

}  // namespace

PipelineSummary CmdPipeline(const RunConfig &config) {
  if (config.mask_tokens != 1 && config.mask_tokens != 3) {
    throw Error(ErrorCode::kInvalidArgument, "--mask-tokens must be 1 or 3");
  }
  if (config.iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--iterations must be at least 1");
  }
  if (config.out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required");
  const uint64_t seed = RequireSeed(config, "the pipeline");
  const Corpus corpus = LoadCorpus(config.inputs);
  const LoadedScorer loaded =
      LoadScorer(config.scorer, corpus, config.gold_boundaries, seed);
  const std::vector<const Document *> docs = SortedDocuments(corpus);
  const std::string hash = config.Hash();

  std::vector<DocumentResult> results(docs.size());
  ParallelFor(static_cast<int>(docs.size()), config.workers, [&](int i) {
    results[i] = ProcessDocument(*docs[i], loaded, config);
  });

  PipelineSummary summary;
  summary.config_hash = hash;
  summary.documents = static_cast<int>(docs.size());
  AntecedentEval eval;
  ClusterCounts clusters;
  std::vector<AntecedentEval> sampled(config.iterations);
  std::vector<PredictabilityRecord> records;
  bool have_samples = false;
  for (const DocumentResult &r : results) {
    eval += r.eval;
    clusters += r.clusters;
    summary.variants += r.variants;
    for (size_t it = 0; it < r.sampled.size(); ++it) sampled[it] += r.sampled[it];
    have_samples = have_samples || !r.sampled.empty();
    records.insert(records.end(), r.records.begin(), r.records.end());
  }
  summary.records = static_cast<int>(records.size());
  summary.masked = eval.masked.overall.ToPrf();
  summary.unmasked = eval.unmasked.overall.ToPrf();

  const fs::path out(config.out_dir);
  json config_json = json::parse(config.CanonicalJson());
  config_json.update(Stamp(config));
  WriteFile((out / "config.json").string(), config_json.dump(2) + "\n");

  // eval.json
  const ClusterScores coref = ScoreClusters(clusters);
  json eval_json = Stamp(config);
  eval_json["scorer"] = config.scorer.ToString();
  eval_json["gold_boundaries"] = config.gold_boundaries;
  eval_json["documents"] = summary.documents;
  eval_json["variants"] = summary.variants;
  eval_json["antecedent"] = {{"masked", GroupJson(eval.masked)},
                             {"unmasked", GroupJson(eval.unmasked)}};
  eval_json["coreference_unmasked"] = {{"muc", PrfJson(coref.muc)},
                                       {"b3", PrfJson(coref.b3)},
                                       {"ceafe", PrfJson(coref.ceafe)},
                                       {"conll", PrfJson(coref.conll)}};
  if (have_samples) {
    std::vector<GroupPrf> runs;
    for (const AntecedentEval &e : sampled) runs.push_back(ToGroupPrf(e.masked));
    json per_iteration = json::array();
    for (const GroupPrf &run : runs) per_iteration.push_back(PrfJson(run.overall));
    eval_json["sampled"] = {{"fraction", config.mask_fraction},
                            {"iterations", config.iterations},
                            {"mean", GroupPrfJson(MeanGroupPrf(runs))},
                            {"per_iteration", per_iteration}};
  } else {
    eval_json["sampled"] = nullptr;
    if (loaded.external != nullptr) {
      summary.warnings.push_back(
          "sampled evaluation skipped: external scores cover plan variants only");
    }
  }
  WriteFile((out / "eval.json").string(), eval_json.dump(2) + "\n");

  WriteFile((out / "predictability.csv").string(),
            PredictabilityCsv(corpus, docs, results, config));

  // Regressions on masked predictability.
  std::optional<AnalysisSet> set;
  json analysis_json;
  std::string analysis_md;
  try {
    set = FilterAnalysisSet(corpus, records, config.prev_subject);
    const AnalysisReport report = RunAnalysis(*set, StandardModels(), config.strict_analysis);
    analysis_json = json::parse(AnalysisReportToJson(report, hash, kToolVersion));
    analysis_md = AnalysisReportToMarkdown(report);
  } catch (const Error &e) {
    if (config.strict_analysis || e.category() != ErrorCategory::kNumerical) throw;
    analysis_json = Stamp(config);
    analysis_json["error"] = {{"code", ErrorCodeName(e.code())}, {"message", e.what()}};
    if (set.has_value()) analysis_json["rows"] = set->rows.size();
    analysis_md = "# Mention form analysis\n\nNot fitted: `" +
                  std::string(ErrorCodeName(e.code())) + "` " + e.what() + "\n";
    summary.warnings.push_back("analysis not fitted: " + std::string(e.what()));
  }
  WriteFile((out / "analysis.json").string(), analysis_json.dump(2) + "\n");
  WriteFile((out / "analysis.md").string(), analysis_md);

  json skipped = json::array();
  json listed = json::array();
  for (FigureOutput &fig : BuildFigures(eval.masked, eval.unmasked, set, results, skipped)) {
    fig.comments.push_back("config_hash=" + hash + " tool_version=" + kToolVersion);
    WriteFile((out / "figures" / (fig.name + ".svg")).string(), RenderSvg(fig.spec, fig.table));
    WriteFile((out / "figures" / (fig.name + ".csv")).string(), fig.table.ToCsv(fig.comments));
    listed.push_back({{"name", fig.name},
                      {"svg", fig.name + ".svg"},
                      {"csv", fig.name + ".csv"}});
  }
  json manifest = Stamp(config);
  manifest["figures"] = listed;
  manifest["skipped"] = skipped;
  WriteFile((out / "figures" / "manifest.json").string(), manifest.dump(2) + "\n");
  return summary;
}

std::string SafeFileName(std::string_view doc_id) {
  std::string out;
  for (char c : doc_id) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') {
      out += c;
    } else if (c == '/') {
      out += "__";
    } else {
      out += '_';
    }
  }
  return out;
}

MaskExportSummary CmdMask(const RunConfig &config) {
  if (config.out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required");
  const Corpus corpus = LoadCorpus(config.inputs);
  const std::string hash = config.Hash();
  const fs::path out(config.out_dir);
  MaskExportSummary summary;
  for (const Document *doc : SortedDocuments(corpus)) {
    const MaskPlan plan = PlanPartition(*doc, config.mask_window);
    const std::string base = SafeFileName(doc->doc_id());
    json plan_json = json::parse(MaskPlanToJson(plan));
    plan_json.update(Stamp(config));
    WriteFile((out / (base + ".plan.json")).string(), plan_json.dump(2) + "\n");

    auto export_variant = [&](const std::vector<int> &mask_set, int index,
                              const std::vector<int> &targets, const std::string &stem) {
      const MaskedVariant variant =
          EmitMaskSet(*doc, mask_set, index, config.mask_tokens);
      const MaskView view = mask_set.empty() ? MaskView::None(*doc)
                                             : MaskView::FromMasked(*doc, mask_set);
      json map = json::parse(VariantIndexMapJson(variant));
      json target_list = json::array();
      for (int t : targets) {
        std::vector<int> candidates;
        for (int c : CandidateSet(*doc, t, view)) {
          if (c != kNoneCandidate) candidates.push_back(c);
        }
        target_list.push_back(
            {{"target", t}, {"masked", view.is_masked(t)}, {"candidates", candidates}});
      }
      map["targets"] = target_list;
      map.update(Stamp(config));
      WriteFile((out / (stem + ".txt")).string(), VariantText(variant));
      WriteFile((out / (stem + ".map.json")).string(), map.dump(2) + "\n");
      ++summary.variants;
    };

    std::vector<int> all(doc->num_mentions());
    for (int i = 0; i < doc->num_mentions(); ++i) all[i] = i;
    export_variant({}, kUnmaskedVariant, all, base + ".unmasked");
    for (size_t s = 0; s < plan.subsets.size(); ++s) {
      export_variant(plan.subsets[s], static_cast<int>(s), plan.subsets[s],
                     base + ".v" + std::to_string(s));
    }
    ++summary.documents;
  }
  return summary;
}

ShallowTrainResult CmdTrain(const RunConfig &config, const ShallowTrainConfig &train,
                            const std::string &weights_out) {
  ShallowTrainConfig effective = train;
  effective.seed = RequireSeed(config, "training");
  const Corpus corpus = LoadCorpus(config.inputs);
  const ShallowTrainResult result = TrainShallowScorer(corpus, effective);
  json weights = json::parse(ShallowWeightsToJson(result));
  weights.update(Stamp(config));
  WriteFile(weights_out, weights.dump(2) + "\n");
  return result;
}

HumanComparison CmdHumanCompare(const RunConfig &config, const std::string &guesses,
                                const std::string &out_path) {
  const uint64_t seed = config.seed.value_or(0);
  const Corpus corpus = LoadCorpus(config.inputs);
  std::ifstream in(guesses);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + guesses);
  const std::vector<HumanGuessSet> humans = LoadHumanGuesses(in, corpus);
  const LoadedScorer loaded =
      LoadScorer(config.scorer, corpus, config.gold_boundaries, seed);

  std::map<MentionRef, EntityDistribution> model;
  std::map<std::string, MaskPlan> plans;
  for (const HumanGuessSet &h : humans) {
    const Document &doc = corpus.Get(h.doc_id);
    auto [it, inserted] = plans.try_emplace(h.doc_id);
    if (inserted) it->second = PlanPartition(doc, config.mask_window);
    const MaskPlan &plan = it->second;
    int subset = -1;
    for (size_t s = 0; s < plan.subsets.size() && subset < 0; ++s) {
      if (std::binary_search(plan.subsets[s].begin(), plan.subsets[s].end(),
                             h.mention_index)) {
        subset = static_cast<int>(s);
      }
    }
    if (subset < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  h.doc_id + ": mention " + std::to_string(h.mention_index) +
                      " is embedded and never masked");
    }
    const SyntaxIndex syntax(doc);
    const MaskView view = MaskView::FromMasked(doc, plan.subsets[subset]);
    const ScoringContext context{&doc, &view, subset, &syntax};
    const std::vector<int> candidates = CandidateSet(doc, h.mention_index, view);
    const AntecedentDistribution dist =
        loaded.scorer->Score(context, h.mention_index, candidates);
    model[{h.doc_id, h.mention_index}] = ComputeEntityDistribution(dist, doc);
  }
  const HumanComparison comparison = CompareToHumans(model, humans, corpus);
  json value = Stamp(config);
  value["scorer"] = config.scorer.ToString();
  value["n"] = comparison.n;
  value["mean_jsd"] = comparison.mean_jsd;
  value["accuracy"] = comparison.accuracy;
  value["relative_accuracy"] = comparison.relative_accuracy;
  WriteFile(out_path, value.dump(2) + "\n");
  return comparison;
}

}  // namespace maskcoref
