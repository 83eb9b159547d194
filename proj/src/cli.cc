//
// Copyright 2026 The DialogAug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dialogaug/cli.h"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dialogaug/assemble.h"
#include "dialogaug/corpus.h"
#include "dialogaug/errors.h"
#include "dialogaug/evalf1.h"
#include "dialogaug/lexres.h"
#include "dialogaug/sentaug.h"
#include "dialogaug/text.h"
#include "json.hpp"

#ifndef DIALOGAUG_DATA_DIR
#define DIALOGAUG_DATA_DIR "data"
#endif

namespace dialogaug {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string DataFile(const char* name) {
  const char* env = std::getenv("DIALOGAUG_DATA_DIR");
  return (fs::path(env && *env ? env : DIALOGAUG_DATA_DIR) / name).string();
}

// Fills options that were not given on the command line from a JSON object
// keyed by long flag name. Command-line values always win.
void ApplyConfigFile(CLI::App& cmd, const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": invalid JSON config: " + e.what());
  }
  if (!j.is_object()) throw ParseError(path + ": config must be a JSON object");
  for (auto& [key, value] : j.items()) {
    CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ValidationError(path + ": unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    std::vector<std::string> results;
    auto scalar = [&](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      return v.dump();
    };
    if (value.is_null()) continue;
    if (value.is_array()) {
      for (const json& v : value) results.push_back(scalar(v));
    } else {
      results.push_back(scalar(value));
    }
    opt->clear();
    for (const std::string& r : results) opt->add_result(r);
    opt->run_callback();
  }
}

void RequireFlag(const std::string& value, const char* flag) {
  if (value.empty()) throw ArgumentError(std::string("missing required option ") + flag);
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(dir.string() + ": cannot create output directory");
  }
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string input;
  std::string format = "normalized";
  std::string output;
  std::string ontology;
};

int CmdIngest(const IngestArgs& a, std::ostream& out) {
  RequireFlag(a.input, "--input");
  RequireFlag(a.output, "--output");
  IngestOptions opts;
  if (!a.ontology.empty()) opts.ontology_path = a.ontology;
  const Corpus corpus = Ingest(a.input, ParseCorpusFormat(a.format), opts);
  Emit(corpus, a.output);
  out << "ingested " << corpus.dialogues.size() << " dialogues from " << a.input << " ("
      << CorpusFormatName(corpus.source) << ") -> " << a.output << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- augment

struct AugmentArgs {
  std::string input;
  std::string format = "normalized";
  std::vector<std::string> methods{"synonym", "stopword", "backtranslate", "paraphrase"};
  std::string target = "user_only";
  uint64_t seed = 0;
  std::vector<std::string> pivots{"zh", "ja", "fr", "de"};
  int k_synonym = 4;
  int k_paraphrase = 4;
  bool paraphrase_greedy = false;
  double temperature = 1.0;
  std::string backend_url;
  std::string mock_backend;
  std::string mock_map;
  int timeout_ms = 10000;
  int max_retries = 3;
  int max_inflight = 4;
  int backoff_ms = 200;
  std::string synonyms = DataFile("synonyms.tsv");
  std::string synonyms_format = "tsv";
  std::string stopwords = DataFile("stopwords_en.txt");
  std::string poslex = DataFile("poslex.tsv");
  std::string output_dir;
  int jobs = 1;
};

// Everything that influences the output. Execution-only settings (jobs,
// output directory, the config path itself) are left out so that the echo
// is identical for runs that differ only in parallelism or destination.
json ResolvedConfig(const AugmentArgs& a) {
  json j = {{"input", a.input},
            {"format", a.format},
            {"methods", a.methods},
            {"target", a.target},
            {"seed", a.seed},
            {"pivots", a.pivots},
            {"k-synonym", a.k_synonym},
            {"k-paraphrase", a.k_paraphrase},
            {"paraphrase-greedy", a.paraphrase_greedy},
            {"temperature", a.temperature},
            {"synonyms", a.synonyms},
            {"synonyms-format", a.synonyms_format},
            {"stopwords", a.stopwords},
            {"poslex", a.poslex}};
  if (!a.mock_backend.empty()) {
    j["mock-backend"] = a.mock_backend;
    if (!a.mock_map.empty()) j["mock-map"] = a.mock_map;
  } else if (!a.backend_url.empty()) {
    j["backend-url"] = a.backend_url;
    j["timeout-ms"] = a.timeout_ms;
    j["max-retries"] = a.max_retries;
    j["max-inflight"] = a.max_inflight;
    j["backoff-ms"] = a.backoff_ms;
  }
  return j;
}

int CmdAugment(AugmentArgs a, std::ostream& out, std::ostream& err) {
  RequireFlag(a.input, "--input");
  RequireFlag(a.output_dir, "--output-dir");

  AugmentPlan plan;
  plan.methods.clear();
  for (const std::string& m : a.methods) plan.methods.push_back(ParseMethod(m));
  plan.target = ParseTarget(a.target);
  plan.seed = a.seed;
  plan.pivots.langs = a.pivots;
  plan.k_synonym = a.k_synonym;
  plan.k_paraphrase = a.k_paraphrase;
  plan.paraphrase_greedy = a.paraphrase_greedy;
  plan.paraphrase_temperature = a.temperature;
  plan.jobs = a.jobs;
  ValidatePlan(plan);

  auto has = [&](Method m) {
    return std::find(plan.methods.begin(), plan.methods.end(), m) != plan.methods.end();
  };
  const bool needs_backend = has(Method::kBacktranslate) || has(Method::kParaphrase);
  if (needs_backend && a.mock_backend.empty() && a.backend_url.empty()) {
    if (const char* env = std::getenv("DIALOGAUG_BACKEND_URL"); env && *env) {
      a.backend_url = env;
    } else {
      throw ArgumentError(
          "back-translation/paraphrasing need --backend-url, DIALOGAUG_BACKEND_URL or "
          "--mock-backend");
    }
  }

  // Inputs and resources are loaded before anything is written.
  const Corpus corpus = Ingest(a.input, ParseCorpusFormat(a.format));
  const PosLexicon poslex = LoadPosLexicon(a.poslex);
  std::optional<SynonymLexicon> synonyms;
  std::optional<StopList> stop;
  if (has(Method::kSynonym)) {
    const SynonymFormat fmt =
        ToLower(a.synonyms_format) == "wordnet_db" ? SynonymFormat::kWordNetDb : SynonymFormat::kTsv;
    synonyms = LoadSynonyms(a.synonyms, fmt);
  }
  if (has(Method::kStopword)) {
    std::vector<std::string> removed;
    stop = LoadStopList(a.stopwords, corpus.ontology, &removed);
    for (const std::string& w : removed) {
      err << "warning: stop word '" << w << "' is an ontology value and was removed\n";
    }
  }

  std::unique_ptr<RewriteBackend> backend;
  std::optional<RewriteClient> client;
  BackendConfig bc;
  bc.endpoint = a.backend_url;
  bc.timeout = std::chrono::milliseconds(a.timeout_ms);
  bc.max_retries = a.max_retries;
  bc.max_inflight = a.max_inflight;
  bc.backoff_base = std::chrono::milliseconds(a.backoff_ms);
  const bool use_http = needs_backend && a.mock_backend.empty();
  if (needs_backend) {
    if (!a.mock_backend.empty()) {
      std::map<std::string, std::string> word_map;
      if (!a.mock_map.empty()) word_map = LoadWordMap(a.mock_map);
      backend = std::make_unique<MockBackend>(ParseMockMode(a.mock_backend), std::move(word_map));
    } else {
      backend = std::make_unique<HttpBackend>(bc.endpoint, bc.timeout);
    }
    client.emplace(*backend, bc);
  }

  const fs::path dir(a.output_dir);
  EnsureDir(dir);
  const fs::path cache_path = dir / "rewrite_cache.json";
  if (use_http) client->LoadCache(cache_path);

  Resources res;
  res.poslex = &poslex;
  res.synonyms = synonyms ? &*synonyms : nullptr;
  res.stop = stop ? &*stop : nullptr;
  const AugmentResult result = AugmentCorpus(corpus, plan, res, client ? &*client : nullptr);

  Emit(result.corpus, dir / "corpus.json");
  const StatsReport stats = Stats(result.corpus);
  WriteFile(dir / "stats.json", ToJson(stats).dump(2) + "\n");
  WriteFile(dir / "stats.txt", FormatStats(stats));
  WriteFile(dir / "config.json", ResolvedConfig(a).dump(2) + "\n");
  if (use_http) client->SaveCache(cache_path);

  out << "augmented " << corpus.dialogues.size() << " -> " << result.corpus.dialogues.size()
      << " dialogues (" << result.fallbacks << " fallbacks) in " << dir.string() << "\n";
  if (result.pos_mismatch > 0) {
    err << "note: " << result.pos_mismatch
        << " token(s) had synonyms only under another part of speech and were skipped\n";
  }
  if (client && client->failures() > 0) {
    err << "warning: " << client->failures() << " backend request(s) failed after retries\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string hyp;
  std::string ref;
  std::string ref_format = "normalized";
  std::string ontology;
  std::string kb;
  std::string report;
  std::string label = "hypothesis";
};

int CmdEval(const EvalArgs& a, std::ostream& out) {
  RequireFlag(a.hyp, "--hyp");
  RequireFlag(a.ref, "--ref");
  const Corpus ref = Ingest(a.ref, ParseCorpusFormat(a.ref_format));
  const Ontology ontology = a.ontology.empty() ? ref.ontology : LoadOntology(a.ontology);
  KbValues kb;
  if (!a.kb.empty()) kb = LoadKbValues(a.kb);
  // Requestable slots that are also informable (food, area, ...) are
  // recognised by their ontology values as well.
  for (const std::string& slot : ontology.requestable) {
    if (auto it = ontology.informable.find(slot); it != ontology.informable.end()) {
      auto& vals = kb[slot];
      vals.insert(vals.end(), it->second.begin(), it->second.end());
    }
  }
  const Hypotheses hyp = LoadHypotheses(a.hyp);
  const EvalResult result = ScoreCorpus(hyp, ref, ontology, kb);
  out << FormatReport(result, a.label);
  if (!a.report.empty()) WriteFile(a.report, ToJson(result).dump(2) + "\n");
  return kExitOk;
}

// ----------------------------------------------------------------- stats

struct StatsArgs {
  std::string input;
  std::string json_out;
};

int CmdStats(const StatsArgs& a, std::ostream& out) {
  RequireFlag(a.input, "--input");
  const Corpus corpus = Ingest(a.input, CorpusFormat::kNormalized);
  const StatsReport report = Stats(corpus);
  out << FormatStats(report);
  if (!a.json_out.empty()) WriteFile(a.json_out, ToJson(report).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slot-preserving augmentation and Success F1 evaluation for dialogue corpora",
               "dialogaug"};
  app.require_subcommand(1);

  std::string ingest_config, augment_config, eval_config, stats_config;

  IngestArgs ia;
  CLI::App* ingest = app.add_subcommand("ingest", "Normalize a CamRest676/KVRET/normalized file");
  ingest->add_option("--input", ia.input, "Source dataset file");
  ingest->add_option("--format", ia.format, "camrest676 | kvret | normalized")->capture_default_str();
  ingest->add_option("--output", ia.output, "Normalized JSON output");
  ingest->add_option("--ontology", ia.ontology, "Ontology JSON (optional)");
  ingest->add_option("--config", ingest_config, "JSON config file");

  AugmentArgs aa;
  CLI::App* augment = app.add_subcommand("augment", "Build an augmented training corpus");
  augment->add_option("--input", aa.input, "Normalized corpus");
  augment->add_option("--format", aa.format, "Input format")->capture_default_str();
  augment->add_option("--methods", aa.methods, "synonym,stopword,backtranslate,paraphrase")
      ->delimiter(',')
      ->capture_default_str();
  augment->add_option("--target", aa.target, "user_only | machine_only | user_and_machine")
      ->capture_default_str();
  augment->add_option("--seed", aa.seed, "Master seed")->capture_default_str();
  augment->add_option("--pivots", aa.pivots, "Back-translation pivot languages")
      ->delimiter(',')
      ->capture_default_str();
  augment->add_option("--k-synonym", aa.k_synonym, "Synonym copies")->capture_default_str();
  augment->add_option("--k-paraphrase", aa.k_paraphrase, "Paraphrase copies")
      ->capture_default_str();
  augment->add_option("--paraphrase-greedy", aa.paraphrase_greedy, "Greedy paraphrase decoding")
      ->capture_default_str();
  augment->add_option("--temperature", aa.temperature, "Paraphrase sampling temperature")
      ->capture_default_str();
  augment->add_option("--backend-url", aa.backend_url, "Rewrite service endpoint");
  augment->add_option("--mock-backend", aa.mock_backend,
                      "In-process backend: identity | map_on_return_leg | echo_seed | "
                      "drop_placeholders");
  augment->add_option("--mock-map", aa.mock_map, "from<TAB>to word map for the mock backend");
  augment->add_option("--timeout-ms", aa.timeout_ms, "Backend request timeout")
      ->capture_default_str();
  augment->add_option("--max-retries", aa.max_retries, "Retries per backend request")
      ->capture_default_str();
  augment->add_option("--max-inflight", aa.max_inflight, "Concurrent backend requests")
      ->capture_default_str();
  augment->add_option("--backoff-ms", aa.backoff_ms, "Base of the exponential backoff")
      ->capture_default_str();
  augment->add_option("--synonyms", aa.synonyms, "Synonym lexicon")->capture_default_str();
  augment->add_option("--synonyms-format", aa.synonyms_format, "tsv | wordnet_db")
      ->capture_default_str();
  augment->add_option("--stopwords", aa.stopwords, "Stop list")->capture_default_str();
  augment->add_option("--poslex", aa.poslex, "POS lexicon")->capture_default_str();
  augment->add_option("--output-dir", aa.output_dir, "Output directory");
  augment->add_option("--jobs", aa.jobs, "Worker threads")->capture_default_str();
  augment->add_option("--config", augment_config, "JSON config file");

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "Score responses with Success F1");
  eval->add_option("--hyp", ea.hyp, "Hypothesis JSON lines");
  eval->add_option("--ref", ea.ref, "Reference corpus");
  eval->add_option("--ref-format", ea.ref_format, "Reference corpus format")->capture_default_str();
  eval->add_option("--ontology", ea.ontology, "Ontology JSON (default: the reference's)");
  eval->add_option("--kb", ea.kb, "Known slot values {slot: [values]}");
  eval->add_option("--report", ea.report, "JSON report output");
  eval->add_option("--label", ea.label, "Row label in the text report")->capture_default_str();
  eval->add_option("--config", eval_config, "JSON config file");

  StatsArgs sa;
  CLI::App* stats = app.add_subcommand("stats", "Report statistics of a (augmented) corpus");
  stats->add_option("--input", sa.input, "Normalized corpus");
  stats->add_option("--json", sa.json_out, "Also write the report as JSON");
  stats->add_option("--config", stats_config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (ingest->parsed()) {
      if (!ingest_config.empty()) ApplyConfigFile(*ingest, ingest_config);
      return CmdIngest(ia, out);
    }
    if (augment->parsed()) {
      if (!augment_config.empty()) ApplyConfigFile(*augment, augment_config);
      return CmdAugment(aa, out, err);
    }
    if (eval->parsed()) {
      if (!eval_config.empty()) ApplyConfigFile(*eval, eval_config);
      return CmdEval(ea, out);
    }
    if (stats->parsed()) {
      if (!stats_config.empty()) ApplyConfigFile(*stats, stats_config);
      return CmdStats(sa, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace dialogaug
