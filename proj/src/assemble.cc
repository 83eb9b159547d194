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

#include "dialogaug/assemble.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "dialogaug/errors.h"
#include "dialogaug/text.h"

namespace dialogaug {
namespace {

constexpr std::array<Method, 4> kCanonicalOrder = {Method::kSynonym, Method::kStopword,
                                                   Method::kBacktranslate, Method::kParaphrase};

std::vector<Speaker> TargetSides(Target t) {
  switch (t) {
    case Target::kUserOnly:
      return {Speaker::kUser};
    case Target::kMachineOnly:
      return {Speaker::kMachine};
    case Target::kUserAndMachine:
      return {Speaker::kUser, Speaker::kMachine};
  }
  return {Speaker::kUser};
}

std::string_view SideName(Speaker s) { return s == Speaker::kUser ? "user" : "machine"; }

bool PlanHas(const AugmentPlan& plan, Method m) {
  return std::find(plan.methods.begin(), plan.methods.end(), m) != plan.methods.end();
}

int CopiesFor(const AugmentPlan& plan, Method m) {
  switch (m) {
    case Method::kSynonym:
      return plan.k_synonym;
    case Method::kStopword:
      return 1;
    case Method::kBacktranslate:
      return static_cast<int>(plan.pivots.langs.size());
    case Method::kParaphrase:
      return plan.k_paraphrase;
  }
  return 0;
}

struct Rewrite {
  std::string text;
  bool fallback = false;
  bool no_eligible = false;
};

struct Counters {
  int64_t fallbacks = 0;
  int64_t no_eligible = 0;
  int64_t pos_mismatch = 0;
};

// rewrites[copy][turn * sides + side]
using RewriteTable = std::vector<std::vector<Rewrite>>;

class DialogueAugmenter {
 public:
  DialogueAugmenter(const AugmentPlan& plan, const Resources& resources, const SlotMatcher& matcher,
                    SentenceAugmenter* sentences)
      : plan_(plan),
        resources_(resources),
        matcher_(matcher),
        sentences_(sentences),
        sides_(TargetSides(plan.target)) {}

  std::vector<Dialogue> Run(const Dialogue& base, Counters* counters) {
    std::vector<TokenizedUtterance> tus;
    for (const Turn& turn : base.turns) {
      for (Speaker side : sides_) {
        tus.push_back(TokenizeAndProtect(turn.utterance(side), turn, matcher_, *resources_.poslex));
      }
    }

    std::vector<Dialogue> out;
    Dialogue original = base;
    original.provenance = Provenance{"original", 0, {}};
    out.push_back(std::move(original));

    for (Method m : kCanonicalOrder) {
      if (!PlanHas(plan_, m)) continue;
      const int copies = CopiesFor(plan_, m);
      RewriteTable table(static_cast<size_t>(copies), std::vector<Rewrite>(tus.size()));
      for (size_t u = 0; u < tus.size(); ++u) {
        const int turn = static_cast<int>(u / sides_.size());
        const Speaker side = sides_[u % sides_.size()];
        Fill(m, base.id, turn, side, tus[u], table, u, counters);
      }
      for (int v = 0; v < copies; ++v) {
        Dialogue copy = base;
        int64_t copy_fallbacks = 0;
        for (size_t u = 0; u < tus.size(); ++u) {
          const Rewrite& r = table[static_cast<size_t>(v)][u];
          Turn& turn = copy.turns[u / sides_.size()];
          turn.utterance(sides_[u % sides_.size()]).text = r.text;
          if (r.fallback) ++copy_fallbacks;
          if (r.no_eligible) ++counters->no_eligible;
        }
        counters->fallbacks += copy_fallbacks;
        copy.id = base.id + "#" + std::string(MethodName(m)) + std::to_string(v + 1);
        Provenance p{std::string(MethodName(m)), v + 1, {}};
        p.meta["base_id"] = base.id;
        p.meta["target"] = std::string(TargetName(plan_.target));
        p.meta["fallbacks"] = std::to_string(copy_fallbacks);
        if (m == Method::kBacktranslate) p.meta["pivot"] = plan_.pivots.langs[static_cast<size_t>(v)];
        copy.provenance = std::move(p);
        out.push_back(std::move(copy));
      }
    }
    return out;
  }

 private:
  uint64_t SubSeed(const std::string& id, int turn, Speaker side, Method m, int variant) const {
    const std::string t = std::to_string(turn);
    const std::string v = std::to_string(variant);
    const std::array<std::string_view, 5> parts = {id, t, SideName(side), MethodName(m), v};
    return DeriveSeed(plan_.seed, parts);
  }

  void Fill(Method m, const std::string& id, int turn, Speaker side, const TokenizedUtterance& tu,
            RewriteTable& table, size_t u, Counters* counters) {
    const Rewrite keep{tu.source_text, true, false};
    switch (m) {
      case Method::kSynonym: {
        std::vector<size_t> mismatch;
        EligiblePositions(tu, *resources_.synonyms, &mismatch);
        counters->pos_mismatch += static_cast<int64_t>(mismatch.size());
        for (int v = 0; v < plan_.k_synonym; ++v) {
          std::mt19937_64 rng(SubSeed(id, turn, side, m, v + 1));
          auto variants = SynonymVariants(tu, *resources_.synonyms, 1, rng);
          table[static_cast<size_t>(v)][u] =
              variants.empty() ? Rewrite{tu.source_text, true, true}
                               : Rewrite{std::move(variants.front().text), false, false};
        }
        break;
      }
      case Method::kStopword: {
        auto variant = StopwordVariant(tu, *resources_.stop);
        table[0][u] = variant ? Rewrite{std::move(variant->text), false, false} : keep;
        break;
      }
      case Method::kBacktranslate:
        for (size_t v = 0; v < plan_.pivots.langs.size(); ++v) {
          Variant variant =
              sentences_->Backtranslate(tu, plan_.pivots.langs[v], static_cast<int>(v) + 1);
          table[v][u] = {std::move(variant.text), variant.meta["fallback"] == "1", false};
        }
        break;
      case Method::kParaphrase: {
        Sampling sampling;
        sampling.greedy = plan_.paraphrase_greedy;
        sampling.temperature = plan_.paraphrase_temperature;
        // Kept well below INT64_MAX so seed + i cannot overflow.
        sampling.seed = static_cast<int64_t>(SubSeed(id, turn, side, m, 0) >> 2);
        auto variants = sentences_->Paraphrase(tu, plan_.k_paraphrase, sampling);
        for (size_t v = 0; v < variants.size(); ++v) {
          table[v][u] = {std::move(variants[v].text), variants[v].meta["fallback"] == "1", false};
        }
        break;
      }
    }
  }

  const AugmentPlan& plan_;
  const Resources& resources_;
  const SlotMatcher& matcher_;
  SentenceAugmenter* sentences_;
  std::vector<Speaker> sides_;
};

}  // namespace

std::string_view TargetName(Target t) {
  switch (t) {
    case Target::kUserOnly:
      return "user_only";
    case Target::kMachineOnly:
      return "machine_only";
    case Target::kUserAndMachine:
      return "user_and_machine";
  }
  return "user_only";
}

Target ParseTarget(std::string_view name) {
  const std::string n = ToLower(Trim(name));
  for (Target t : {Target::kUserOnly, Target::kMachineOnly, Target::kUserAndMachine}) {
    if (n == TargetName(t)) return t;
  }
  throw ArgumentError("unknown target '" + std::string(name) +
                      "' (expected user_only, machine_only or user_and_machine)");
}

void ValidatePlan(const AugmentPlan& plan) {
  if (plan.methods.empty()) throw ArgumentError("augmentation plan has no methods");
  std::set<Method> seen;
  for (Method m : plan.methods) {
    if (!seen.insert(m).second) {
      throw ArgumentError("method '" + std::string(MethodName(m)) + "' listed twice");
    }
  }
  if (plan.k_synonym < 1) throw ArgumentError("k_synonym must be >= 1");
  if (plan.k_paraphrase < 1) throw ArgumentError("k_paraphrase must be >= 1");
  if (!(plan.paraphrase_temperature > 0.0)) {
    throw ArgumentError("paraphrase temperature must be > 0");
  }
  if (plan.jobs < 1) throw ArgumentError("jobs must be >= 1");
  if (PlanHas(plan, Method::kBacktranslate)) ValidatePivots(plan.pivots);
}

int CopiesPerDialogue(const AugmentPlan& plan) {
  int n = 0;
  for (Method m : kCanonicalOrder) {
    if (PlanHas(plan, m)) n += CopiesFor(plan, m);
  }
  return n;
}

AugmentResult AugmentCorpus(const Corpus& corpus, const AugmentPlan& plan,
                            const Resources& resources, RewriteClient* client) {
  ValidatePlan(plan);
  if (!resources.poslex) throw ArgumentError("a POS lexicon is required");
  if (PlanHas(plan, Method::kSynonym) && !resources.synonyms) {
    throw ArgumentError("synonym augmentation requires a synonym lexicon");
  }
  if (PlanHas(plan, Method::kStopword) && !resources.stop) {
    throw ArgumentError("stop-word deletion requires a stop list");
  }
  const bool needs_backend =
      PlanHas(plan, Method::kBacktranslate) || PlanHas(plan, Method::kParaphrase);
  if (needs_backend && !client) {
    throw ArgumentError("back-translation and paraphrasing require a rewrite backend");
  }

  const SlotMatcher matcher(corpus.ontology);
  std::optional<SentenceAugmenter> sentences;
  if (client) sentences.emplace(*client);

  const size_t n = corpus.dialogues.size();
  std::vector<std::vector<Dialogue>> results(n);
  std::vector<Counters> counters(n);
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    DialogueAugmenter augmenter(plan, resources, matcher, sentences ? &*sentences : nullptr);
    for (size_t i = next++; i < n; i = next++) {
      try {
        results[i] = augmenter.Run(corpus.dialogues[i], &counters[i]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  const size_t threads = std::min<size_t>(static_cast<size_t>(plan.jobs), std::max<size_t>(n, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  AugmentResult result;
  result.corpus.ontology = corpus.ontology;
  result.corpus.source = CorpusFormat::kNormalized;
  result.corpus.dialogues.reserve(n * static_cast<size_t>(1 + CopiesPerDialogue(plan)));
  for (size_t i = 0; i < n; ++i) {
    for (Dialogue& d : results[i]) result.corpus.dialogues.push_back(std::move(d));
    result.fallbacks += counters[i].fallbacks;
    result.no_eligible += counters[i].no_eligible;
    result.pos_mismatch += counters[i].pos_mismatch;
  }
  return result;
}

StatsReport Stats(const Corpus& corpus) {
  StatsReport report;
  report.dialogues = static_cast<int64_t>(corpus.dialogues.size());
  for (std::string_view name : {"original", "synonym", "stopword", "backtranslate", "paraphrase"}) {
    report.methods[std::string(name)];
  }

  std::unordered_map<std::string, const Dialogue*> by_id;
  for (const Dialogue& d : corpus.dialogues) by_id.emplace(d.id, &d);

  std::set<std::string> vocab_before, vocab_after;
  int64_t tokens_before = 0, utts_before = 0, tokens_after = 0, utts_after = 0;

  for (const Dialogue& d : corpus.dialogues) {
    const bool original = !d.provenance || d.provenance->method == "original";
    const std::string method = original ? "original" : d.provenance->method;
    MethodStats& ms = report.methods[method];
    ++ms.dialogues;

    for (const Turn& t : d.turns) {
      for (const Utterance* u : {&t.user, &t.machine}) {
        const auto toks = Tokenize(u->text);
        tokens_after += static_cast<int64_t>(toks.size());
        ++utts_after;
        vocab_after.insert(toks.begin(), toks.end());
        if (original) {
          tokens_before += static_cast<int64_t>(toks.size());
          ++utts_before;
          vocab_before.insert(toks.begin(), toks.end());
        }
      }
    }
    if (original) continue;

    const auto& meta = d.provenance->meta;
    if (auto it = meta.find("fallbacks"); it != meta.end()) {
      ms.fallbacks += std::strtoll(it->second.c_str(), nullptr, 10);
    }
    const auto base_it = meta.find("base_id");
    if (base_it == meta.end()) continue;
    const auto base = by_id.find(base_it->second);
    if (base == by_id.end() || base->second->turns.size() != d.turns.size()) continue;
    const auto target_it = meta.find("target");
    const Target target =
        target_it == meta.end() ? Target::kUserOnly : ParseTarget(target_it->second);
    for (size_t t = 0; t < d.turns.size(); ++t) {
      for (Speaker side : TargetSides(target)) {
        ++ms.utterances;
        if (TokenizedForm(d.turns[t].utterance(side).text) ==
            TokenizedForm(base->second->turns[t].utterance(side).text)) {
          ++ms.duplicates;
        }
      }
    }
  }
  report.vocab_before = static_cast<int64_t>(vocab_before.size());
  report.vocab_after = static_cast<int64_t>(vocab_after.size());
  report.mean_length_before =
      utts_before == 0 ? 0.0 : static_cast<double>(tokens_before) / static_cast<double>(utts_before);
  report.mean_length_after =
      utts_after == 0 ? 0.0 : static_cast<double>(tokens_after) / static_cast<double>(utts_after);
  return report;
}

nlohmann::json ToJson(const StatsReport& report) {
  nlohmann::json methods = nlohmann::json::object();
  for (const auto& [name, ms] : report.methods) {
    methods[name] = {{"dialogues", ms.dialogues},
                     {"utterances", ms.utterances},
                     {"fallbacks", ms.fallbacks},
                     {"duplicates", ms.duplicates},
                     {"duplicate_rate", ms.duplicate_rate()}};
  }
  return {{"dialogues", report.dialogues},
          {"methods", methods},
          {"vocab_before", report.vocab_before},
          {"vocab_after", report.vocab_after},
          {"mean_length_before", report.mean_length_before},
          {"mean_length_after", report.mean_length_after}};
}

std::string FormatStats(const StatsReport& report) {
  std::ostringstream out;
  char line[160];
  out << "dialogues: " << report.dialogues << "\n";
  std::snprintf(line, sizeof(line), "%-14s %10s %11s %10s %10s\n", "method", "dialogues",
                "utterances", "fallbacks", "dup_rate");
  out << line;
  for (const auto& [name, ms] : report.methods) {
    std::snprintf(line, sizeof(line), "%-14s %10lld %11lld %10lld %9.1f%%\n", name.c_str(),
                  static_cast<long long>(ms.dialogues), static_cast<long long>(ms.utterances),
                  static_cast<long long>(ms.fallbacks), 100.0 * ms.duplicate_rate());
    out << line;
  }
  std::snprintf(line, sizeof(line), "vocabulary: %lld -> %lld\n",
                static_cast<long long>(report.vocab_before),
                static_cast<long long>(report.vocab_after));
  out << line;
  std::snprintf(line, sizeof(line), "mean utterance length: %.3f -> %.3f tokens\n",
                report.mean_length_before, report.mean_length_after);
  out << line;
  return out.str();
}

}  // namespace dialogaug
