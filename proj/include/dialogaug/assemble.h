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

// Corpus-level orchestration. Every dialogue is emitted once as "original"
// followed by whole-dialogue copies per method:
//
//   synonym        k_synonym copies
//   stopword       1 copy
//   backtranslate  one copy per pivot language
//   paraphrase     k_paraphrase copies
//
// With the defaults (4, 1, zh/ja/fr/de, 4) the output is 14x the input.
// Targeted utterances that cannot be rewritten keep their original text, so
// the multiplicity holds unconditionally.
//
// Augmenting machine utterances (machine_only, user_and_machine) is
// supported for ablations; it is known to hurt downstream dialogue models.

#ifndef DIALOGAUG_ASSEMBLE_H_
#define DIALOGAUG_ASSEMBLE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dialogaug/corpus.h"
#include "dialogaug/lexres.h"
#include "dialogaug/sentaug.h"
#include "dialogaug/wordaug.h"
#include "json.hpp"

namespace dialogaug {

enum class Target { kUserOnly, kMachineOnly, kUserAndMachine };

std::string_view TargetName(Target t);
Target ParseTarget(std::string_view name);

struct AugmentPlan {
  std::vector<Method> methods{Method::kSynonym, Method::kStopword, Method::kBacktranslate,
                              Method::kParaphrase};
  Target target = Target::kUserOnly;
  uint64_t seed = 0;
  PivotSet pivots;
  int k_synonym = 4;
  int k_paraphrase = 4;
  // Paraphrase decoding. Sampling by default so the copies differ.
  bool paraphrase_greedy = false;
  double paraphrase_temperature = 1.0;
  // Worker threads; output does not depend on it.
  int jobs = 1;
};

// Throws ArgumentError.
void ValidatePlan(const AugmentPlan& plan);

// Copies of each dialogue the plan produces, excluding the original.
int CopiesPerDialogue(const AugmentPlan& plan);

struct Resources {
  const PosLexicon* poslex = nullptr;
  const SynonymLexicon* synonyms = nullptr;  // required for synonym
  const StopList* stop = nullptr;            // required for stopword
};

struct AugmentResult {
  Corpus corpus;
  int64_t fallbacks = 0;
  int64_t no_eligible = 0;  // synonym copies of utterances without eligible words
  // Tokens skipped because their lexicon entry has a different POS than
  // their tag, counted once per targeted utterance.
  int64_t pos_mismatch = 0;
};

// `client` is required when the plan contains backtranslate or paraphrase.
// Missing resources throw ArgumentError before any work starts.
AugmentResult AugmentCorpus(const Corpus& corpus, const AugmentPlan& plan,
                            const Resources& resources, RewriteClient* client);

struct MethodStats {
  int64_t dialogues = 0;
  int64_t utterances = 0;  // rewritten (targeted) utterances
  int64_t fallbacks = 0;
  int64_t duplicates = 0;  // targeted utterances identical to their source
  double duplicate_rate() const {
    return utterances == 0 ? 0.0 : static_cast<double>(duplicates) / static_cast<double>(utterances);
  }
};

struct StatsReport {
  int64_t dialogues = 0;
  // Keys: original, synonym, stopword, backtranslate, paraphrase.
  std::map<std::string, MethodStats> methods;
  int64_t vocab_before = 0;
  int64_t vocab_after = 0;
  double mean_length_before = 0.0;
  double mean_length_after = 0.0;
};

StatsReport Stats(const Corpus& corpus);
nlohmann::json ToJson(const StatsReport& report);
std::string FormatStats(const StatsReport& report);

}  // namespace dialogaug

#endif  // DIALOGAUG_ASSEMBLE_H_
