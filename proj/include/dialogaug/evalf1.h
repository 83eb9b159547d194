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

// Success F1 over requested slots.
//
// For every turn and every slot the user requested:
//   TP  answered in the hypothesis and in the reference response
//   FP  answered in the hypothesis only
//   FN  answered in the reference only
// Counts are summed over the corpus (micro average) and
//   P = TP / (TP + FP),  R = TP / (TP + FN),  F1 = 2PR / (P + R)
// with every 0/0 defined as 0.

#ifndef DIALOGAUG_EVALF1_H_
#define DIALOGAUG_EVALF1_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialogaug/corpus.h"
#include "json.hpp"

namespace dialogaug {

struct EvalCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn_ = 0;

  EvalCounts& operator+=(const EvalCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn_ += o.fn_;
    return *this;
  }
  friend EvalCounts operator+(EvalCounts a, const EvalCounts& b) { return a += b; }
  bool operator==(const EvalCounts&) const = default;
};

struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  EvalCounts counts;
};

EvalResult Score(const EvalCounts& counts);

using KbValues = std::map<std::string, std::vector<std::string>>;

// Loads {slot: [values]} from a JSON file.
KbValues LoadKbValues(const std::filesystem::path& path);

// Requestable slots answered by `response`: the delexicalized token "<slot>"
// or any known value of the slot on token boundaries, longest match first.
std::set<std::string> DetectAnswered(std::string_view response, const Ontology& ontology,
                                     const KbValues& kb_values);

// Throws ValidationError when a requested slot is not requestable.
EvalCounts ScoreTurn(std::string_view hyp, std::string_view ref,
                     const std::vector<std::string>& requested, const Ontology& ontology,
                     const KbValues& kb_values);

struct TurnJudgement {
  std::string dialogue_id;
  int turn = 0;
  std::vector<std::string> requested;
  std::set<std::string> answered_in_hyp;
  std::set<std::string> answered_in_ref;
};

EvalCounts CountJudgement(const TurnJudgement& j);
EvalResult ScoreJudgements(const std::vector<TurnJudgement>& judgements);

// (dialogue id, turn index) -> response, from JSON lines
// {"dialogue_id": str, "turn": int, "response": str}.
using Hypotheses = std::map<std::pair<std::string, int>, std::string>;
Hypotheses ParseHypotheses(std::string_view jsonl, std::string_view origin = "<memory>");
Hypotheses LoadHypotheses(const std::filesystem::path& path);

// Scores every turn of `ref` against the machine responses in `hyp`.
// Throws ValidationError listing every missing (dialogue, turn).
EvalResult ScoreCorpus(const Hypotheses& hyp, const Corpus& ref, const Ontology& ontology,
                       const KbValues& kb_values);

nlohmann::json ToJson(const EvalResult& result);
// Text table with the columns F1, Precision, Recall, TP, FP, FN.
std::string FormatReport(const EvalResult& result, std::string_view label = "hypothesis");

}  // namespace dialogaug

#endif  // DIALOGAUG_EVALF1_H_
