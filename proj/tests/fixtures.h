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

// Test-only fixtures: synthetic corpora in the shape of CamRest676 and
// KVRET, small lexicons, temporary directories, and the brute-force oracles
// the augmenters are checked against.

#ifndef DIALOGAUG_TESTS_FIXTURES_H_
#define DIALOGAUG_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "dialogaug/corpus.h"
#include "dialogaug/lexres.h"
#include "dialogaug/wordaug.h"

namespace dialogaug {

// gtest printers.
void PrintTo(const SlotValue& sv, std::ostream* os);
void PrintTo(const Turn& turn, std::ostream* os);
void PrintTo(const Dialogue& d, std::ostream* os);

}  // namespace dialogaug

namespace dialogaug::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Restaurant-search ontology: food / pricerange / area informable,
// address / phone / postcode / name / food / area / pricerange requestable.
Ontology RestaurantOntology();

// `n` restaurant dialogues of 2-5 turns generated from templates with a
// fixed seed. Contains multi-word values ("asian oriental", "modern
// european") and turns that request slots.
Corpus SyntheticRestaurantCorpus(int n, uint64_t seed = 7);

// In-car assistant dialogues across schedule / weather / navigate.
Corpus SyntheticKvretCorpus(int n, uint64_t seed = 11);

// Raw CamRest676 / KVRET JSON for a normalized corpus (inverse adapters).
std::string ToCamRestJson(const Corpus& corpus);
std::string ToKvretJson(const Corpus& corpus);

// Reference corpus plus JSONL hypotheses whose requested-slot judgements add
// up to exactly (tp, fp, fn). Also contains turns that request nothing and
// requested slots answered by neither side, which must not count.
struct EvalFixture {
  Corpus reference;
  std::string hypotheses_jsonl;
};
EvalFixture CountsFixture(int64_t tp, int64_t fp, int64_t fn);

// The bundled lexicons under data/.
std::filesystem::path DataDir();
PosLexicon BundledPosLexicon();
SynonymLexicon BundledSynonyms();
StopList BundledStopList(const Ontology& ontology);

// 30-entry lexicon used by the synonym oracle suite.
SynonymLexicon ThirtyEntryLexicon();

// Every rule-conformant single substitution of `tu` under `lex`: one
// unprotected VERB/ADJ/NOUN token replaced by a same-POS synonym.
// Enumerates the lexicon's raw entries, independent of EligiblePositions.
std::set<std::string> AllSingleSubstitutions(const TokenizedUtterance& tu,
                                              const SynonymLexicon& lex);

// True iff `sub` is a strict subsequence of `seq`.
bool IsStrictSubsequence(const std::vector<std::string>& sub,
                         const std::vector<std::string>& seq);

// Contiguous occurrences of `needle` in `hay` (token level).
int CountOccurrences(const std::vector<std::string>& hay, const std::vector<std::string>& needle);

}  // namespace dialogaug::testing

#endif  // DIALOGAUG_TESTS_FIXTURES_H_
