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

// Lexical resources: the synonym lexicon, the stop-word list and the
// lexicon-based coarse POS tagger that decides which words may be replaced.

#ifndef DIALOGAUG_LEXRES_H_
#define DIALOGAUG_LEXRES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialogaug/corpus.h"

namespace dialogaug {

enum class PosTag { kNoun, kPropn, kVerb, kModal, kAdj, kAdv, kPron, kDet, kStop, kOther };

std::string_view PosTagName(PosTag tag);
// Accepts the upper-case names returned by PosTagName. Case-insensitive.
std::optional<PosTag> ParsePosTag(std::string_view name);

// (surface form, POS) -> sorted synonym list. Only NOUN, VERB, ADJ and ADV
// entries exist; a lemma is never listed as its own synonym and no list is
// empty.
class SynonymLexicon {
 public:
  // Adds synonyms for (lemma, pos). Self-synonyms, duplicates and
  // non-content POS are dropped silently.
  void Add(std::string_view lemma, PosTag pos, std::span<const std::string> synonyms);

  // Empty span when there is no entry.
  std::span<const std::string> Lookup(std::string_view lemma, PosTag pos) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::map<std::pair<std::string, PosTag>, std::vector<std::string>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::pair<std::string, PosTag>, std::vector<std::string>> entries_;
};

enum class SynonymFormat { kTsv, kWordNetDb };

// tsv: one "lemma<TAB>POS<TAB>syn1|syn2|..." row per line; '#' starts a
// comment line. wordnet_db: a directory holding data.{noun,verb,adj,adv} and,
// optionally, the matching index.* files.
//
// Throws ParseError for an unknown POS string (with line number) and
// ValidationError when the resulting lexicon is empty.
SynonymLexicon LoadSynonyms(const std::filesystem::path& path, SynonymFormat format);
SynonymLexicon ParseSynonymTsv(std::string_view text, std::string_view origin = "<memory>");

class StopList {
 public:
  StopList() = default;
  explicit StopList(std::set<std::string> words) : words_(std::move(words)) {}

  bool Contains(std::string_view word) const { return words_.find(std::string(word)) != words_.end(); }
  size_t size() const { return words_.size(); }
  const std::set<std::string>& words() const { return words_; }

 private:
  std::set<std::string> words_;
};

// One word per line. Words equal to an informable ontology value are
// dropped and appended to `removed` when given. Throws IoError or
// ValidationError (no usable words).
StopList LoadStopList(const std::filesystem::path& path, const Ontology& ontology,
                      std::vector<std::string>* removed = nullptr);
StopList ParseStopList(std::string_view text, const Ontology& ontology,
                       std::vector<std::string>* removed = nullptr,
                       std::string_view origin = "<memory>");

// Word -> tag map plus closed-class lists (DET, PRON, MODAL, PROPN). Closed
// classes are disjoint and take priority over the general map. Unknown words
// tag as OTHER.
class PosLexicon {
 public:
  // DET/PRON/MODAL/PROPN go to the closed-class lists, every other tag to
  // the general map. Throws ValidationError if `word` is already in a
  // different closed class.
  void Add(std::string_view word, PosTag tag);

  PosTag Tag(std::string_view word) const;

  bool IsClosedClass(std::string_view word) const;
  const std::map<PosTag, std::set<std::string>>& closed_class() const { return closed_; }
  const std::map<std::string, PosTag>& general() const { return tags_; }

 private:
  std::map<std::string, PosTag> tags_;
  std::map<PosTag, std::set<std::string>> closed_;
};

bool IsClosedClassTag(PosTag tag);

// "word<TAB>TAG" per line, '#' comments allowed. Unknown tags are a
// ParseError with the line number.
PosLexicon LoadPosLexicon(const std::filesystem::path& path);
PosLexicon ParsePosLexicon(std::string_view text, std::string_view origin = "<memory>");

// One tag per token, deterministic and total.
std::vector<PosTag> Tag(std::span<const std::string> tokens, const PosLexicon& poslex);

}  // namespace dialogaug

#endif  // DIALOGAUG_LEXRES_H_
