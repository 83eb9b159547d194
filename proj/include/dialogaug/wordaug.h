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

// Word-level augmentation: tokenization with slot protection, synonym
// substitution and stop-word deletion.

#ifndef DIALOGAUG_WORDAUG_H_
#define DIALOGAUG_WORDAUG_H_

#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dialogaug/corpus.h"
#include "dialogaug/lexres.h"

namespace dialogaug {

enum class Method { kSynonym, kStopword, kBacktranslate, kParaphrase };

std::string_view MethodName(Method m);
// Throws ArgumentError for anything but synonym/stopword/backtranslate/paraphrase.
Method ParseMethod(std::string_view name);

struct TaggedToken {
  std::string surface;
  PosTag pos = PosTag::kOther;
  // Inside a slot-value span. Never modified or deleted by an augmenter.
  bool is_protected = false;

  bool operator==(const TaggedToken&) const = default;
};

// Half-open token range [begin, end).
struct TokenSpan {
  size_t begin = 0;
  size_t end = 0;

  bool operator==(const TokenSpan&) const = default;
};

struct TokenizedUtterance {
  std::vector<TaggedToken> tokens;
  std::string source_text;
  // Protected spans, left to right, non-overlapping.
  std::vector<TokenSpan> spans;
  // Constraint values of the turn that do not occur in the text.
  std::vector<std::string> unmatched_constraints;

  std::vector<std::string> Surfaces() const;
  // Surfaces joined by single spaces.
  std::string Text() const;
  std::string SpanText(const TokenSpan& span) const;
};

struct Variant {
  std::string text;
  Method method = Method::kSynonym;
  int variant_index = 1;
  std::map<std::string, std::string> meta;
};

// Locates slot values in token sequences. Built once per ontology; the
// informable values are pre-tokenized and bucketed by first token.
class SlotMatcher {
 public:
  SlotMatcher() = default;
  explicit SlotMatcher(const Ontology& ontology);

  // Longest value first, then leftmost; accepted matches never overlap.
  // `extra_values` (the turn's constraint values) are matched alongside the
  // ontology values. Values from `extra_values` with no occurrence at all are
  // appended to `unmatched`.
  std::vector<TokenSpan> Match(std::span<const std::string> tokens,
                               std::span<const std::string> extra_values,
                               std::vector<std::string>* unmatched = nullptr) const;

 private:
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> by_first_;
};

TokenizedUtterance TokenizeAndProtect(const Utterance& utt, const Turn& turn,
                                      const SlotMatcher& matcher, const PosLexicon& poslex);
TokenizedUtterance TokenizeAndProtect(const Utterance& utt, const Turn& turn,
                                      const Ontology& ontology, const PosLexicon& poslex);

// Token tags that may be replaced by a synonym.
bool IsSubstitutable(PosTag tag);

// Positions of unprotected VERB/ADJ/NOUN tokens with a same-POS lexicon
// entry. Tokens that have an entry only under another POS are appended to
// `pos_mismatch`.
std::vector<size_t> EligiblePositions(const TokenizedUtterance& tu, const SynonymLexicon& lex,
                                      std::vector<size_t>* pos_mismatch = nullptr);

// k variants, each replacing one uniformly drawn eligible token with a
// uniformly drawn synonym. Sampling is with replacement. Returns an empty
// list when no token is eligible. Throws ArgumentError for k <= 0.
std::vector<Variant> SynonymVariants(const TokenizedUtterance& tu, const SynonymLexicon& lex,
                                     int k, std::mt19937_64& rng);

// Drops every unprotected stop-list token. nullopt when nothing would be
// dropped or nothing would remain.
std::optional<Variant> StopwordVariant(const TokenizedUtterance& tu, const StopList& stop);

}  // namespace dialogaug

#endif  // DIALOGAUG_WORDAUG_H_
