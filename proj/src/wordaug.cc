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

#include "dialogaug/wordaug.h"

#include <algorithm>

#include "dialogaug/errors.h"
#include "dialogaug/text.h"

namespace dialogaug {
namespace {

bool MatchesAt(std::span<const std::string> tokens, size_t start,
               const std::vector<std::string>& value) {
  if (value.empty() || start + value.size() > tokens.size()) return false;
  return std::equal(value.begin(), value.end(), tokens.begin() + static_cast<std::ptrdiff_t>(start));
}

}  // namespace

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kSynonym:
      return "synonym";
    case Method::kStopword:
      return "stopword";
    case Method::kBacktranslate:
      return "backtranslate";
    case Method::kParaphrase:
      return "paraphrase";
  }
  return "synonym";
}

Method ParseMethod(std::string_view name) {
  const std::string n = ToLower(Trim(name));
  for (Method m : {Method::kSynonym, Method::kStopword, Method::kBacktranslate,
                   Method::kParaphrase}) {
    if (n == MethodName(m)) return m;
  }
  throw ArgumentError("unknown augmentation method '" + std::string(name) + "'");
}

std::vector<std::string> TokenizedUtterance::Surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const TaggedToken& t : tokens) out.push_back(t.surface);
  return out;
}

std::string TokenizedUtterance::Text() const {
  const auto s = Surfaces();
  return JoinTokens(s);
}

std::string TokenizedUtterance::SpanText(const TokenSpan& span) const {
  std::string out;
  for (size_t i = span.begin; i < span.end; ++i) {
    if (i > span.begin) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

SlotMatcher::SlotMatcher(const Ontology& ontology) {
  for (const auto& [slot, values] : ontology.informable) {
    for (const std::string& v : values) {
      auto toks = Tokenize(v);
      if (toks.empty()) continue;
      auto& bucket = by_first_[toks.front()];
      if (std::find(bucket.begin(), bucket.end(), toks) == bucket.end()) {
        bucket.push_back(std::move(toks));
      }
    }
  }
}

std::vector<TokenSpan> SlotMatcher::Match(std::span<const std::string> tokens,
                                          std::span<const std::string> extra_values,
                                          std::vector<std::string>* unmatched) const {
  std::vector<std::vector<std::string>> extra;
  for (const std::string& v : extra_values) extra.push_back(Tokenize(v));

  std::vector<TokenSpan> candidates;
  std::vector<bool> extra_found(extra.size(), false);
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (auto it = by_first_.find(tokens[i]); it != by_first_.end()) {
      for (const auto& value : it->second) {
        if (MatchesAt(tokens, i, value)) candidates.push_back({i, i + value.size()});
      }
    }
    for (size_t e = 0; e < extra.size(); ++e) {
      if (MatchesAt(tokens, i, extra[e])) {
        candidates.push_back({i, i + extra[e].size()});
        extra_found[e] = true;
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const TokenSpan& a, const TokenSpan& b) {
    const size_t la = a.end - a.begin;
    const size_t lb = b.end - b.begin;
    if (la != lb) return la > lb;
    return a.begin < b.begin;
  });

  std::vector<bool> taken(tokens.size(), false);
  std::vector<TokenSpan> accepted;
  for (const TokenSpan& c : candidates) {
    bool free = true;
    for (size_t i = c.begin; i < c.end && free; ++i) free = !taken[i];
    if (!free) continue;
    for (size_t i = c.begin; i < c.end; ++i) taken[i] = true;
    accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const TokenSpan& a, const TokenSpan& b) { return a.begin < b.begin; });

  if (unmatched) {
    for (size_t e = 0; e < extra.size(); ++e) {
      if (!extra_found[e]) unmatched->push_back(std::string(extra_values[e]));
    }
  }
  return accepted;
}

TokenizedUtterance TokenizeAndProtect(const Utterance& utt, const Turn& turn,
                                      const SlotMatcher& matcher, const PosLexicon& poslex) {
  TokenizedUtterance tu;
  tu.source_text = utt.text;
  const std::vector<std::string> surfaces = Tokenize(utt.text);
  const std::vector<PosTag> tags = Tag(surfaces, poslex);

  std::vector<std::string> constraint_values;
  for (const SlotValue& sv : turn.constraints) constraint_values.push_back(sv.value);
  tu.spans = matcher.Match(surfaces, constraint_values, &tu.unmatched_constraints);

  tu.tokens.reserve(surfaces.size());
  for (size_t i = 0; i < surfaces.size(); ++i) {
    tu.tokens.push_back({surfaces[i], tags[i], false});
  }
  for (const TokenSpan& s : tu.spans) {
    for (size_t i = s.begin; i < s.end; ++i) tu.tokens[i].is_protected = true;
  }
  return tu;
}

TokenizedUtterance TokenizeAndProtect(const Utterance& utt, const Turn& turn,
                                      const Ontology& ontology, const PosLexicon& poslex) {
  return TokenizeAndProtect(utt, turn, SlotMatcher(ontology), poslex);
}

bool IsSubstitutable(PosTag tag) {
  return tag == PosTag::kVerb || tag == PosTag::kAdj || tag == PosTag::kNoun;
}

std::vector<size_t> EligiblePositions(const TokenizedUtterance& tu, const SynonymLexicon& lex,
                                      std::vector<size_t>* pos_mismatch) {
  std::vector<size_t> eligible;
  for (size_t i = 0; i < tu.tokens.size(); ++i) {
    const TaggedToken& t = tu.tokens[i];
    if (t.is_protected || !IsSubstitutable(t.pos)) continue;
    if (!lex.Lookup(t.surface, t.pos).empty()) {
      eligible.push_back(i);
      continue;
    }
    if (pos_mismatch) {
      for (PosTag other : {PosTag::kNoun, PosTag::kVerb, PosTag::kAdj, PosTag::kAdv}) {
        if (other != t.pos && !lex.Lookup(t.surface, other).empty()) {
          pos_mismatch->push_back(i);
          break;
        }
      }
    }
  }
  return eligible;
}

std::vector<Variant> SynonymVariants(const TokenizedUtterance& tu, const SynonymLexicon& lex,
                                     int k, std::mt19937_64& rng) {
  if (k <= 0) throw ArgumentError("synonym variant count must be >= 1, got " + std::to_string(k));
  const std::vector<size_t> eligible = EligiblePositions(tu, lex);
  if (eligible.empty()) return {};

  std::vector<Variant> out;
  out.reserve(static_cast<size_t>(k));
  for (int v = 0; v < k; ++v) {
    const size_t pos = eligible[UniformIndex(rng, eligible.size())];
    const TaggedToken& tok = tu.tokens[pos];
    const auto synonyms = lex.Lookup(tok.surface, tok.pos);
    const std::string& replacement = synonyms[UniformIndex(rng, synonyms.size())];

    std::vector<std::string> surfaces = tu.Surfaces();
    surfaces[pos] = replacement;
    Variant variant;
    variant.text = JoinTokens(surfaces);
    variant.method = Method::kSynonym;
    variant.variant_index = v + 1;
    variant.meta = {{"position", std::to_string(pos)},
                    {"replaced", tok.surface},
                    {"replacement", replacement}};
    out.push_back(std::move(variant));
  }
  return out;
}

std::optional<Variant> StopwordVariant(const TokenizedUtterance& tu, const StopList& stop) {
  std::vector<std::string> kept;
  size_t dropped = 0;
  for (const TaggedToken& t : tu.tokens) {
    if (!t.is_protected && stop.Contains(t.surface)) {
      ++dropped;
    } else {
      kept.push_back(t.surface);
    }
  }
  if (dropped == 0 || kept.empty()) return std::nullopt;
  Variant v;
  v.text = JoinTokens(kept);
  v.method = Method::kStopword;
  v.variant_index = 1;
  v.meta = {{"deleted", std::to_string(dropped)}};
  return v;
}

}  // namespace dialogaug
