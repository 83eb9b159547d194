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

#include "dialogaug/lexres.h"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>

#include "dialogaug/errors.h"
#include "dialogaug/text.h"

namespace dialogaug {
namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 10> kTagNames = {{
    {PosTag::kNoun, "NOUN"},
    {PosTag::kPropn, "PROPN"},
    {PosTag::kVerb, "VERB"},
    {PosTag::kModal, "MODAL"},
    {PosTag::kAdj, "ADJ"},
    {PosTag::kAdv, "ADV"},
    {PosTag::kPron, "PRON"},
    {PosTag::kDet, "DET"},
    {PosTag::kStop, "STOP"},
    {PosTag::kOther, "OTHER"},
}};

bool IsContentTag(PosTag tag) {
  return tag == PosTag::kNoun || tag == PosTag::kVerb || tag == PosTag::kAdj ||
         tag == PosTag::kAdv;
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string WordNetLemma(std::string_view raw) {
  std::string w(raw);
  // Adjective position markers: "(a)", "(p)", "(ip)".
  if (const size_t paren = w.find('('); paren != std::string::npos) w.resize(paren);
  std::replace(w.begin(), w.end(), '_', ' ');
  return ToLower(w);
}

struct WordNetFile {
  const char* suffix;
  PosTag pos;
};

constexpr std::array<WordNetFile, 4> kWordNetFiles = {{
    {"noun", PosTag::kNoun},
    {"verb", PosTag::kVerb},
    {"adj", PosTag::kAdj},
    {"adv", PosTag::kAdv},
}};

// Parses a data.<pos> file into offset -> member words. Lines starting with
// a space are the license preamble.
std::unordered_map<std::string, std::vector<std::string>> ParseWordNetData(
    const std::filesystem::path& path) {
  std::unordered_map<std::string, std::vector<std::string>> synsets;
  const auto lines = SplitLines(ReadFile(path));
  for (size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (line.empty() || line[0] == ' ') continue;
    const std::string where = path.string() + ":" + std::to_string(n + 1);
    std::istringstream in(line);
    std::string offset, lex_filenum, ss_type, w_cnt_hex;
    if (!(in >> offset >> lex_filenum >> ss_type >> w_cnt_hex)) {
      throw ParseError(where + ": truncated synset record");
    }
    size_t w_cnt = 0;
    try {
      w_cnt = std::stoul(w_cnt_hex, nullptr, 16);
    } catch (const std::exception&) {
      throw ParseError(where + ": bad word count '" + w_cnt_hex + "'");
    }
    std::vector<std::string> words;
    for (size_t i = 0; i < w_cnt; ++i) {
      std::string word, lex_id;
      if (!(in >> word >> lex_id)) throw ParseError(where + ": truncated word list");
      words.push_back(WordNetLemma(word));
    }
    synsets[offset] = std::move(words);
  }
  return synsets;
}

// index.<pos>: "lemma pos synset_cnt p_cnt [ptr...] sense_cnt tagsense_cnt
// offset...". The trailing synset_cnt fields are the offsets.
std::vector<std::pair<std::string, std::vector<std::string>>> ParseWordNetIndex(
    const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::vector<std::string>>> out;
  const auto lines = SplitLines(ReadFile(path));
  for (size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (line.empty() || line[0] == ' ') continue;
    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string f; in >> f;) fields.push_back(std::move(f));
    const std::string where = path.string() + ":" + std::to_string(n + 1);
    if (fields.size() < 4) throw ParseError(where + ": truncated index record");
    size_t synset_cnt = 0;
    try {
      synset_cnt = std::stoul(fields[2]);
    } catch (const std::exception&) {
      throw ParseError(where + ": bad synset count '" + fields[2] + "'");
    }
    if (synset_cnt > fields.size() - 4) throw ParseError(where + ": truncated offset list");
    std::vector<std::string> offsets(fields.end() - static_cast<std::ptrdiff_t>(synset_cnt),
                                     fields.end());
    out.emplace_back(WordNetLemma(fields[0]), std::move(offsets));
  }
  return out;
}

SynonymLexicon LoadWordNetDb(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError(dir.string() + ": not a WordNet database directory");
  }
  SynonymLexicon lex;
  bool any = false;
  for (const WordNetFile& f : kWordNetFiles) {
    const auto data_path = dir / (std::string("data.") + f.suffix);
    if (!std::filesystem::is_regular_file(data_path, ec)) continue;
    any = true;
    const auto synsets = ParseWordNetData(data_path);
    const auto index_path = dir / (std::string("index.") + f.suffix);
    if (std::filesystem::is_regular_file(index_path, ec)) {
      for (const auto& [lemma, offsets] : ParseWordNetIndex(index_path)) {
        for (const std::string& off : offsets) {
          auto it = synsets.find(off);
          if (it == synsets.end()) {
            throw ParseError(index_path.string() + ": lemma '" + lemma +
                             "' points at missing synset " + off);
          }
          lex.Add(lemma, f.pos, it->second);
        }
      }
    } else {
      for (const auto& [off, words] : synsets) {
        for (const std::string& w : words) lex.Add(w, f.pos, words);
      }
    }
  }
  if (!any) throw IoError(dir.string() + ": no data.{noun,verb,adj,adv} files");
  return lex;
}

}  // namespace

std::string_view PosTagName(PosTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "OTHER";
}

std::optional<PosTag> ParsePosTag(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& [t, n] : kTagNames) {
    if (n == upper) return t;
  }
  return std::nullopt;
}

void SynonymLexicon::Add(std::string_view lemma, PosTag pos,
                         std::span<const std::string> synonyms) {
  if (!IsContentTag(pos)) return;
  const std::string key = ToLower(Trim(lemma));
  if (key.empty()) return;
  std::vector<std::string> fresh;
  for (const std::string& s : synonyms) {
    std::string syn = NormalizeWhitespace(ToLower(s));
    if (!syn.empty() && syn != key) fresh.push_back(std::move(syn));
  }
  if (fresh.empty()) return;
  std::vector<std::string>& list = entries_[{key, pos}];
  list.insert(list.end(), fresh.begin(), fresh.end());
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
}

std::span<const std::string> SynonymLexicon::Lookup(std::string_view lemma, PosTag pos) const {
  auto it = entries_.find({std::string(lemma), pos});
  if (it == entries_.end()) return {};
  return it->second;
}

SynonymLexicon ParseSynonymTsv(std::string_view text, std::string_view origin) {
  SynonymLexicon lex;
  const auto lines = SplitLines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    const std::string line = Trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = std::string(origin) + ":" + std::to_string(n + 1);
    const auto cols = Split(lines[n], '\t');
    if (cols.size() != 3) {
      throw ParseError(where + ": expected 3 tab-separated columns, got " +
                       std::to_string(cols.size()));
    }
    const auto pos = ParsePosTag(Trim(cols[1]));
    if (!pos) throw ParseError(where + ": unknown POS '" + Trim(cols[1]) + "'");
    lex.Add(cols[0], *pos, Split(cols[2], '|'));
  }
  return lex;
}

SynonymLexicon LoadSynonyms(const std::filesystem::path& path, SynonymFormat format) {
  SynonymLexicon lex = format == SynonymFormat::kTsv
                           ? ParseSynonymTsv(ReadFile(path), path.string())
                           : LoadWordNetDb(path);
  if (lex.empty()) throw ValidationError(path.string() + ": synonym lexicon is empty");
  return lex;
}

StopList ParseStopList(std::string_view text, const Ontology& ontology,
                       std::vector<std::string>* removed, std::string_view origin) {
  std::set<std::string> values;
  for (const auto& [slot, vals] : ontology.informable) values.insert(vals.begin(), vals.end());
  std::set<std::string> words;
  for (const std::string& raw : SplitLines(text)) {
    const std::string w = ToLower(Trim(raw));
    if (w.empty()) continue;
    if (values.count(w)) {
      if (removed && std::find(removed->begin(), removed->end(), w) == removed->end()) {
        removed->push_back(w);
      }
      continue;
    }
    words.insert(w);
  }
  if (words.empty()) throw ValidationError(std::string(origin) + ": stop list is empty");
  return StopList(std::move(words));
}

StopList LoadStopList(const std::filesystem::path& path, const Ontology& ontology,
                      std::vector<std::string>* removed) {
  return ParseStopList(ReadFile(path), ontology, removed, path.string());
}

bool IsClosedClassTag(PosTag tag) {
  return tag == PosTag::kDet || tag == PosTag::kPron || tag == PosTag::kModal ||
         tag == PosTag::kPropn;
}

void PosLexicon::Add(std::string_view word, PosTag tag) {
  const std::string w = ToLower(Trim(word));
  if (!IsClosedClassTag(tag)) {
    tags_[w] = tag;
    return;
  }
  for (const auto& [other, words] : closed_) {
    if (other != tag && words.count(w)) {
      throw ValidationError("'" + w + "' is listed in closed classes " +
                            std::string(PosTagName(other)) + " and " +
                            std::string(PosTagName(tag)));
    }
  }
  closed_[tag].insert(w);
}

PosTag PosLexicon::Tag(std::string_view word) const {
  const std::string w(word);
  for (const auto& [tag, words] : closed_) {
    if (words.count(w)) return tag;
  }
  auto it = tags_.find(w);
  return it == tags_.end() ? PosTag::kOther : it->second;
}

bool PosLexicon::IsClosedClass(std::string_view word) const {
  const std::string w(word);
  for (const auto& [tag, words] : closed_) {
    if (words.count(w)) return true;
  }
  return false;
}

PosLexicon ParsePosLexicon(std::string_view text, std::string_view origin) {
  PosLexicon lex;
  const auto lines = SplitLines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    const std::string line = Trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = std::string(origin) + ":" + std::to_string(n + 1);
    const auto cols = Split(line, '\t');
    if (cols.size() != 2) throw ParseError(where + ": expected word<TAB>TAG");
    const auto tag = ParsePosTag(Trim(cols[1]));
    if (!tag) throw ParseError(where + ": unknown POS '" + Trim(cols[1]) + "'");
    try {
      lex.Add(cols[0], *tag);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return lex;
}

PosLexicon LoadPosLexicon(const std::filesystem::path& path) {
  return ParsePosLexicon(ReadFile(path), path.string());
}

std::vector<PosTag> Tag(std::span<const std::string> tokens, const PosLexicon& poslex) {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const std::string& t : tokens) tags.push_back(poslex.Tag(t));
  return tags;
}

}  // namespace dialogaug
