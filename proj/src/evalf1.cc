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

#include "dialogaug/evalf1.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "dialogaug/errors.h"
#include "dialogaug/text.h"

namespace dialogaug {

using nlohmann::json;

namespace {

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

struct Hit {
  size_t begin;
  size_t end;
  const std::string* slot;
};

void FindAll(std::string_view text, std::string_view needle, bool need_boundary,
             const std::string* slot, std::vector<Hit>& hits) {
  if (needle.empty()) return;
  for (size_t p = text.find(needle); p != std::string_view::npos; p = text.find(needle, p + 1)) {
    const size_t end = p + needle.size();
    if (need_boundary) {
      if (p > 0 && IsAlnum(text[p - 1]) && IsAlnum(needle.front())) continue;
      if (end < text.size() && IsAlnum(text[end]) && IsAlnum(needle.back())) continue;
    }
    hits.push_back({p, end, slot});
  }
}

}  // namespace

EvalResult Score(const EvalCounts& c) {
  EvalResult r;
  r.counts = c;
  const auto ratio = [](int64_t num, int64_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn_);
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

KbValues LoadKbValues(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ParseError(path.string() + ": expected {slot: [values]}");
  KbValues kb;
  for (auto& [slot, vals] : j.items()) {
    if (!vals.is_array()) throw ParseError(path.string() + ": slot '" + slot + "' must map to a list");
    auto& out = kb[ToLower(Trim(slot))];
    for (const json& v : vals) {
      if (!v.is_string()) {
        throw ParseError(path.string() + ": slot '" + slot + "' has a non-string value");
      }
      out.push_back(ToLower(Trim(v.get<std::string>())));
    }
  }
  return kb;
}

std::set<std::string> DetectAnswered(std::string_view response, const Ontology& ontology,
                                     const KbValues& kb_values) {
  const std::string text = ToLower(response);
  std::vector<std::string> delex;
  delex.reserve(ontology.requestable.size());
  for (const std::string& s : ontology.requestable) delex.push_back("<" + s + ">");

  std::vector<Hit> hits;
  for (size_t i = 0; i < ontology.requestable.size(); ++i) {
    const std::string& slot = ontology.requestable[i];
    FindAll(text, delex[i], false, &slot, hits);
    if (auto it = kb_values.find(slot); it != kb_values.end()) {
      for (const std::string& v : it->second) FindAll(text, v, true, &slot, hits);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    const size_t la = a.end - a.begin;
    const size_t lb = b.end - b.begin;
    if (la != lb) return la > lb;
    if (a.begin != b.begin) return a.begin < b.begin;
    return *a.slot < *b.slot;
  });
  std::vector<std::pair<size_t, size_t>> taken;
  std::set<std::string> answered;
  for (const Hit& h : hits) {
    const bool overlaps = std::any_of(taken.begin(), taken.end(), [&](const auto& t) {
      return h.begin < t.second && t.first < h.end;
    });
    if (overlaps) continue;
    taken.emplace_back(h.begin, h.end);
    answered.insert(*h.slot);
  }
  return answered;
}

EvalCounts CountJudgement(const TurnJudgement& j) {
  EvalCounts c;
  std::set<std::string> seen;
  for (const std::string& s : j.requested) {
    if (!seen.insert(s).second) continue;
    const bool in_hyp = j.answered_in_hyp.count(s) > 0;
    const bool in_ref = j.answered_in_ref.count(s) > 0;
    if (in_hyp && in_ref) {
      ++c.tp;
    } else if (in_hyp) {
      ++c.fp;
    } else if (in_ref) {
      ++c.fn_;
    }
  }
  return c;
}

EvalCounts ScoreTurn(std::string_view hyp, std::string_view ref,
                     const std::vector<std::string>& requested, const Ontology& ontology,
                     const KbValues& kb_values) {
  for (const std::string& s : requested) {
    if (!ontology.IsRequestable(s)) {
      throw ValidationError("requested slot '" + s + "' is not a requestable ontology slot");
    }
  }
  TurnJudgement j;
  j.requested = requested;
  if (!requested.empty()) {
    j.answered_in_hyp = DetectAnswered(hyp, ontology, kb_values);
    j.answered_in_ref = DetectAnswered(ref, ontology, kb_values);
  }
  return CountJudgement(j);
}

EvalResult ScoreJudgements(const std::vector<TurnJudgement>& judgements) {
  EvalCounts total;
  for (const TurnJudgement& j : judgements) total += CountJudgement(j);
  return Score(total);
}

Hypotheses ParseHypotheses(std::string_view jsonl, std::string_view origin) {
  Hypotheses hyp;
  std::istringstream in{std::string(jsonl)};
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (Trim(line).empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(n);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": invalid JSON: " + e.what());
    }
    std::string id;
    int turn = 0;
    std::string response;
    try {
      const json& jid = j.at("dialogue_id");
      id = jid.is_string() ? jid.get<std::string>() : std::to_string(jid.get<long long>());
      turn = j.at("turn").get<int>();
      response = j.at("response").get<std::string>();
    } catch (const json::exception& e) {
      throw ParseError(where + ": expected {\"dialogue_id\", \"turn\", \"response\"}: " +
                       e.what());
    }
    if (!hyp.emplace(std::make_pair(id, turn), ToLower(response)).second) {
      throw ValidationError(where + ": duplicate hypothesis for dialogue '" + id + "' turn " +
                            std::to_string(turn));
    }
  }
  return hyp;
}

Hypotheses LoadHypotheses(const std::filesystem::path& path) {
  return ParseHypotheses(ReadFile(path), path.string());
}

EvalResult ScoreCorpus(const Hypotheses& hyp, const Corpus& ref, const Ontology& ontology,
                       const KbValues& kb_values) {
  std::vector<std::string> missing;
  EvalCounts total;
  for (const Dialogue& d : ref.dialogues) {
    for (const Turn& t : d.turns) {
      auto it = hyp.find({d.id, t.index});
      if (it == hyp.end()) {
        missing.push_back("(" + d.id + ", " + std::to_string(t.index) + ")");
        continue;
      }
      total += ScoreTurn(it->second, t.machine.text, t.requested, ontology, kb_values);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ValidationError("hypothesis file is missing " + std::to_string(missing.size()) +
                          " turn(s): " + list);
  }
  return Score(total);
}

json ToJson(const EvalResult& r) {
  return json{{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1},
              {"tp", r.counts.tp},        {"fp", r.counts.fp},  {"fn", r.counts.fn_}};
}

std::string FormatReport(const EvalResult& r, std::string_view label) {
  char buf[256];
  std::ostringstream out;
  std::snprintf(buf, sizeof(buf), "%-24s %8s %10s %8s %6s %6s %6s\n", "model", "F1", "Precision",
                "Recall", "TP", "FP", "FN");
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-24.24s %8.3f %10.3f %8.3f %6lld %6lld %6lld\n",
                std::string(label).c_str(), r.f1, r.precision, r.recall,
                static_cast<long long>(r.counts.tp), static_cast<long long>(r.counts.fp),
                static_cast<long long>(r.counts.fn_));
  out << buf;
  return out.str();
}

}  // namespace dialogaug
