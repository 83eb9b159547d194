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

#include "dialogaug/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dialogaug/errors.h"
#include "dialogaug/text.h"

namespace dialogaug {

using nlohmann::json;

namespace {

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return *it;
}

std::string StringField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_string()) {
    throw ParseError(where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

// Accepts strings and integers; dataset ids come in both shapes.
std::string IdField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError(where + ": field '" + key + "' must be a string or integer");
}

const json& ArrayField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_array()) throw ParseError(where + ": field '" + key + "' must be an array");
  return v;
}

json ParseJson(std::string_view text, std::string_view origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(origin) + ": invalid JSON: " + e.what());
  }
}

std::string DialogueWhere(std::string_view origin, size_t i) {
  return std::string(origin) + ": dialogue #" + std::to_string(i);
}

SlotValue MakeSlotValue(std::string_view slot, std::string_view value) {
  return SlotValue{ToLower(Trim(slot)), ToLower(Trim(value))};
}

void SetConstraint(std::vector<SlotValue>& belief, SlotValue sv) {
  for (SlotValue& existing : belief) {
    if (existing.slot == sv.slot) {
      existing.value = std::move(sv.value);
      return;
    }
  }
  belief.push_back(std::move(sv));
}

void AddUnique(std::vector<std::string>& v, std::string s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(std::move(s));
}

// Derives an ontology from the slot annotations of a corpus: every
// constraint slot becomes informable with its observed values, every
// requested slot becomes requestable.
Ontology DeriveOntology(const std::vector<Dialogue>& dialogues,
                        const std::set<std::string>& extra_requestable) {
  std::map<std::string, std::set<std::string>> values;
  std::set<std::string> requestable = extra_requestable;
  for (const Dialogue& d : dialogues) {
    for (const Turn& t : d.turns) {
      for (const SlotValue& sv : t.constraints) values[sv.slot].insert(sv.value);
      for (const std::string& r : t.requested) requestable.insert(r);
    }
  }
  Ontology o;
  for (auto& [slot, vs] : values) o.informable[slot].assign(vs.begin(), vs.end());
  o.requestable.assign(requestable.begin(), requestable.end());
  return o;
}

Provenance ParseProvenance(const json& j, const std::string& where) {
  Provenance p;
  p.method = StringField(j, "method", where);
  const json& variant = Field(j, "variant", where);
  if (!variant.is_number_integer()) {
    throw ParseError(where + ": provenance 'variant' must be an integer");
  }
  p.variant = variant.get<int>();
  if (auto it = j.find("meta"); it != j.end()) {
    if (!it->is_object()) throw ParseError(where + ": provenance 'meta' must be an object");
    for (auto& [k, v] : it->items()) {
      if (!v.is_string()) {
        throw ParseError(where + ": provenance meta '" + k + "' must be a string");
      }
      p.meta[k] = v.get<std::string>();
    }
  }
  return p;
}

}  // namespace

bool Ontology::IsInformable(std::string_view slot) const {
  return informable.find(std::string(slot)) != informable.end();
}

bool Ontology::IsRequestable(std::string_view slot) const {
  return std::find(requestable.begin(), requestable.end(), slot) != requestable.end();
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  const std::string n = ToLower(name);
  if (n == "camrest676" || n == "camrest") return CorpusFormat::kCamRest676;
  if (n == "kvret") return CorpusFormat::kKvret;
  if (n == "normalized") return CorpusFormat::kNormalized;
  throw ArgumentError("unknown corpus format '" + std::string(name) +
                      "' (expected camrest676, kvret or normalized)");
}

std::string_view CorpusFormatName(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::kCamRest676:
      return "camrest676";
    case CorpusFormat::kKvret:
      return "kvret";
    case CorpusFormat::kNormalized:
      return "normalized";
  }
  return "normalized";
}

Ontology ParseOntology(const json& j, std::string_view origin) {
  const std::string where = std::string(origin) + ": ontology";
  Ontology o;
  const json& inf = Field(j, "informable", where);
  if (!inf.is_object()) throw ParseError(where + ": 'informable' must be an object");
  for (auto& [slot, vals] : inf.items()) {
    if (!vals.is_array()) {
      throw ParseError(where + ": informable slot '" + slot + "' must map to an array");
    }
    std::vector<std::string>& out = o.informable[ToLower(Trim(slot))];
    for (const json& v : vals) {
      if (!v.is_string()) {
        throw ParseError(where + ": informable slot '" + slot + "' has a non-string value");
      }
      out.push_back(ToLower(Trim(v.get<std::string>())));
    }
  }
  for (const json& r : ArrayField(j, "requestable", where)) {
    if (!r.is_string()) throw ParseError(where + ": requestable entries must be strings");
    o.requestable.push_back(ToLower(Trim(r.get<std::string>())));
  }
  return o;
}

json OntologyToJson(const Ontology& ontology) {
  json inf = json::object();
  for (const auto& [slot, vals] : ontology.informable) inf[slot] = vals;
  return json{{"informable", inf}, {"requestable", ontology.requestable}};
}

Ontology LoadOntology(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  return ParseOntology(ParseJson(text, path.string()), path.string());
}

Corpus ParseNormalized(std::string_view json_text, std::string_view origin) {
  const json root = ParseJson(json_text, origin);
  const std::string top(origin);
  Corpus corpus;
  corpus.source = CorpusFormat::kNormalized;
  corpus.ontology = ParseOntology(Field(root, "ontology", top), origin);
  const json& dialogues = ArrayField(root, "dialogues", top);
  corpus.dialogues.reserve(dialogues.size());
  for (size_t i = 0; i < dialogues.size(); ++i) {
    const json& jd = dialogues[i];
    std::string where = DialogueWhere(origin, i);
    Dialogue d;
    d.id = IdField(jd, "id", where);
    where += " (id '" + d.id + "')";
    d.domain = ToLower(StringField(jd, "domain", where));
    const json& turns = ArrayField(jd, "turns", where);
    for (size_t t = 0; t < turns.size(); ++t) {
      const json& jt = turns[t];
      const std::string twhere = where + ": turn #" + std::to_string(t);
      Turn turn;
      const json& index = Field(jt, "index", twhere);
      if (!index.is_number_integer()) throw ParseError(twhere + ": 'index' must be an integer");
      turn.index = index.get<int>();
      turn.user = {ToLower(StringField(jt, "user", twhere)), Speaker::kUser};
      turn.machine = {ToLower(StringField(jt, "machine", twhere)), Speaker::kMachine};
      for (const json& c : ArrayField(jt, "constraints", twhere)) {
        turn.constraints.push_back(
            MakeSlotValue(StringField(c, "slot", twhere), StringField(c, "value", twhere)));
      }
      for (const json& r : ArrayField(jt, "requested", twhere)) {
        if (!r.is_string()) throw ParseError(twhere + ": 'requested' entries must be strings");
        turn.requested.push_back(ToLower(Trim(r.get<std::string>())));
      }
      d.turns.push_back(std::move(turn));
    }
    if (auto it = jd.find("provenance"); it != jd.end()) {
      d.provenance = ParseProvenance(*it, where);
    }
    corpus.dialogues.push_back(std::move(d));
  }
  Validate(corpus);
  return corpus;
}

// CamRest676: [{"dialogue_id": n, "dial": [{"turn": i,
//   "usr": {"transcript": s, "slu": [{"act": "inform"|"request",
//                                     "slots": [[slot, value], ...]}]},
//   "sys": {"sent": s}}]}]
// Inform acts accumulate into the belief state; request acts name the
// requested slot in their value position (["slot", "phone"]).
Corpus ParseCamRest676(std::string_view json_text, std::optional<Ontology> ontology,
                       std::string_view origin) {
  const json root = ParseJson(json_text, origin);
  if (!root.is_array()) throw ParseError(std::string(origin) + ": expected a list of dialogues");
  Corpus corpus;
  corpus.source = CorpusFormat::kCamRest676;
  for (size_t i = 0; i < root.size(); ++i) {
    const json& jd = root[i];
    std::string where = DialogueWhere(origin, i);
    Dialogue d;
    d.id = IdField(jd, "dialogue_id", where);
    where += " (id '" + d.id + "')";
    d.domain = "restaurant";
    std::vector<SlotValue> belief;
    const json& dial = ArrayField(jd, "dial", where);
    for (size_t t = 0; t < dial.size(); ++t) {
      const std::string twhere = where + ": turn #" + std::to_string(t);
      const json& jt = dial[t];
      const json& usr = Field(jt, "usr", twhere);
      const json& sys = Field(jt, "sys", twhere);
      Turn turn;
      turn.index = static_cast<int>(t);
      turn.user = {ToLower(Trim(StringField(usr, "transcript", twhere))), Speaker::kUser};
      turn.machine = {ToLower(Trim(StringField(sys, "sent", twhere))), Speaker::kMachine};
      if (auto slu = usr.find("slu"); slu != usr.end()) {
        if (!slu->is_array()) throw ParseError(twhere + ": 'slu' must be an array");
        for (const json& act : *slu) {
          const std::string name = ToLower(StringField(act, "act", twhere));
          for (const json& pair : ArrayField(act, "slots", twhere)) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
                !pair[1].is_string()) {
              throw ParseError(twhere + ": slu slots must be [slot, value] string pairs");
            }
            SlotValue sv = MakeSlotValue(pair[0].get<std::string>(), pair[1].get<std::string>());
            if (name == "inform") {
              SetConstraint(belief, std::move(sv));
            } else if (name == "request") {
              AddUnique(turn.requested, sv.slot == "slot" ? sv.value : sv.slot);
            }
          }
        }
      }
      turn.constraints = belief;
      d.turns.push_back(std::move(turn));
    }
    corpus.dialogues.push_back(std::move(d));
  }
  corpus.ontology = ontology ? *std::move(ontology) : DeriveOntology(corpus.dialogues, {});
  Validate(corpus);
  return corpus;
}

// KVRET: [{"dialogue": [{"turn": "driver"|"assistant",
//                        "data": {"utterance": s, "slots": {..},
//                                 "requested": {slot: bool}}}],
//          "scenario": {"task": {"intent": domain}, "uuid": id}}]
// A driver utterance opens a turn and the following assistant utterance
// closes it. Consecutive utterances by the same speaker are joined.
Corpus ParseKvret(std::string_view json_text, std::optional<Ontology> ontology,
                  std::string_view origin) {
  const json root = ParseJson(json_text, origin);
  if (!root.is_array()) throw ParseError(std::string(origin) + ": expected a list of dialogues");
  Corpus corpus;
  corpus.source = CorpusFormat::kKvret;
  std::set<std::string> requestable_seen;
  for (size_t i = 0; i < root.size(); ++i) {
    const json& jd = root[i];
    std::string where = DialogueWhere(origin, i);
    const json& scenario = Field(jd, "scenario", where);
    Dialogue d;
    d.id = IdField(scenario, "uuid", where);
    where += " (id '" + d.id + "')";
    d.domain = ToLower(StringField(Field(scenario, "task", where), "intent", where));

    std::optional<Turn> open;
    bool have_machine = false;
    auto close = [&] {
      if (open && have_machine) {
        open->index = static_cast<int>(d.turns.size());
        d.turns.push_back(std::move(*open));
      }
      open.reset();
      have_machine = false;
    };
    const json& entries = ArrayField(jd, "dialogue", where);
    for (size_t e = 0; e < entries.size(); ++e) {
      const std::string ewhere = where + ": utterance #" + std::to_string(e);
      const std::string speaker = ToLower(StringField(entries[e], "turn", ewhere));
      const json& data = Field(entries[e], "data", ewhere);
      const std::string text = ToLower(Trim(StringField(data, "utterance", ewhere)));
      if (speaker == "driver") {
        if (have_machine) close();
        if (!open) {
          open.emplace();
          open->user = {text, Speaker::kUser};
        } else {
          open->user.text = NormalizeWhitespace(open->user.text + " " + text);
        }
      } else if (speaker == "assistant") {
        if (!open) {
          if (d.turns.empty()) {
            throw ParseError(ewhere + ": assistant utterance before any driver utterance");
          }
          Turn& last = d.turns.back();
          last.machine.text = NormalizeWhitespace(last.machine.text + " " + text);
          continue;
        }
        open->machine.text = have_machine ? NormalizeWhitespace(open->machine.text + " " + text)
                                          : text;
        have_machine = true;
      } else {
        throw ParseError(ewhere + ": unknown speaker '" + speaker + "'");
      }
      if (auto slots = data.find("slots"); slots != data.end() && open) {
        if (!slots->is_object()) throw ParseError(ewhere + ": 'slots' must be an object");
        for (auto& [slot, value] : slots->items()) {
          if (!value.is_string()) {
            throw ParseError(ewhere + ": slot '" + slot + "' must have a string value");
          }
          SetConstraint(open->constraints, MakeSlotValue(slot, value.get<std::string>()));
        }
      }
      if (auto req = data.find("requested"); req != data.end() && open) {
        if (!req->is_object()) throw ParseError(ewhere + ": 'requested' must be an object");
        for (auto& [slot, flag] : req->items()) {
          const std::string name = ToLower(Trim(slot));
          requestable_seen.insert(name);
          if (flag.is_boolean() && flag.get<bool>()) AddUnique(open->requested, name);
        }
      }
    }
    close();
    if (d.turns.empty()) throw ParseError(where + ": no complete driver/assistant turn");
    corpus.dialogues.push_back(std::move(d));
  }
  corpus.ontology =
      ontology ? *std::move(ontology) : DeriveOntology(corpus.dialogues, requestable_seen);
  Validate(corpus);
  return corpus;
}

void Validate(const Corpus& corpus) {
  const Ontology& o = corpus.ontology;
  {
    std::set<std::string> seen;
    for (const std::string& r : o.requestable) {
      if (!seen.insert(r).second) {
        throw ValidationError("ontology: duplicate requestable slot '" + r + "'");
      }
    }
    for (const auto& [slot, vals] : o.informable) {
      for (const std::string& v : vals) {
        if (v != ToLower(v)) {
          throw ValidationError("ontology: value '" + v + "' of slot '" + slot +
                                "' is not lowercase");
        }
      }
    }
  }

  std::set<std::string> ids;
  std::set<std::string> unknown_slots;
  std::set<std::string> unknown_requested;
  for (const Dialogue& d : corpus.dialogues) {
    const std::string where = "dialogue '" + d.id + "'";
    if (!ids.insert(d.id).second) throw ValidationError("duplicate dialogue id '" + d.id + "'");
    if (d.turns.empty()) throw ValidationError(where + ": has no turns");
    for (size_t t = 0; t < d.turns.size(); ++t) {
      const Turn& turn = d.turns[t];
      const std::string twhere = where + ": turn " + std::to_string(t);
      if (turn.index != static_cast<int>(t)) {
        throw ValidationError(twhere + ": index " + std::to_string(turn.index) +
                              " is not consecutive from 0");
      }
      if (Trim(turn.user.text).empty()) throw ValidationError(twhere + ": empty user utterance");
      if (Trim(turn.machine.text).empty()) {
        throw ValidationError(twhere + ": empty machine utterance");
      }
      for (const SlotValue& sv : turn.constraints) {
        if (sv.slot.empty() || sv.value.empty()) {
          throw ValidationError(twhere + ": constraint with empty slot or value");
        }
        if (sv.value != Trim(sv.value)) {
          throw ValidationError(twhere + ": constraint value '" + sv.value +
                                "' has surrounding whitespace");
        }
        if (!o.HasSlot(sv.slot)) unknown_slots.insert(sv.slot);
      }
      for (const std::string& r : turn.requested) {
        if (!o.IsRequestable(r)) unknown_requested.insert(r);
      }
    }
  }
  auto list = [](const std::set<std::string>& s) {
    std::string out;
    for (const std::string& x : s) out += (out.empty() ? "" : ", ") + x;
    return out;
  };
  if (!unknown_slots.empty()) {
    throw ValidationError("slots absent from ontology: " + list(unknown_slots));
  }
  if (!unknown_requested.empty()) {
    throw ValidationError("requested slots absent from ontology requestable set: " +
                          list(unknown_requested));
  }
}

json ToJson(const Dialogue& d) {
  json turns = json::array();
  for (const Turn& t : d.turns) {
    json constraints = json::array();
    for (const SlotValue& sv : t.constraints) {
      constraints.push_back({{"slot", sv.slot}, {"value", sv.value}});
    }
    turns.push_back({{"index", t.index},
                     {"user", t.user.text},
                     {"machine", t.machine.text},
                     {"constraints", constraints},
                     {"requested", t.requested}});
  }
  json jd = {{"id", d.id}, {"domain", d.domain}, {"turns", turns}};
  if (d.provenance) {
    json meta = json::object();
    for (const auto& [k, v] : d.provenance->meta) meta[k] = v;
    jd["provenance"] = {
        {"method", d.provenance->method}, {"variant", d.provenance->variant}, {"meta", meta}};
  }
  return jd;
}

json ToJson(const Corpus& corpus) {
  json dialogues = json::array();
  for (const Dialogue& d : corpus.dialogues) dialogues.push_back(ToJson(d));
  return json{{"ontology", OntologyToJson(corpus.ontology)}, {"dialogues", dialogues}};
}

std::string EmitToString(const Corpus& corpus) { return ToJson(corpus).dump(2) + "\n"; }

void Emit(const Corpus& corpus, const std::filesystem::path& path) {
  WriteFile(path, EmitToString(corpus));
}

Corpus Ingest(const std::filesystem::path& path, CorpusFormat format,
              const IngestOptions& options) {
  const std::string text = ReadFile(path);
  std::optional<Ontology> ontology;
  if (options.ontology_path) {
    ontology = LoadOntology(*options.ontology_path);
  } else if (format == CorpusFormat::kCamRest676) {
    const auto sibling = path.parent_path() / "CamRestOTGY.json";
    std::error_code ec;
    if (std::filesystem::is_regular_file(sibling, ec)) ontology = LoadOntology(sibling);
  }
  switch (format) {
    case CorpusFormat::kCamRest676:
      return ParseCamRest676(text, std::move(ontology), path.string());
    case CorpusFormat::kKvret:
      return ParseKvret(text, std::move(ontology), path.string());
    case CorpusFormat::kNormalized:
      return ParseNormalized(text, path.string());
  }
  throw ArgumentError("unknown corpus format");
}

std::string ReadFile(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError(path.string() + ": no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace dialogaug
