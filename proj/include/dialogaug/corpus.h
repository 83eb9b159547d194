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

// Normalized dialogue data model and the adapters that ingest CamRest676,
// KVRET and the normalized JSON format into it.
//
// Normalized format (keys are emitted sorted, two-space indent):
//
//   {"dialogues": [{"domain": str, "id": str,
//                   "provenance": {...},            // optional
//                   "turns": [{"constraints": [{"slot": str, "value": str}],
//                              "index": int, "machine": str,
//                              "requested": [str], "user": str}]}],
//    "ontology": {"informable": {slot: [values]}, "requestable": [slots]}}

#ifndef DIALOGAUG_CORPUS_H_
#define DIALOGAUG_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dialogaug {

enum class Speaker { kUser, kMachine };

struct SlotValue {
  std::string slot;
  std::string value;

  bool operator==(const SlotValue&) const = default;
};

struct Utterance {
  std::string text;
  Speaker speaker = Speaker::kUser;

  bool operator==(const Utterance&) const = default;
};

struct Turn {
  int index = 0;
  Utterance user;
  Utterance machine{"", Speaker::kMachine};
  // Belief state at this turn.
  std::vector<SlotValue> constraints;
  // Requestable slots the user asks for in this turn.
  std::vector<std::string> requested;

  const Utterance& utterance(Speaker s) const {
    return s == Speaker::kUser ? user : machine;
  }
  Utterance& utterance(Speaker s) {
    return s == Speaker::kUser ? user : machine;
  }

  bool operator==(const Turn&) const = default;
};

// Attached to dialogues produced by the assembler. Originals carry method
// "original" and variant 0.
struct Provenance {
  std::string method;
  int variant = 0;
  std::map<std::string, std::string> meta;

  bool operator==(const Provenance&) const = default;
};

struct Dialogue {
  std::string id;
  std::string domain;
  std::vector<Turn> turns;
  std::optional<Provenance> provenance;

  bool operator==(const Dialogue&) const = default;
};

struct Ontology {
  std::map<std::string, std::vector<std::string>> informable;
  std::vector<std::string> requestable;

  bool IsInformable(std::string_view slot) const;
  bool IsRequestable(std::string_view slot) const;
  bool HasSlot(std::string_view slot) const {
    return IsInformable(slot) || IsRequestable(slot);
  }

  bool operator==(const Ontology&) const = default;
};

enum class CorpusFormat { kCamRest676, kKvret, kNormalized };

CorpusFormat ParseCorpusFormat(std::string_view name);
std::string_view CorpusFormatName(CorpusFormat format);

struct Corpus {
  std::vector<Dialogue> dialogues;
  Ontology ontology;
  CorpusFormat source = CorpusFormat::kNormalized;

  // Structural equality over dialogues and ontology. `source` only records
  // where the data came from and is not part of the serialized form.
  bool operator==(const Corpus& other) const {
    return dialogues == other.dialogues && ontology == other.ontology;
  }
};

struct IngestOptions {
  // CamRest676 / KVRET only. A normalized-format ontology object
  // ({"informable": ..., "requestable": ...}) or a CamRestOTGY.json file. When
  // unset, CamRest676 looks for CamRestOTGY.json next to the input and both
  // adapters fall back to deriving the ontology from the annotations.
  std::optional<std::filesystem::path> ontology_path;
};

// Reads `path` as `format`, lowercases all text and validates the result.
// Throws IoError, ParseError (naming the offending record) or
// ValidationError (listing unknown slot names).
Corpus Ingest(const std::filesystem::path& path, CorpusFormat format,
              const IngestOptions& options = {});

// In-memory variants of Ingest. `origin` is used in error messages.
Corpus ParseNormalized(std::string_view json_text, std::string_view origin = "<memory>");
Corpus ParseCamRest676(std::string_view json_text, std::optional<Ontology> ontology,
                       std::string_view origin = "<memory>");
Corpus ParseKvret(std::string_view json_text, std::optional<Ontology> ontology,
                  std::string_view origin = "<memory>");

Ontology ParseOntology(const nlohmann::json& j, std::string_view origin);
nlohmann::json OntologyToJson(const Ontology& ontology);
Ontology LoadOntology(const std::filesystem::path& path);

// Throws ValidationError on the first violated invariant class.
void Validate(const Corpus& corpus);

nlohmann::json ToJson(const Corpus& corpus);
nlohmann::json ToJson(const Dialogue& dialogue);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string EmitToString(const Corpus& corpus);
void Emit(const Corpus& corpus, const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace dialogaug

#endif  // DIALOGAUG_CORPUS_H_
