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

#include "fixtures.h"

#include <algorithm>
#include <atomic>
#include <random>
#include <unistd.h>

#include "dialogaug/text.h"
#include "json.hpp"

#ifndef DIALOGAUG_DATA_DIR
#define DIALOGAUG_DATA_DIR "data"
#endif

namespace dialogaug {

void PrintTo(const SlotValue& sv, std::ostream* os) { *os << sv.slot << "=" << sv.value; }

void PrintTo(const Turn& t, std::ostream* os) {
  *os << "{#" << t.index << " user=\"" << t.user.text << "\" machine=\"" << t.machine.text
      << "\" constraints=[";
  for (const SlotValue& sv : t.constraints) *os << sv.slot << "=" << sv.value << ";";
  *os << "] requested=[";
  for (const std::string& r : t.requested) *os << r << ";";
  *os << "]}";
}

void PrintTo(const Dialogue& d, std::ostream* os) {
  *os << "dialogue " << d.id << " (" << d.domain << ") ";
  for (const Turn& t : d.turns) PrintTo(t, os);
}

}  // namespace dialogaug

namespace dialogaug::testing {
namespace {

using nlohmann::json;

const std::vector<std::string> kFoods = {"chinese",         "indian",  "italian",
                                         "thai",            "british", "modern european",
                                         "asian oriental",  "spanish", "korean",
                                         "gastropub",       "portuguese"};
const std::vector<std::string> kPrices = {"cheap", "moderate", "expensive"};
const std::vector<std::string> kAreas = {"north", "south", "east", "west", "centre"};
const std::vector<std::string> kNames = {"the golden house", "curry garden", "royal spice",
                                         "the varsity restaurant", "la margherita",
                                         "bangkok city", "nandos", "the copper kettle"};
const std::vector<std::string> kPhones = {"01223 464630", "01223 302330", "01223 355012",
                                          "01223 566188", "01223 323737"};
const std::vector<std::string> kAddresses = {"12 lensfield road", "106 regent street",
                                             "51 trumpington street", "4 kings parade",
                                             "33 bridge street"};
const std::vector<std::string> kPostcodes = {"cb2 1eg", "cb1 2az", "cb3 0af", "cb5 8jj"};

template <typename T>
const T& Pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[UniformIndex(rng, v.size())];
}

void SetBelief(std::vector<SlotValue>& belief, const std::string& slot, const std::string& value) {
  for (SlotValue& sv : belief) {
    if (sv.slot == slot) {
      sv.value = value;
      return;
    }
  }
  belief.push_back({slot, value});
}

std::string BeliefValue(const std::vector<SlotValue>& belief, const std::string& slot,
                        const std::string& fallback) {
  for (const SlotValue& sv : belief) {
    if (sv.slot == slot) return sv.value;
  }
  return fallback;
}

Turn MakeTurn(int index, std::string user, std::string machine, std::vector<SlotValue> belief,
              std::vector<std::string> requested) {
  Turn t;
  t.index = index;
  t.user = {std::move(user), Speaker::kUser};
  t.machine = {std::move(machine), Speaker::kMachine};
  t.constraints = std::move(belief);
  t.requested = std::move(requested);
  return t;
}

}  // namespace

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("dialogaug_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Ontology RestaurantOntology() {
  Ontology o;
  o.informable["food"] = kFoods;
  o.informable["pricerange"] = kPrices;
  o.informable["area"] = kAreas;
  o.requestable = {"address", "area", "food", "name", "phone", "postcode", "pricerange"};
  return o;
}

Corpus SyntheticRestaurantCorpus(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Corpus corpus;
  corpus.ontology = RestaurantOntology();
  for (int d = 0; d < n; ++d) {
    Dialogue dlg;
    dlg.id = std::to_string(d);
    dlg.domain = "restaurant";
    std::vector<SlotValue> belief;
    const std::string name = Pick(rng, kNames);

    auto offer = [&] {
      return name + " is a " + BeliefValue(belief, "pricerange", "moderate") +
             " restaurant serving " + BeliefValue(belief, "food", "british") + " food in the " +
             BeliefValue(belief, "area", "centre") + " of town .";
    };

    // Opening request.
    const std::string price = Pick(rng, kPrices);
    const std::string food = Pick(rng, kFoods);
    const std::string area = Pick(rng, kAreas);
    std::string user;
    switch (UniformIndex(rng, 6)) {
      case 0:
        user = "i want a " + price + " restaurant that serves " + food + " food";
        SetBelief(belief, "pricerange", price);
        SetBelief(belief, "food", food);
        break;
      case 1:
        user = "i'm looking for " + food + " food in the " + area + " part of town";
        SetBelief(belief, "food", food);
        SetBelief(belief, "area", area);
        break;
      case 2:
        user = "i would like a " + price + " restaurant in the " + area;
        SetBelief(belief, "pricerange", price);
        SetBelief(belief, "area", area);
        break;
      case 3:
        user = "can you find me a " + price + " place that serves " + food + " food?";
        SetBelief(belief, "pricerange", price);
        SetBelief(belief, "food", food);
        break;
      case 4:
        user = "i need a restaurant in the " + area + " of town";
        SetBelief(belief, "area", area);
        break;
      default:
        user = "hello, i want to find a " + price + " " + food + " restaurant in the " + area +
               " area";
        SetBelief(belief, "pricerange", price);
        SetBelief(belief, "food", food);
        SetBelief(belief, "area", area);
        break;
    }
    dlg.turns.push_back(MakeTurn(0, user, offer(), belief, {}));

    const int extra = static_cast<int>(UniformIndex(rng, 3));
    for (int e = 0; e < extra; ++e) {
      const int idx = static_cast<int>(dlg.turns.size());
      switch (UniformIndex(rng, 3)) {
        case 0: {
          const std::string f = Pick(rng, kFoods);
          SetBelief(belief, "food", f);
          user = "how about " + f + " food?";
          break;
        }
        case 1: {
          const std::string a = Pick(rng, kAreas);
          SetBelief(belief, "area", a);
          user = "what about the " + a + " part of town";
          break;
        }
        default: {
          const std::string p = Pick(rng, kPrices);
          SetBelief(belief, "pricerange", p);
          user = "is there anything " + p + " instead";
          break;
        }
      }
      dlg.turns.push_back(MakeTurn(idx, user, offer(), belief, {}));
    }

    const int idx = static_cast<int>(dlg.turns.size());
    const std::string phone = Pick(rng, kPhones);
    const std::string address = Pick(rng, kAddresses);
    const std::string postcode = Pick(rng, kPostcodes);
    switch (UniformIndex(rng, 4)) {
      case 0:
        dlg.turns.push_back(MakeTurn(idx, "what is the address and phone number?",
                                     "the address is " + address + " and the phone number is " +
                                         phone + " .",
                                     belief, {"address", "phone"}));
        break;
      case 1:
        dlg.turns.push_back(MakeTurn(idx, "could you give me the postcode please",
                                     "the postcode is " + postcode + " .", belief, {"postcode"}));
        break;
      case 2:
        dlg.turns.push_back(MakeTurn(idx, "what is their phone number",
                                     "their phone number is " + phone + " .", belief, {"phone"}));
        break;
      default:
        dlg.turns.push_back(MakeTurn(idx, "may i have the address of the restaurant",
                                     "sure , it is at " + address + " .", belief, {"address"}));
        break;
    }
    if (UniformIndex(rng, 2) == 0) {
      dlg.turns.push_back(MakeTurn(static_cast<int>(dlg.turns.size()), "thank you goodbye",
                                   "you are welcome . goodbye .", belief, {}));
    }
    corpus.dialogues.push_back(std::move(dlg));
  }
  return corpus;
}

Corpus SyntheticKvretCorpus(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> events = {"dinner", "meeting", "doctor appointment",
                                           "tennis activity", "yoga activity"};
  const std::vector<std::string> parties = {"sister", "boss", "tom", "martha"};
  const std::vector<std::string> dates = {"monday", "tuesday", "friday", "the 5th"};
  const std::vector<std::string> times = {"7pm", "10am", "3pm", "11am"};
  const std::vector<std::string> locations = {"boston", "new york", "san francisco", "seattle"};
  const std::vector<std::string> attrs = {"rain", "snow", "cloudy", "warm"};
  const std::vector<std::string> poi_types = {"gas station", "coffee or tea place",
                                              "chinese restaurant", "parking garage"};
  const std::vector<std::string> pois = {"chevron", "starbucks", "panda express", "civic center garage"};
  const std::vector<std::string> distances = {"2 miles", "4 miles", "5 miles"};
  const std::vector<std::string> addresses = {"783 arcadia pl", "792 bedoin street",
                                              "842 arrowhead way"};

  Corpus corpus;
  Ontology& o = corpus.ontology;
  o.informable = {{"event", events},         {"party", parties},     {"date", dates},
                  {"time", times},           {"location", locations}, {"weather_attribute", attrs},
                  {"poi_type", poi_types},   {"poi", pois},          {"distance", distances}};
  o.requestable = {"address", "date", "distance", "party", "poi", "time", "weather_attribute"};

  for (int d = 0; d < n; ++d) {
    Dialogue dlg;
    dlg.id = "kv" + std::to_string(d);
    std::vector<SlotValue> belief;
    auto sorted = [&] {
      auto b = belief;
      std::sort(b.begin(), b.end(),
                [](const SlotValue& a, const SlotValue& c) { return a.slot < c.slot; });
      return b;
    };
    switch (d % 3) {
      case 0: {
        dlg.domain = "schedule";
        const std::string ev = Pick(rng, events);
        const std::string party = Pick(rng, parties);
        SetBelief(belief, "event", ev);
        dlg.turns.push_back(MakeTurn(0, "when is my " + ev + "?",
                                     "your " + ev + " is on " + Pick(rng, dates) + " at " +
                                         Pick(rng, times) + " .",
                                     sorted(), {"date", "time"}));
        SetBelief(belief, "party", party);
        dlg.turns.push_back(MakeTurn(1, "who is attending, is it my " + party + "?",
                                     "yes , your " + party + " will be there .", sorted(),
                                     {"party"}));
        break;
      }
      case 1: {
        dlg.domain = "weather";
        const std::string loc = Pick(rng, locations);
        const std::string attr = Pick(rng, attrs);
        const std::string date = Pick(rng, dates);
        SetBelief(belief, "location", loc);
        SetBelief(belief, "weather_attribute", attr);
        SetBelief(belief, "date", date);
        dlg.turns.push_back(MakeTurn(0, "will it be " + attr + " in " + loc + " on " + date + "?",
                                     "it will not be " + attr + " in " + loc + " on " + date + " .",
                                     sorted(), {"weather_attribute"}));
        break;
      }
      default: {
        dlg.domain = "navigate";
        const std::string type = Pick(rng, poi_types);
        SetBelief(belief, "poi_type", type);
        const std::string poi = Pick(rng, pois);
        dlg.turns.push_back(MakeTurn(0, "where is the nearest " + type + "?",
                                     poi + " is " + Pick(rng, distances) + " away .", sorted(),
                                     {"distance", "poi"}));
        SetBelief(belief, "poi", poi);
        dlg.turns.push_back(MakeTurn(1, "please give me directions to " + poi + ", thanks",
                                     "the address is " + Pick(rng, addresses) + " , drive carefully .",
                                     sorted(), {"address"}));
        break;
      }
    }
    corpus.dialogues.push_back(std::move(dlg));
  }
  return corpus;
}

std::string ToCamRestJson(const Corpus& corpus) {
  json root = json::array();
  for (const Dialogue& d : corpus.dialogues) {
    json dial = json::array();
    std::vector<SlotValue> prev;
    for (const Turn& t : d.turns) {
      json slu = json::array();
      json informs = json::array();
      for (const SlotValue& sv : t.constraints) {
        if (std::find(prev.begin(), prev.end(), sv) == prev.end()) {
          informs.push_back({sv.slot, sv.value});
        }
      }
      if (!informs.empty()) slu.push_back({{"act", "inform"}, {"slots", informs}});
      for (const std::string& r : t.requested) {
        slu.push_back({{"act", "request"}, {"slots", json::array({json::array({"slot", r})})}});
      }
      prev = t.constraints;
      dial.push_back({{"turn", t.index},
                      {"usr", {{"transcript", t.user.text}, {"slu", slu}}},
                      {"sys", {{"sent", t.machine.text}, {"DA", json::array()}}}});
    }
    root.push_back({{"dialogue_id", d.id}, {"dial", dial}, {"finished", true}});
  }
  return root.dump(1);
}

std::string ToKvretJson(const Corpus& corpus) {
  json root = json::array();
  for (const Dialogue& d : corpus.dialogues) {
    json entries = json::array();
    for (const Turn& t : d.turns) {
      entries.push_back({{"turn", "driver"},
                         {"data", {{"end_dialogue", false}, {"utterance", t.user.text}}}});
      json slots = json::object();
      for (const SlotValue& sv : t.constraints) slots[sv.slot] = sv.value;
      json requested = json::object();
      for (const std::string& r : corpus.ontology.requestable) {
        requested[r] = std::find(t.requested.begin(), t.requested.end(), r) != t.requested.end();
      }
      entries.push_back({{"turn", "assistant"},
                         {"data",
                          {{"end_dialogue", false},
                           {"utterance", t.machine.text},
                           {"slots", slots},
                           {"requested", requested}}}});
    }
    root.push_back({{"dialogue", entries},
                    {"scenario", {{"uuid", d.id}, {"task", {{"intent", d.domain}}}}}});
  }
  return root.dump(1);
}

std::filesystem::path DataDir() { return DIALOGAUG_DATA_DIR; }

PosLexicon BundledPosLexicon() { return LoadPosLexicon(DataDir() / "poslex.tsv"); }

SynonymLexicon BundledSynonyms() {
  return LoadSynonyms(DataDir() / "synonyms.tsv", SynonymFormat::kTsv);
}

StopList BundledStopList(const Ontology& ontology) {
  return LoadStopList(DataDir() / "stopwords_en.txt", ontology);
}

SynonymLexicon ThirtyEntryLexicon() {
  return ParseSynonymTsv(
      "want\tVERB\tdesire|need|wish\n"
      "need\tVERB\twant|require\n"
      "like\tVERB\twant|fancy\n"
      "find\tVERB\tlocate|get\n"
      "tell\tVERB\tsay|inform\n"
      "give\tVERB\tprovide|offer\n"
      "serves\tVERB\toffers\n"
      "looking\tVERB\tsearching|seeking\n"
      "have\tVERB\tget\n"
      "cheap\tADJ\tinexpensive|affordable\n"
      "expensive\tADJ\tpricey|costly\n"
      "moderate\tADJ\treasonable\n"
      "nearest\tADJ\tclosest\n"
      "good\tADJ\tnice|fine\n"
      "food\tNOUN\tcuisine|fare|meal\n"
      "restaurant\tNOUN\teatery|diner\n"
      "place\tNOUN\tspot|location\n"
      "area\tNOUN\tregion|zone\n"
      "part\tNOUN\tsection|area\n"
      "town\tNOUN\tcity\n"
      "address\tNOUN\tlocation\n"
      "phone\tNOUN\ttelephone\n"
      "number\tNOUN\tnumeral\n"
      "postcode\tNOUN\tzip code\n"
      "appointment\tNOUN\tengagement\n"
      "meeting\tNOUN\tconference\n"
      "directions\tNOUN\tinstructions\n"
      "centre\tNOUN\tcenter|middle\n"
      "instead\tADV\trather\n"
      "please\tADV\tkindly\n",
      "thirty_entries.tsv");
}

std::set<std::string> AllSingleSubstitutions(const TokenizedUtterance& tu,
                                              const SynonymLexicon& lex) {
  std::set<std::string> out;
  for (size_t i = 0; i < tu.tokens.size(); ++i) {
    const TaggedToken& tok = tu.tokens[i];
    if (tok.is_protected) continue;
    if (tok.pos != PosTag::kVerb && tok.pos != PosTag::kAdj && tok.pos != PosTag::kNoun) continue;
    for (const auto& [key, synonyms] : lex.entries()) {
      if (key.first != tok.surface || key.second != tok.pos) continue;
      for (const std::string& syn : synonyms) {
        std::string text;
        for (size_t j = 0; j < tu.tokens.size(); ++j) {
          if (j > 0) text += ' ';
          text += j == i ? syn : tu.tokens[j].surface;
        }
        out.insert(text);
      }
    }
  }
  return out;
}

EvalFixture CountsFixture(int64_t tp, int64_t fp, int64_t fn) {
  EvalFixture f;
  f.reference.ontology = RestaurantOntology();
  const std::string answer = "the phone number is <phone> .";
  const std::string dodge = "sorry , i do not have that information .";
  int n = 0;
  auto add = [&](const std::string& hyp, const std::string& ref, std::vector<std::string> req) {
    Dialogue d;
    d.id = "e" + std::to_string(n++);
    d.domain = "restaurant";
    d.turns.push_back(MakeTurn(0, "hello", "how can i help ?", {}, {}));
    d.turns.push_back(MakeTurn(1, "what is the phone number ?", ref, {}, std::move(req)));
    f.reference.dialogues.push_back(std::move(d));
    const std::string& id = f.reference.dialogues.back().id;
    f.hypotheses_jsonl += json{{"dialogue_id", id}, {"turn", 0}, {"response", "hi there ."}}.dump() + "\n";
    f.hypotheses_jsonl += json{{"dialogue_id", id}, {"turn", 1}, {"response", hyp}}.dump() + "\n";
  };
  for (int64_t i = 0; i < tp; ++i) add(answer, answer, {"phone"});
  for (int64_t i = 0; i < fp; ++i) add(answer, dodge, {"phone"});
  for (int64_t i = 0; i < fn; ++i) add(dodge, answer, {"phone"});
  for (int i = 0; i < 7; ++i) add(dodge, dodge, {"phone"});
  for (int i = 0; i < 5; ++i) add(answer, answer, {});
  return f;
}

bool IsStrictSubsequence(const std::vector<std::string>& sub,
                         const std::vector<std::string>& seq) {
  if (sub.size() >= seq.size()) return false;
  size_t j = 0;
  for (size_t i = 0; i < seq.size() && j < sub.size(); ++i) {
    if (seq[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

int CountOccurrences(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return 0;
  int count = 0;
  for (size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
    }
  }
  return count;
}

}  // namespace dialogaug::testing
