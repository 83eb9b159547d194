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

#include "dialogaug/sentaug.h"

#include <cctype>
#include <set>
#include <sstream>
#include <thread>

#include "dialogaug/errors.h"
#include "dialogaug/text.h"
#include "httplib.h"

namespace dialogaug {

using nlohmann::json;

namespace {

constexpr std::string_view kPlaceholderPrefix = "XSLOT";

bool IsWordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct PlaceholderHit {
  size_t begin;
  size_t end;
  int index;
  bool bounded;
};

std::vector<PlaceholderHit> FindPlaceholders(std::string_view text) {
  std::vector<PlaceholderHit> hits;
  size_t p = text.find(kPlaceholderPrefix);
  while (p != std::string_view::npos) {
    size_t j = p + kPlaceholderPrefix.size();
    const size_t digits = j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j > digits && j < text.size() && text[j] == 'X' && j - digits <= 9) {
      const int index = std::stoi(std::string(text.substr(digits, j - digits)));
      const size_t end = j + 1;
      const bool bounded =
          (p == 0 || !IsWordChar(text[p - 1])) && (end == text.size() || !IsWordChar(text[end]));
      hits.push_back({p, end, index, bounded});
      p = text.find(kPlaceholderPrefix, end);
    } else {
      p = text.find(kPlaceholderPrefix, p + 1);
    }
  }
  return hits;
}

bool IsPlaceholderWord(std::string_view word) {
  const auto hits = FindPlaceholders(word);
  return hits.size() == 1 && hits[0].begin == 0 && hits[0].end == word.size();
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

}  // namespace

std::string_view RewriteModeName(RewriteMode mode) {
  return mode == RewriteMode::kTranslate ? "translate" : "paraphrase";
}

void ValidateRequest(const RewriteRequest& request) {
  if (request.mode == RewriteMode::kTranslate && request.source_lang == request.target_lang) {
    throw ArgumentError("translate request with identical source and target language '" +
                        request.source_lang + "'");
  }
  if (!(request.sampling.temperature > 0.0)) {
    throw ArgumentError("sampling temperature must be > 0");
  }
}

json ToJson(const RewriteRequest& r) {
  return json{{"text", r.text},
              {"mode", RewriteModeName(r.mode)},
              {"source_lang", r.source_lang},
              {"target_lang", r.target_lang},
              {"sampling",
               {{"greedy", r.sampling.greedy},
                {"temperature", r.sampling.temperature},
                {"seed", r.sampling.seed}}}};
}

RewriteRequest RequestFromJson(const json& j) {
  try {
    RewriteRequest r;
    r.text = j.at("text").get<std::string>();
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "translate") {
      r.mode = RewriteMode::kTranslate;
    } else if (mode == "paraphrase") {
      r.mode = RewriteMode::kParaphrase;
    } else {
      throw ParseError("unknown rewrite mode '" + mode + "'");
    }
    r.source_lang = j.value("source_lang", "");
    r.target_lang = j.value("target_lang", "");
    const json& s = j.at("sampling");
    r.sampling.greedy = s.at("greedy").get<bool>();
    r.sampling.temperature = s.at("temperature").get<double>();
    r.sampling.seed = s.at("seed").get<int64_t>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed rewrite request: ") + e.what());
  }
}

RewriteResponse ResponseFromJson(const json& j) {
  if (!j.is_object()) throw BackendError("rewrite response is not a JSON object");
  auto it = j.find("text");
  if (it == j.end() || !it->is_string()) throw BackendError("rewrite response lacks \"text\"");
  RewriteResponse r{it->get<std::string>()};
  if (Trim(r.text).empty()) throw BackendError("rewrite response text is empty");
  return r;
}

std::string RequestKey(const RewriteRequest& request) {
  json j = ToJson(request);
  if (request.mode == RewriteMode::kParaphrase) {
    j.erase("source_lang");
    j.erase("target_lang");
  }
  return ToHex(Fnv1a64(j.dump()));
}

MockMode ParseMockMode(std::string_view name) {
  const std::string n = ToLower(Trim(name));
  if (n == "identity") return MockMode::kIdentity;
  if (n == "map" || n == "map_on_return_leg") return MockMode::kMapOnReturnLeg;
  if (n == "echo_seed") return MockMode::kEchoSeed;
  if (n == "drop_placeholders") return MockMode::kDropPlaceholders;
  throw ArgumentError("unknown mock backend mode '" + std::string(name) +
                      "' (expected identity, map_on_return_leg, echo_seed or drop_placeholders)");
}

std::string_view MockModeName(MockMode mode) {
  switch (mode) {
    case MockMode::kIdentity:
      return "identity";
    case MockMode::kMapOnReturnLeg:
      return "map_on_return_leg";
    case MockMode::kEchoSeed:
      return "echo_seed";
    case MockMode::kDropPlaceholders:
      return "drop_placeholders";
  }
  return "identity";
}

MockBackend::MockBackend(MockMode mode, std::map<std::string, std::string> word_map,
                         std::string home_lang)
    : mode_(mode), word_map_(std::move(word_map)), home_lang_(std::move(home_lang)) {}

RewriteResponse MockBackend::Rewrite(const RewriteRequest& request) {
  switch (mode_) {
    case MockMode::kIdentity:
      return {request.text};
    case MockMode::kMapOnReturnLeg: {
      const bool return_leg = request.mode == RewriteMode::kParaphrase ||
                              request.target_lang == home_lang_;
      if (!return_leg) return {request.text};
      std::vector<std::string> words = SplitWhitespace(request.text);
      for (std::string& w : words) {
        if (IsPlaceholderWord(w)) continue;
        if (auto it = word_map_.find(w); it != word_map_.end()) w = it->second;
      }
      return {JoinTokens(words)};
    }
    case MockMode::kEchoSeed:
      return {request.text + " seed" + std::to_string(request.sampling.seed)};
    case MockMode::kDropPlaceholders: {
      std::vector<std::string> kept;
      for (std::string& w : SplitWhitespace(request.text)) {
        if (!IsPlaceholderWord(w)) kept.push_back(std::move(w));
      }
      if (kept.empty()) kept.push_back("something");
      return {JoinTokens(kept)};
    }
  }
  return {request.text};
}

std::map<std::string, std::string> LoadWordMap(const std::filesystem::path& path) {
  std::map<std::string, std::string> map;
  std::istringstream in(ReadFile(path));
  int n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t tab = t.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(n) + ": expected from<TAB>to");
    }
    map[ToLower(Trim(t.substr(0, tab)))] = ToLower(Trim(t.substr(tab + 1)));
  }
  return map;
}

HttpBackend::HttpBackend(std::string endpoint, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  while (!endpoint.empty() && endpoint.back() == '/') endpoint.pop_back();
  const size_t scheme = endpoint.find("://");
  const size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const size_t slash = endpoint.find('/', host_start);
  if (endpoint.empty() || host_start >= endpoint.size()) {
    throw ArgumentError("invalid backend endpoint '" + endpoint + "'");
  }
  base_ = endpoint.substr(0, slash);
  path_ = (slash == std::string::npos ? "" : endpoint.substr(slash)) + "/rewrite";
}

RewriteResponse HttpBackend::Rewrite(const RewriteRequest& request) {
  httplib::Client client(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto result = client.Post(path_, ToJson(request).dump(), "application/json");
  if (!result) {
    throw BackendError(base_ + path_ + ": " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw BackendError(base_ + path_ + ": HTTP " + std::to_string(result->status));
  }
  json body;
  try {
    body = json::parse(result->body);
  } catch (const json::parse_error& e) {
    throw BackendError(base_ + path_ + ": malformed response body: " + e.what());
  }
  return ResponseFromJson(body);
}

void ValidateBackendConfig(const BackendConfig& config) {
  if (config.max_retries < 0) throw ArgumentError("max_retries must be >= 0");
  if (config.max_inflight < 1) throw ArgumentError("max_inflight must be >= 1");
}

RewriteClient::RewriteClient(RewriteBackend& backend, BackendConfig config)
    : backend_(backend), config_(std::move(config)) {
  ValidateBackendConfig(config_);
}

void RewriteClient::Acquire() {
  std::unique_lock lock(slots_mu_);
  slots_cv_.wait(lock, [this] { return inflight_ < config_.max_inflight; });
  ++inflight_;
}

void RewriteClient::Release() {
  {
    std::lock_guard lock(slots_mu_);
    --inflight_;
  }
  slots_cv_.notify_one();
}

std::optional<RewriteResponse> RewriteClient::Rewrite(const RewriteRequest& request) {
  ValidateRequest(request);
  const std::string key = RequestKey(request);
  {
    std::lock_guard lock(cache_mu_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++cache_hits_;
      return RewriteResponse{it->second};
    }
  }
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      std::this_thread::sleep_for(config_.backoff_base * (int64_t{1} << std::min(attempt - 1, 20)));
    }
    ++calls_;
    std::optional<RewriteResponse> response;
    {
      InflightSlot slot(*this);
      try {
        response = backend_.Rewrite(request);
      } catch (const BackendError&) {
        continue;
      }
    }
    if (Trim(response->text).empty()) continue;
    std::lock_guard lock(cache_mu_);
    cache_.emplace(key, response->text);
    return response;
  }
  ++failures_;
  return std::nullopt;
}

void RewriteClient::LoadCache(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return;
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": invalid cache file: " + e.what());
  }
  if (!j.is_object()) throw ParseError(path.string() + ": cache must be a JSON object");
  std::lock_guard lock(cache_mu_);
  for (auto& [k, v] : j.items()) {
    if (v.is_string()) cache_[k] = v.get<std::string>();
  }
}

void RewriteClient::SaveCache(const std::filesystem::path& path) const {
  json j = json::object();
  {
    std::lock_guard lock(cache_mu_);
    for (const auto& [k, v] : cache_) j[k] = v;
  }
  WriteFile(path, j.dump(2) + "\n");
}

void ValidatePivots(const PivotSet& pivots, std::string_view source_lang) {
  if (pivots.langs.empty()) throw ArgumentError("pivot language list is empty");
  std::set<std::string> seen;
  for (const std::string& l : pivots.langs) {
    if (l.empty()) throw ArgumentError("empty pivot language code");
    if (l == source_lang) {
      throw ArgumentError("pivot language '" + l + "' equals the source language");
    }
    if (!seen.insert(l).second) throw ArgumentError("duplicate pivot language '" + l + "'");
  }
}

std::string PlaceholderToken(int i) { return "XSLOT" + std::to_string(i) + "X"; }

Placeholdered Placeholder(const TokenizedUtterance& tu) {
  Placeholdered out;
  std::vector<std::string> words;
  size_t next_span = 0;
  for (size_t i = 0; i < tu.tokens.size();) {
    if (next_span < tu.spans.size() && tu.spans[next_span].begin == i) {
      const TokenSpan& span = tu.spans[next_span];
      const int id = static_cast<int>(next_span);
      words.push_back(PlaceholderToken(id));
      out.slots[id] = tu.SpanText(span);
      i = span.end;
      ++next_span;
    } else {
      words.push_back(tu.tokens[i].surface);
      ++i;
    }
  }
  out.text = JoinTokens(words);
  return out;
}

std::optional<std::string> Restore(std::string_view text,
                                   const std::map<int, std::string>& slots) {
  const auto hits = FindPlaceholders(text);
  std::map<int, int> counts;
  for (const PlaceholderHit& h : hits) {
    if (!h.bounded || !slots.count(h.index)) return std::nullopt;
    ++counts[h.index];
  }
  for (const auto& [id, surface] : slots) {
    if (counts[id] != 1) return std::nullopt;
  }
  std::string out;
  size_t pos = 0;
  for (const PlaceholderHit& h : hits) {
    out.append(text.substr(pos, h.begin - pos));
    out += slots.at(h.index);
    pos = h.end;
  }
  out.append(text.substr(pos));
  return out;
}

SentenceAugmenter::SentenceAugmenter(RewriteClient& client, std::string source_lang)
    : client_(client), source_lang_(std::move(source_lang)) {}

std::optional<std::string> SentenceAugmenter::Finish(std::string_view backend_text,
                                                     const Placeholdered& ph) const {
  auto restored = Restore(backend_text, ph.slots);
  if (!restored) return std::nullopt;
  std::string text = TokenizedForm(ToLower(*restored));
  if (text.empty()) return std::nullopt;
  return text;
}

Variant SentenceAugmenter::Fallback(const TokenizedUtterance& tu, Method method,
                                    int variant_index, std::string_view reason) {
  ++fallbacks_;
  Variant v;
  v.text = tu.source_text;
  v.method = method;
  v.variant_index = variant_index;
  v.meta = {{"fallback", "1"}, {"fallback_reason", std::string(reason)}};
  return v;
}

Variant SentenceAugmenter::Backtranslate(const TokenizedUtterance& tu, std::string_view pivot,
                                         int variant_index) {
  const Placeholdered ph = Placeholder(tu);
  RewriteRequest out_leg{ph.text, RewriteMode::kTranslate, source_lang_, std::string(pivot), {}};
  auto translated = client_.Rewrite(out_leg);
  if (!translated) {
    Variant v = Fallback(tu, Method::kBacktranslate, variant_index, "backend");
    v.meta["pivot"] = std::string(pivot);
    return v;
  }
  RewriteRequest back_leg{translated->text, RewriteMode::kTranslate, std::string(pivot),
                          source_lang_, {}};
  auto back = client_.Rewrite(back_leg);
  std::optional<std::string> text;
  if (back) text = Finish(back->text, ph);
  if (!text) {
    Variant v = Fallback(tu, Method::kBacktranslate, variant_index, back ? "restore" : "backend");
    v.meta["pivot"] = std::string(pivot);
    return v;
  }
  Variant v;
  v.text = *std::move(text);
  v.method = Method::kBacktranslate;
  v.variant_index = variant_index;
  v.meta = {{"fallback", "0"}, {"pivot", std::string(pivot)}};
  return v;
}

std::vector<Variant> SentenceAugmenter::Paraphrase(const TokenizedUtterance& tu, int k,
                                                   const Sampling& sampling) {
  if (k <= 0) throw ArgumentError("paraphrase count must be >= 1, got " + std::to_string(k));
  const Placeholdered ph = Placeholder(tu);
  std::vector<Variant> out;
  out.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    Sampling s = sampling;
    if (!s.greedy) s.seed = sampling.seed + i;
    RewriteRequest req{ph.text, RewriteMode::kParaphrase, source_lang_, source_lang_, s};
    auto response = client_.Rewrite(req);
    std::optional<std::string> text;
    if (response) text = Finish(response->text, ph);
    if (!text) {
      out.push_back(Fallback(tu, Method::kParaphrase, i + 1, response ? "restore" : "backend"));
      out.back().meta["seed"] = std::to_string(s.seed);
      continue;
    }
    Variant v;
    v.text = *std::move(text);
    v.method = Method::kParaphrase;
    v.variant_index = i + 1;
    v.meta = {{"fallback", "0"}, {"seed", std::to_string(s.seed)}};
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace dialogaug
