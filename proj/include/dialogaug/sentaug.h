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

// Sentence-level augmentation. Slot values are swapped for opaque
// placeholders before the text leaves the process, and restored afterwards;
// any rewrite that loses, duplicates or invents a placeholder falls back to
// the original utterance so corpus multiplicities stay exact.

#ifndef DIALOGAUG_SENTAUG_H_
#define DIALOGAUG_SENTAUG_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialogaug/wordaug.h"
#include "json.hpp"

namespace dialogaug {

enum class RewriteMode { kTranslate, kParaphrase };

std::string_view RewriteModeName(RewriteMode mode);

struct Sampling {
  bool greedy = true;
  double temperature = 1.0;
  int64_t seed = 0;

  bool operator==(const Sampling&) const = default;
};

struct RewriteRequest {
  std::string text;
  RewriteMode mode = RewriteMode::kTranslate;
  std::string source_lang;
  std::string target_lang;
  Sampling sampling;

  bool operator==(const RewriteRequest&) const = default;
};

struct RewriteResponse {
  std::string text;
};

// Throws ArgumentError: translate with equal languages, temperature <= 0.
void ValidateRequest(const RewriteRequest& request);

// Wire format: {"text", "mode", "source_lang", "target_lang",
//               "sampling": {"greedy", "temperature", "seed"}}.
nlohmann::json ToJson(const RewriteRequest& request);
RewriteRequest RequestFromJson(const nlohmann::json& j);
// Throws BackendError when "text" is missing, not a string or empty.
RewriteResponse ResponseFromJson(const nlohmann::json& j);

// Cache key. Language codes are ignored in paraphrase mode.
std::string RequestKey(const RewriteRequest& request);

class RewriteBackend {
 public:
  virtual ~RewriteBackend() = default;
  // Throws BackendError on any retryable failure.
  virtual RewriteResponse Rewrite(const RewriteRequest& request) = 0;
};

enum class MockMode {
  kIdentity,
  // Applies the word map on legs that translate into `home_lang` and in
  // paraphrase mode.
  kMapOnReturnLeg,
  // Appends " seed<N>" where N is sampling.seed.
  kEchoSeed,
  // Removes every placeholder token; used to exercise fallback.
  kDropPlaceholders,
};

MockMode ParseMockMode(std::string_view name);
std::string_view MockModeName(MockMode mode);

// In-process deterministic stand-in for translation/paraphrase services.
// Placeholder tokens are never rewritten (except by kDropPlaceholders).
class MockBackend : public RewriteBackend {
 public:
  explicit MockBackend(MockMode mode, std::map<std::string, std::string> word_map = {},
                       std::string home_lang = "en");

  RewriteResponse Rewrite(const RewriteRequest& request) override;

 private:
  MockMode mode_;
  std::map<std::string, std::string> word_map_;
  std::string home_lang_;
};

// Loads "from<TAB>to" rows for the mock word map.
std::map<std::string, std::string> LoadWordMap(const std::filesystem::path& path);

// POST {endpoint}/rewrite. Non-2xx, transport errors and malformed bodies
// raise BackendError.
class HttpBackend : public RewriteBackend {
 public:
  HttpBackend(std::string endpoint, std::chrono::milliseconds timeout);

  RewriteResponse Rewrite(const RewriteRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;  // prefix + "/rewrite"
  std::chrono::milliseconds timeout_;
};

struct BackendConfig {
  std::string endpoint;
  std::chrono::milliseconds timeout{10000};
  int max_retries = 3;
  int max_inflight = 4;
  std::chrono::milliseconds backoff_base{200};
};

// Throws ArgumentError when max_retries < 0 or max_inflight < 1.
void ValidateBackendConfig(const BackendConfig& config);

// Retry, in-flight limiting and request-level caching in front of a
// backend. Thread-safe.
class RewriteClient {
 public:
  RewriteClient(RewriteBackend& backend, BackendConfig config);

  // nullopt once 1 + max_retries attempts have failed.
  std::optional<RewriteResponse> Rewrite(const RewriteRequest& request);

  // JSON map from RequestKey to response text. A missing file is not an
  // error.
  void LoadCache(const std::filesystem::path& path);
  void SaveCache(const std::filesystem::path& path) const;

  int64_t calls() const { return calls_.load(); }
  int64_t retries() const { return retries_.load(); }
  int64_t failures() const { return failures_.load(); }
  int64_t cache_hits() const { return cache_hits_.load(); }

 private:
  class InflightSlot {
   public:
    explicit InflightSlot(RewriteClient& c) : c_(c) { c_.Acquire(); }
    ~InflightSlot() { c_.Release(); }
    InflightSlot(const InflightSlot&) = delete;
    InflightSlot& operator=(const InflightSlot&) = delete;

   private:
    RewriteClient& c_;
  };

  void Acquire();
  void Release();

  RewriteBackend& backend_;
  BackendConfig config_;

  mutable std::mutex cache_mu_;
  std::map<std::string, std::string> cache_;

  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  int inflight_ = 0;

  std::atomic<int64_t> calls_{0};
  std::atomic<int64_t> retries_{0};
  std::atomic<int64_t> failures_{0};
  std::atomic<int64_t> cache_hits_{0};
};

struct PivotSet {
  std::vector<std::string> langs{"zh", "ja", "fr", "de"};
};

// Throws ArgumentError for empty, duplicate or source-language codes.
void ValidatePivots(const PivotSet& pivots, std::string_view source_lang = "en");

struct Placeholdered {
  std::string text;
  std::map<int, std::string> slots;
};

std::string PlaceholderToken(int i);

// Replaces the i-th protected span (left to right) with "XSLOT{i}X" in the
// space-joined token text.
Placeholdered Placeholder(const TokenizedUtterance& tu);

// Succeeds iff every placeholder in `slots` occurs exactly once, as a whole
// word, and no other placeholder occurs.
std::optional<std::string> Restore(std::string_view text, const std::map<int, std::string>& slots);

// Back-translation and paraphrasing over a RewriteClient. Failures never
// propagate: the variant falls back to the source utterance, meta
// "fallback" is set to "1", and the fallback counter is incremented.
class SentenceAugmenter {
 public:
  explicit SentenceAugmenter(RewriteClient& client, std::string source_lang = "en");

  // placeholder -> source->pivot -> pivot->source -> restore.
  Variant Backtranslate(const TokenizedUtterance& tu, std::string_view pivot,
                        int variant_index = 1);

  // k variants. Greedy sends k identical requests; sampling uses seed
  // sampling.seed + i for the i-th variant (0-based). Throws ArgumentError
  // for k <= 0.
  std::vector<Variant> Paraphrase(const TokenizedUtterance& tu, int k, const Sampling& sampling);

  int64_t fallbacks() const { return fallbacks_.load(); }

 private:
  // Lowercased, retokenized and restored, or nullopt.
  std::optional<std::string> Finish(std::string_view backend_text,
                                    const Placeholdered& ph) const;
  Variant Fallback(const TokenizedUtterance& tu, Method method, int variant_index,
                   std::string_view reason);

  RewriteClient& client_;
  std::string source_lang_;
  std::atomic<int64_t> fallbacks_{0};
};

}  // namespace dialogaug

#endif  // DIALOGAUG_SENTAUG_H_
