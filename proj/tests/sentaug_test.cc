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

#include <atomic>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "dialogaug/errors.h"
#include "dialogaug/text.h"
#include "fixtures.h"
#include "gtest/gtest.h"
#include "httplib.h"

namespace dialogaug {
namespace {

using namespace std::chrono_literals;

BackendConfig FastConfig() {
  BackendConfig c;
  c.backoff_base = 1ms;
  return c;
}

class SentAugTest : public ::testing::Test {
 protected:
  SentAugTest()
      : ontology_(testing::RestaurantOntology()), poslex_(testing::BundledPosLexicon()) {}

  TokenizedUtterance Prepare(const std::string& text, std::vector<SlotValue> constraints = {}) {
    Turn turn;
    turn.user = {text, Speaker::kUser};
    turn.constraints = std::move(constraints);
    return TokenizeAndProtect(turn.user, turn, ontology_, poslex_);
  }

  Ontology ontology_;
  PosLexicon poslex_;
};

// Records every request and fails the first `failures` calls.
class ScriptedBackend : public RewriteBackend {
 public:
  explicit ScriptedBackend(int failures = 0) : failures_left_(failures) {}

  RewriteResponse Rewrite(const RewriteRequest& request) override {
    std::lock_guard lock(mu_);
    requests.push_back(request);
    if (failures_left_ > 0) {
      --failures_left_;
      throw BackendError("scripted failure");
    }
    return {request.text};
  }

  std::vector<RewriteRequest> requests;

 private:
  std::mutex mu_;
  int failures_left_;
};

TEST_F(SentAugTest, PlaceholderReplacesSpansLeftToRight) {
  const Placeholdered ph =
      Placeholder(Prepare("cheap asian oriental food in the north", {{"food", "asian oriental"}}));
  EXPECT_EQ(ph.text, "XSLOT0X XSLOT1X food in the XSLOT2X");
  EXPECT_EQ(ph.slots, (std::map<int, std::string>{
                          {0, "cheap"}, {1, "asian oriental"}, {2, "north"}}));
  EXPECT_EQ(PlaceholderToken(12), "XSLOT12X");
}

TEST(RestoreTest, AcceptsExactlyOnceWholeWord) {
  const std::map<int, std::string> slots = {{0, "cheap"}, {1, "asian oriental"}};
  EXPECT_EQ(Restore("i want XSLOT0X XSLOT1X food", slots), "i want cheap asian oriental food");
  EXPECT_EQ(Restore("XSLOT1X, XSLOT0X.", slots), "asian oriental, cheap.");
  EXPECT_EQ(Restore("no slots here", {}), "no slots here");
}

TEST(RestoreTest, RejectsLostDuplicatedUnknownOrGluedPlaceholders) {
  const std::map<int, std::string> slots = {{0, "cheap"}, {1, "thai"}};
  EXPECT_FALSE(Restore("i want XSLOT0X food", slots));
  EXPECT_FALSE(Restore("XSLOT0X XSLOT0X XSLOT1X", slots));
  EXPECT_FALSE(Restore("XSLOT0X XSLOT1X XSLOT2X", slots));
  EXPECT_FALSE(Restore("XSLOT0Xs XSLOT1X", slots));
  EXPECT_FALSE(Restore("aXSLOT0X XSLOT1X", slots));
}

TEST_F(SentAugTest, PlaceholderRestoreRoundTripProperty) {
  const Corpus corpus = testing::SyntheticRestaurantCorpus(80, 3);
  const SlotMatcher matcher(corpus.ontology);
  int with_slots = 0;
  for (const Dialogue& d : corpus.dialogues) {
    for (const Turn& t : d.turns) {
      for (const Utterance* u : {&t.user, &t.machine}) {
        const TokenizedUtterance tu = TokenizeAndProtect(*u, t, matcher, poslex_);
        const Placeholdered ph = Placeholder(tu);
        with_slots += !ph.slots.empty();
        EXPECT_EQ(Restore(ph.text, ph.slots), tu.Text()) << u->text;
      }
    }
  }
  EXPECT_GT(with_slots, 50);
}

TEST_F(SentAugTest, IdentityBacktranslationReproducesTokenizedText) {
  MockBackend mock(MockMode::kIdentity);
  RewriteClient client(mock, FastConfig());
  SentenceAugmenter aug(client);
  const TokenizedUtterance tu = Prepare("I want cheap food!", {{"pricerange", "cheap"}});
  const Variant v = aug.Backtranslate(tu, "fr", 3);
  EXPECT_EQ(v.text, "i want cheap food !");
  EXPECT_EQ(v.method, Method::kBacktranslate);
  EXPECT_EQ(v.variant_index, 3);
  EXPECT_EQ(v.meta.at("fallback"), "0");
  EXPECT_EQ(v.meta.at("pivot"), "fr");
  EXPECT_EQ(aug.fallbacks(), 0);
}

TEST_F(SentAugTest, MapOnReturnLegOnlyTouchesUnprotectedWords) {
  MockBackend mock(MockMode::kMapOnReturnLeg, {{"want", "need"}, {"cheap", "costly"}});
  RewriteClient client(mock, FastConfig());
  SentenceAugmenter aug(client);
  const Variant v = aug.Backtranslate(Prepare("i want cheap food", {{"pricerange", "cheap"}}), "zh");
  EXPECT_EQ(v.text, "i need cheap food");
}

TEST_F(SentAugTest, BacktranslationSendsBothLegsGreedy) {
  ScriptedBackend backend;
  RewriteClient client(backend, FastConfig());
  SentenceAugmenter aug(client);
  aug.Backtranslate(Prepare("i want thai food", {{"food", "thai"}}), "ja");
  ASSERT_EQ(backend.requests.size(), 2u);
  EXPECT_EQ(backend.requests[0].text, "i want XSLOT0X food");
  EXPECT_EQ(backend.requests[0].source_lang, "en");
  EXPECT_EQ(backend.requests[0].target_lang, "ja");
  EXPECT_EQ(backend.requests[1].source_lang, "ja");
  EXPECT_EQ(backend.requests[1].target_lang, "en");
  for (const RewriteRequest& r : backend.requests) {
    EXPECT_EQ(r.mode, RewriteMode::kTranslate);
    EXPECT_TRUE(r.sampling.greedy);
  }
}

TEST_F(SentAugTest, DroppedPlaceholderFallsBackToOriginal) {
  MockBackend mock(MockMode::kDropPlaceholders);
  RewriteClient client(mock, FastConfig());
  SentenceAugmenter aug(client);
  const TokenizedUtterance tu = Prepare("i want thai food", {{"food", "thai"}});
  const Variant v = aug.Backtranslate(tu, "de");
  EXPECT_EQ(v.text, "i want thai food");
  EXPECT_EQ(v.meta.at("fallback"), "1");
  EXPECT_EQ(v.meta.at("fallback_reason"), "restore");
  EXPECT_EQ(aug.fallbacks(), 1);

  // Utterances without slot values have nothing to lose.
  const Variant plain = aug.Backtranslate(Prepare("hello there"), "de");
  EXPECT_EQ(plain.meta.at("fallback"), "0");
  EXPECT_EQ(aug.fallbacks(), 1);
}

TEST_F(SentAugTest, SampledParaphrasesUseConsecutiveSeeds) {
  MockBackend mock(MockMode::kEchoSeed);
  RewriteClient client(mock, FastConfig());
  SentenceAugmenter aug(client);
  Sampling s;
  s.greedy = false;
  s.seed = 100;
  const auto vs = aug.Paraphrase(Prepare("i want thai food", {{"food", "thai"}}), 4, s);
  ASSERT_EQ(vs.size(), 4u);
  std::set<std::string> distinct;
  for (size_t i = 0; i < vs.size(); ++i) {
    EXPECT_EQ(vs[i].text, "i want thai food seed" + std::to_string(100 + i));
    EXPECT_EQ(vs[i].variant_index, static_cast<int>(i) + 1);
    EXPECT_EQ(vs[i].meta.at("seed"), std::to_string(100 + i));
    distinct.insert(vs[i].text);
  }
  EXPECT_EQ(distinct.size(), 4u);
}

TEST_F(SentAugTest, GreedyParaphraseIsIdentityUnderIdentityMock) {
  MockBackend mock(MockMode::kIdentity);
  RewriteClient client(mock, FastConfig());
  SentenceAugmenter aug(client);
  const auto vs = aug.Paraphrase(Prepare("how about asian oriental food?", {{"food", "asian oriental"}}),
                                 1, Sampling{});
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].text, "how about asian oriental food ?");
  EXPECT_THROW(aug.Paraphrase(Prepare("hi"), 0, Sampling{}), ArgumentError);
}

TEST_F(SentAugTest, MultiWordValueSurvivesParaphrase) {
  MockBackend mock(MockMode::kMapOnReturnLeg, {{"asian", "european"}, {"food", "cuisine"}});
  RewriteClient client(mock, FastConfig());
  SentenceAugmenter aug(client);
  const auto vs = aug.Paraphrase(
      Prepare("how about asian oriental food", {{"food", "asian oriental"}}), 1, Sampling{});
  EXPECT_EQ(vs[0].text, "how about asian oriental cuisine");
}

TEST(RewriteClientTest, RetriesThenSucceeds) {
  ScriptedBackend backend(2);
  RewriteClient client(backend, FastConfig());
  const RewriteRequest req{"hello", RewriteMode::kTranslate, "en", "fr", {}};
  const auto r = client.Rewrite(req);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->text, "hello");
  EXPECT_EQ(client.calls(), 3);
  EXPECT_EQ(client.retries(), 2);
  EXPECT_EQ(client.failures(), 0);
}

TEST(RewriteClientTest, GivesUpAfterMaxRetriesAndAugmenterFallsBack) {
  ScriptedBackend backend(100);
  BackendConfig config = FastConfig();
  config.max_retries = 2;
  RewriteClient client(backend, config);
  EXPECT_FALSE(client.Rewrite({"hello", RewriteMode::kTranslate, "en", "fr", {}}).has_value());
  EXPECT_EQ(client.calls(), 3);
  EXPECT_EQ(client.failures(), 1);

  SentenceAugmenter aug(client);
  TokenizedUtterance tu;
  tu.source_text = "hello";
  tu.tokens = {{"hello", PosTag::kOther, false}};
  const Variant v = aug.Backtranslate(tu, "fr");
  EXPECT_EQ(v.text, "hello");
  EXPECT_EQ(v.meta.at("fallback_reason"), "backend");
  EXPECT_EQ(aug.fallbacks(), 1);
}

TEST(RewriteClientTest, CachesByRequest) {
  ScriptedBackend backend;
  RewriteClient client(backend, FastConfig());
  const RewriteRequest req{"hello", RewriteMode::kTranslate, "en", "fr", {}};
  client.Rewrite(req);
  client.Rewrite(req);
  RewriteRequest other = req;
  other.target_lang = "de";
  client.Rewrite(other);
  EXPECT_EQ(backend.requests.size(), 2u);
  EXPECT_EQ(client.cache_hits(), 1);

  testing::TempDir dir;
  client.SaveCache(dir / "cache.json");
  ScriptedBackend fresh_backend;
  RewriteClient fresh(fresh_backend, FastConfig());
  fresh.LoadCache(dir / "cache.json");
  fresh.LoadCache(dir / "absent.json");
  EXPECT_EQ(fresh.Rewrite(other)->text, "hello");
  EXPECT_TRUE(fresh_backend.requests.empty());
}

TEST(RewriteClientTest, ParaphraseKeyIgnoresLanguages) {
  RewriteRequest a{"x", RewriteMode::kParaphrase, "en", "en", {}};
  RewriteRequest b = a;
  b.target_lang = "fr";
  EXPECT_EQ(RequestKey(a), RequestKey(b));
  b.sampling.seed = 1;
  EXPECT_NE(RequestKey(a), RequestKey(b));
}

TEST(RewriteClientTest, RespectsMaxInflight) {
  class SlowBackend : public RewriteBackend {
   public:
    RewriteResponse Rewrite(const RewriteRequest& request) override {
      const int now = ++inflight;
      int seen = peak.load();
      while (now > seen && !peak.compare_exchange_weak(seen, now)) {
      }
      std::this_thread::sleep_for(5ms);
      --inflight;
      return {request.text};
    }
    std::atomic<int> inflight{0};
    std::atomic<int> peak{0};
  } backend;
  BackendConfig config = FastConfig();
  config.max_inflight = 2;
  RewriteClient client(backend, config);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 5; ++i) {
        client.Rewrite({"t" + std::to_string(t) + "_" + std::to_string(i), RewriteMode::kTranslate,
                        "en", "fr", {}});
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(client.calls(), 40);
  EXPECT_LE(backend.peak.load(), 2);
  EXPECT_GE(backend.peak.load(), 1);
}

TEST(RewriteRequestTest, Validation) {
  EXPECT_THROW(ValidateRequest({"x", RewriteMode::kTranslate, "en", "en", {}}), ArgumentError);
  RewriteRequest hot{"x", RewriteMode::kParaphrase, "en", "en", {false, 0.0, 1}};
  EXPECT_THROW(ValidateRequest(hot), ArgumentError);
  BackendConfig bad;
  bad.max_inflight = 0;
  EXPECT_THROW(ValidateBackendConfig(bad), ArgumentError);
  EXPECT_THROW(ValidatePivots(PivotSet{{"fr", "fr"}}), ArgumentError);
  EXPECT_THROW(ValidatePivots(PivotSet{{"en"}}), ArgumentError);
  EXPECT_THROW(ValidatePivots(PivotSet{{}}), ArgumentError);
  EXPECT_NO_THROW(ValidatePivots(PivotSet{}));
  EXPECT_THROW(ParseMockMode("loud"), ArgumentError);
}

TEST(RewriteRequestTest, JsonRoundTripAndResponseChecks) {
  const RewriteRequest r{"i want XSLOT0X", RewriteMode::kParaphrase, "en", "en", {false, 0.7, 9}};
  EXPECT_EQ(RequestFromJson(ToJson(r)), r);
  EXPECT_THROW(ResponseFromJson(nlohmann::json{{"txt", "a"}}), BackendError);
  EXPECT_THROW(ResponseFromJson(nlohmann::json{{"text", "  "}}), BackendError);
  EXPECT_THROW(ResponseFromJson(nlohmann::json::array()), BackendError);
  EXPECT_EQ(ResponseFromJson(nlohmann::json{{"text", "ok"}}).text, "ok");
}

class HttpBackendTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/rewrite", [this](const httplib::Request& req, httplib::Response& res) {
      const RewriteRequest r = RequestFromJson(nlohmann::json::parse(req.body));
      {
        std::lock_guard lock(mu_);
        seen_.push_back(r);
      }
      if (r.text == "boom") {
        res.status = 503;
        return;
      }
      if (r.text == "garbage") {
        res.set_content("not json", "application/json");
        return;
      }
      res.set_content(nlohmann::json{{"text", r.text + " !"}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  std::string Endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::vector<RewriteRequest> seen_;
};

TEST_F(HttpBackendTest, PostsRequestAndParsesResponse) {
  HttpBackend backend(Endpoint() + "/", 2000ms);
  const RewriteRequest r{"hello XSLOT0X", RewriteMode::kTranslate, "en", "zh", {}};
  EXPECT_EQ(backend.Rewrite(r).text, "hello XSLOT0X !");
  ASSERT_EQ(seen_.size(), 1u);
  EXPECT_EQ(seen_[0], r);
}

TEST_F(HttpBackendTest, ErrorsAreBackendErrors) {
  HttpBackend backend(Endpoint(), 2000ms);
  EXPECT_THROW(backend.Rewrite({"boom", RewriteMode::kTranslate, "en", "zh", {}}), BackendError);
  EXPECT_THROW(backend.Rewrite({"garbage", RewriteMode::kTranslate, "en", "zh", {}}),
               BackendError);
  HttpBackend nowhere("http://127.0.0.1:1", 200ms);
  EXPECT_THROW(nowhere.Rewrite({"x", RewriteMode::kTranslate, "en", "zh", {}}), BackendError);
}

TEST_F(HttpBackendTest, ClientRetriesServerErrors) {
  HttpBackend backend(Endpoint(), 2000ms);
  BackendConfig config = FastConfig();
  config.max_retries = 1;
  RewriteClient client(backend, config);
  EXPECT_FALSE(client.Rewrite({"boom", RewriteMode::kTranslate, "en", "zh", {}}).has_value());
  EXPECT_EQ(seen_.size(), 2u);
}

}  // namespace
}  // namespace dialogaug
