// Copyright 2026 The sade-bench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "sade/encoding.hpp"
#include "sade/error.hpp"
#include "sade/provider.hpp"
#include "support/synthetic.hpp"

namespace sade {
namespace {

ScoreRequest Req(std::string text, std::optional<std::string> image = std::nullopt) {
  return {"Describe the image.", std::move(image), std::move(text), "m"};
}

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TEST(MockProvider, ConstantTable) {
  const double p = std::exp(-2.0);
  std::string text;
  for (const char* t : {"a", "b", "c", "d", "e"}) text += std::string(t) + "\t" + Fmt(p) + "\n";
  const MockProvider mock(MockTable::FromText(text));
  const TokenLogProbs out = RequestLogprobs(Req("a b c d e"), mock);
  ASSERT_EQ(out.logprobs.size(), 5u);
  for (double lp : out.logprobs) EXPECT_NEAR(lp, -2.0, 1e-12);
  EXPECT_EQ(out.tokens, (std::vector<std::string>{"a", "b", "c", "d", "e"}));
}

TEST(MockProvider, EmptyContinuationRejected) {
  const MockProvider mock(MockTable::FromText("a\t0.5\n"));
  EXPECT_THROW(RequestLogprobs(Req(""), mock), ProviderRejected);
  EXPECT_THROW(RequestLogprobs(Req("   "), mock), ProviderRejected);
}

TEST(MockLogProb, KnownToken) {
  const MockTable table = MockTable::FromText("dog\t" + Fmt(std::exp(-2.0)) + "\n");
  EXPECT_NEAR(MockLogProb("dog", table), -2.0, 1e-12);
  EXPECT_EQ(MockLogProb("dog", table), MockLogProb("dog", table));
  EXPECT_EQ(MockLogProb("DOG", table), MockLogProb("dog", table));
}

TEST(MockLogProb, SmoothingMassOverSlots) {
  // 0.99 assigned, 0.01 left over ten slots.
  const MockTable table = MockTable::FromText("a\t0.5\nb\t0.49\n");
  EXPECT_NEAR(table.UnknownMass(), 0.01, 1e-15);
  EXPECT_NEAR(MockLogProb("zebra", table), std::log(0.001), 1e-12);
}

TEST(MockLogProb, SlotDirectiveAndFloor) {
  const MockTable slots = MockTable::FromText("#unknown_slots\t4\n# note\na\t0.6\n");
  EXPECT_EQ(slots.unknown_slots, 4u);
  EXPECT_NEAR(MockLogProb("x", slots), std::log(0.1), 1e-12);

  const MockTable full = MockTable::FromText("a\t0.5\nb\t0.5\n");
  EXPECT_TRUE(std::isfinite(MockLogProb("x", full)));
  EXPECT_LT(MockLogProb("x", full), std::log(1e-11));
}

TEST(MockTable, Errors) {
  EXPECT_THROW(MockTable::FromText("a 0.5\n"), ParseError);
  EXPECT_THROW(MockTable::FromText("a\t1.5\n"), ParseError);
  EXPECT_THROW(MockTable::FromText("a\t0\n"), ParseError);
  EXPECT_THROW(MockTable::FromFile("/nonexistent/table.tsv"), FileNotFound);
}

TEST(MockProvider, IgnoresImageAndPrompt) {
  const MockProvider mock(MockTable::FromText("a\t0.3\nb\t0.2\n"));
  const auto x = RequestLogprobs(Req("a b"), mock);
  const auto y = RequestLogprobs({"other prompt", testing::TinyPng(1), "a b", "m"}, mock);
  EXPECT_EQ(x.logprobs, y.logprobs);
}

TEST(ImageDigestMock, MatchedImageScoresHigher) {
  const MockTable table = MockTable::FromText("a\t0.3\nb\t0.2\n");
  const std::string img = testing::TinyPng(7);
  const std::string other = testing::TinyPng(8);
  const ImageDigestMockProvider mock(table, {{Sha256Hex(img), {"a b"}}});
  const MockProvider plain(table);
  const double base = VisualGptScore(RequestLogprobs(Req("a b"), plain));
  EXPECT_DOUBLE_EQ(VisualGptScore(RequestLogprobs(Req("a b", img), mock)), base);

  const double off = VisualGptScore(RequestLogprobs(Req("a b", other), mock));
  EXPECT_LT(off, base);
  EXPECT_GE(off, base - 1.0);
  EXPECT_EQ(off, VisualGptScore(RequestLogprobs(Req("a b", other), mock)));
  // Registered image, unregistered text.
  EXPECT_LT(VisualGptScore(RequestLogprobs(Req("b a", img), mock)), base);
}

TEST(ImageDigestMock, FromBenchmarkRegistersPositives) {
  Benchmark b = testing::MakeRandomItems(3, 2, Branch::kRelation, 1, "r", true);
  const ImageDigestMockProvider mock = ImageDigestMockProvider::FromBenchmark(
      MockTable::FromText(""), b, ".");
  const MockProvider plain(MockTable::FromText(""));
  for (const auto& item : b.items) {
    const auto bytes = ReadImageBytes(item.image, ".");
    const auto& pos = item.positives[0].text;
    const auto& neg = item.negatives[0].text;
    EXPECT_EQ(VisualGptScore(RequestLogprobs(Req(pos, bytes), mock)),
              VisualGptScore(RequestLogprobs(Req(pos), plain)));
    EXPECT_LT(VisualGptScore(RequestLogprobs(Req(neg, bytes), mock)),
              VisualGptScore(RequestLogprobs(Req(neg), plain)));
  }
}

class SlowProvider : public LogProbProvider {
 public:
  TokenLogProbs Score(const ScoreRequest& request) const override {
    const int n = std::stoi(request.continuation);
    std::this_thread::sleep_for(std::chrono::microseconds((n * 7919) % 500));
    const int now = ++in_flight_;
    int prev = peak_.load();
    while (now > prev && !peak_.compare_exchange_weak(prev, now)) {
    }
    --in_flight_;
    if (n % 13 == 5) throw ProviderRejected("refused " + request.continuation);
    return {{request.continuation}, {-static_cast<double>(n)}};
  }
  std::string Describe() const override { return "slow"; }
  int peak() const { return peak_; }

 private:
  mutable std::atomic<int> in_flight_{0};
  mutable std::atomic<int> peak_{0};
};

TEST(ScoreAll, OrderAndBoundedParallelism) {
  std::vector<ScoreRequest> requests;
  for (int i = 0; i < 200; ++i) requests.push_back(Req(std::to_string(i)));
  const SlowProvider slow;
  const auto outcomes = ScoreAll(slow, requests, 4);
  ASSERT_EQ(outcomes.size(), requests.size());
  for (int i = 0; i < 200; ++i) {
    if (i % 13 == 5) {
      EXPECT_FALSE(outcomes[i].value.has_value());
      EXPECT_TRUE(outcomes[i].error);
    } else {
      ASSERT_TRUE(outcomes[i].value.has_value());
      EXPECT_EQ(outcomes[i].value->logprobs[0], -i);
    }
  }
  EXPECT_LE(slow.peak(), 4);
  try {
    ScoreBatch(slow, requests, 8);
    FAIL();
  } catch (const ProviderRejected& e) {
    EXPECT_STREQ(e.what(), "refused 5");
  }
}

class DownAfter : public LogProbProvider {
 public:
  explicit DownAfter(int n) : n_(n) {}
  TokenLogProbs Score(const ScoreRequest& request) const override {
    ++calls_;
    if (std::stoi(request.continuation) >= n_) throw ProviderUnreachable("gone");
    return {{request.continuation}, {-1.0}};
  }
  std::string Describe() const override { return "down"; }
  int calls() const { return calls_; }

 private:
  int n_;
  mutable std::atomic<int> calls_{0};
};

TEST(ScoreAll, UnreachableStopsFurtherCalls) {
  std::vector<ScoreRequest> requests;
  for (int i = 0; i < 100; ++i) requests.push_back(Req(std::to_string(i)));
  const DownAfter down(10);
  const auto outcomes = ScoreAll(down, requests, 1);
  EXPECT_EQ(down.calls(), 11);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(outcomes[i].value.has_value(), i < 10);
    EXPECT_EQ(static_cast<bool>(outcomes[i].error), i >= 10);
  }
  EXPECT_THROW(ScoreBatch(down, requests, 4), ProviderUnreachable);
}

TEST(ScoreAll, SerialMatchesParallel) {
  const MockProvider mock(MockTable::FromText("a\t0.3\nb\t0.2\n"));
  std::vector<ScoreRequest> requests;
  testing::Gen gen(3);
  for (int i = 0; i < 300; ++i) requests.push_back(Req(testing::RandomCaption(gen)));
  const auto serial = ScoreBatch(mock, requests, 1);
  const auto parallel = ScoreBatch(mock, requests, 16);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_EQ(serial[i].logprobs, parallel[i].logprobs);
}

class BadProvider : public LogProbProvider {
 public:
  TokenLogProbs Score(const ScoreRequest&) const override { return {{"a", "b"}, {-1.0}}; }
  std::string Describe() const override { return "bad"; }
};

TEST(RequestLogprobs, MismatchedLengthsAreMalformed) {
  EXPECT_THROW(RequestLogprobs(Req("a b"), BadProvider{}), MalformedResponse);
}

TEST(MakeProvider, Schemes) {
  const auto dir = testing::MakeTempDir("mk");
  WriteFile(dir / "t.tsv", "a\t0.5\n");
  auto mock = MakeProvider("mock://" + (dir / "t.tsv").string());
  EXPECT_NEAR(RequestLogprobs(Req("a"), *mock).logprobs[0], std::log(0.5), 1e-12);
  EXPECT_THROW(MakeProvider("mock://" + (dir / "missing.tsv").string()), FileNotFound);
  EXPECT_THROW(MakeProvider("ftp://host"), ConfigError);
  EXPECT_NO_THROW(MakeProvider("http://127.0.0.1:9/base/"));
}

}  // namespace
}  // namespace sade
