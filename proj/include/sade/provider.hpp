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

#ifndef SADE_PROVIDER_HPP_
#define SADE_PROVIDER_HPP_

#include <chrono>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sade/corpus.hpp"
#include "sade/scorer.hpp"

namespace sade {

struct ScoreRequest {
  std::string prompt;
  std::optional<std::string> image;  // raw PNG bytes; absent for text-only
  std::string continuation;
  std::string model;
};

// Source of per-token log-probabilities. Implementations must be safe to
// call concurrently through a const reference.
class LogProbProvider {
 public:
  virtual ~LogProbProvider() = default;

  // Raw provider call; callers normally go through RequestLogprobs.
  virtual TokenLogProbs Score(const ScoreRequest& request) const = 0;
  virtual std::string Describe() const = 0;
};

// Validates the request and the response around provider.Score().
// Empty continuations are rejected with ProviderRejected.
TokenLogProbs RequestLogprobs(const ScoreRequest& request,
                              const LogProbProvider& provider);

// Unigram probability table for the mock providers. Tokens are stored
// lowercased. Mass not assigned by the table is spread evenly over
// `unknown_slots` pseudo-tokens.
struct MockTable {
  std::map<std::string, double> probs;
  std::size_t unknown_slots = 10;

  // One `token<TAB>probability` per line; `#unknown_slots<TAB>N` overrides
  // the slot count, other '#' lines are comments.
  static MockTable FromText(std::string_view text);
  static MockTable FromFile(const std::filesystem::path& path);

  double UnknownMass() const;
};

// ln(table[token]), or ln(unknown_mass / unknown_slots) for unseen tokens.
double MockLogProb(std::string_view token, const MockTable& table);

// Context-free unigram provider: ignores prompt and image.
class MockProvider : public LogProbProvider {
 public:
  explicit MockProvider(MockTable table, std::string label = "mock")
      : table_(std::move(table)), label_(std::move(label)) {}

  TokenLogProbs Score(const ScoreRequest& request) const override;
  std::string Describe() const override { return label_; }
  const MockTable& table() const { return table_; }

 private:
  MockTable table_;
  std::string label_;
};

// Image-sensitive mock. Every token is charged a penalty in (0, 1] that is
// a pseudo-random function of (image digest, continuation), unless the
// request image matches a registered digest and the continuation is one
// registered for it, in which case the penalty is 0.
class ImageDigestMockProvider : public LogProbProvider {
 public:
  ImageDigestMockProvider(MockTable table,
                          std::map<std::string, std::set<std::string>> matches)
      : base_(std::move(table)), matches_(std::move(matches)) {}

  // Registers every item's positive texts under its image digest.
  static ImageDigestMockProvider FromBenchmark(MockTable table,
                                               const Benchmark& benchmark,
                                               const std::filesystem::path& base_dir);

  TokenLogProbs Score(const ScoreRequest& request) const override;
  std::string Describe() const override { return "mock-digest"; }

 private:
  MockProvider base_;
  std::map<std::string, std::set<std::string>> matches_;
};

struct HttpOptions {
  int retries = 3;  // additional attempts after a transient failure
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds backoff{100};
};

// Client for the `POST /v1/logprobs` wire protocol.
class HttpProvider : public LogProbProvider {
 public:
  explicit HttpProvider(std::string endpoint, HttpOptions options = {});

  TokenLogProbs Score(const ScoreRequest& request) const override;
  std::string Describe() const override { return endpoint_; }

 private:
  std::string endpoint_;
  std::string host_;  // scheme://host:port
  std::string path_;  // base path + /v1/logprobs
  HttpOptions options_;
};

// `mock://<table-file>` or `http://host:port[/base]`.
std::unique_ptr<LogProbProvider> MakeProvider(const std::string& endpoint,
                                              HttpOptions options = {});

struct ScoreOutcome {
  std::optional<TokenLogProbs> value;
  std::exception_ptr error;
};

// Scores every request with at most `parallel` calls in flight. Outcomes
// are returned in request order regardless of completion order. After a
// ProviderUnreachable, requests not yet started get that error unsent.
std::vector<ScoreOutcome> ScoreAll(const LogProbProvider& provider,
                                   std::span<const ScoreRequest> requests,
                                   std::size_t parallel);

// As ScoreAll, but rethrows the error of the lowest failing index.
std::vector<TokenLogProbs> ScoreBatch(const LogProbProvider& provider,
                                      std::span<const ScoreRequest> requests,
                                      std::size_t parallel);

}  // namespace sade

#endif  // SADE_PROVIDER_HPP_
