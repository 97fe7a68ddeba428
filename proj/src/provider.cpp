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

#include "sade/provider.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sade/encoding.hpp"
#include "sade/error.hpp"
#include "sade/random.hpp"

namespace sade {
namespace {

constexpr double kMinUnknownMass = 1e-12;

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool IsTransientStatus(int status) {
  return status == 500 || status == 502 || status == 503 || status == 504 ||
         status == 429;
}

std::string RejectionReason(const httplib::Result& res) {
  try {
    auto body = nlohmann::json::parse(res->body);
    if (body.is_object() && body.contains("error") && body["error"].is_string()) {
      return body["error"].get<std::string>();
    }
  } catch (const nlohmann::json::exception&) {
  }
  return "HTTP " + std::to_string(res->status) + ": " + res->body;
}

}  // namespace

TokenLogProbs RequestLogprobs(const ScoreRequest& request,
                              const LogProbProvider& provider) {
  if (Trim(request.continuation).empty()) {
    throw ProviderRejected("empty continuation");
  }
  TokenLogProbs tlp = provider.Score(request);
  tlp.Validate();
  return tlp;
}

MockTable MockTable::FromText(std::string_view text) {
  MockTable table;
  double total = 0.0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (line.front() == '#') {
      if (tab != std::string_view::npos && line.substr(0, tab) == "#unknown_slots") {
        long slots = std::strtol(std::string(line.substr(tab + 1)).c_str(), nullptr, 10);
        if (slots < 1) throw ParseError(line_no, "unknown_slots must be >= 1");
        table.unknown_slots = static_cast<std::size_t>(slots);
      }
      continue;
    }
    if (tab == std::string_view::npos) {
      throw ParseError(line_no, "mock table line lacks a TAB separator");
    }
    std::string value(Trim(line.substr(tab + 1)));
    char* parse_end = nullptr;
    double p = std::strtod(value.c_str(), &parse_end);
    if (parse_end == value.c_str() || *parse_end != '\0' || !(p > 0.0) || p > 1.0) {
      throw ParseError(line_no, "probability must be in (0, 1]");
    }
    std::string token = Lowercase(line.substr(0, tab));
    if (table.probs.contains(token)) {
      throw ParseError(line_no, "duplicate token '" + token + "'");
    }
    table.probs.emplace(std::move(token), p);
    total += p;
  }
  if (total > 1.0 + 1e-9) {
    throw ConfigError("mock table probabilities sum to " + std::to_string(total));
  }
  return table;
}

MockTable MockTable::FromFile(const std::filesystem::path& path) {
  return FromText(ReadFile(path));
}

double MockTable::UnknownMass() const {
  double total = 0.0;
  for (const auto& [token, p] : probs) total += p;
  return std::max(1.0 - total, kMinUnknownMass);
}

double MockLogProb(std::string_view token, const MockTable& table) {
  auto it = table.probs.find(Lowercase(token));
  if (it != table.probs.end()) return std::log(it->second);
  return std::log(table.UnknownMass() / static_cast<double>(table.unknown_slots));
}

TokenLogProbs MockProvider::Score(const ScoreRequest& request) const {
  if (Trim(request.continuation).empty()) {
    throw ProviderRejected("empty continuation");
  }
  TokenLogProbs out;
  out.tokens = Tokenize(request.continuation);
  out.logprobs.reserve(out.tokens.size());
  for (const std::string& token : out.tokens) {
    out.logprobs.push_back(MockLogProb(token, table_));
  }
  return out;
}

ImageDigestMockProvider ImageDigestMockProvider::FromBenchmark(
    MockTable table, const Benchmark& benchmark,
    const std::filesystem::path& base_dir) {
  std::map<std::string, std::set<std::string>> matches;
  for (const BenchmarkItem& item : benchmark.items) {
    auto bytes = ReadImageBytes(item.image, base_dir);
    if (!bytes) continue;
    auto& texts = matches[Sha256Hex(*bytes)];
    for (const Reference& p : item.positives) texts.insert(p.text);
  }
  for (const PairedItem& pair : benchmark.pairs) {
    if (auto b0 = ReadImageBytes(pair.image_0, base_dir)) {
      matches[Sha256Hex(*b0)].insert(pair.caption_0.text);
    }
    if (auto b1 = ReadImageBytes(pair.image_1, base_dir)) {
      matches[Sha256Hex(*b1)].insert(pair.caption_1.text);
    }
  }
  return ImageDigestMockProvider(std::move(table), std::move(matches));
}

TokenLogProbs ImageDigestMockProvider::Score(const ScoreRequest& request) const {
  TokenLogProbs out = base_.Score(request);
  const std::string digest = request.image ? Sha256Hex(*request.image) : "";
  double penalty = 0.0;
  auto it = matches_.find(digest);
  const bool matched = request.image && it != matches_.end() &&
                       it->second.contains(request.continuation);
  if (!matched) {
    std::uint64_t h = MixBits(StableHash(digest + '\x1f' + request.continuation));
    penalty = 1.0 - static_cast<double>(h >> 11) * 0x1.0p-53;
  }
  for (double& lp : out.logprobs) lp -= penalty;
  return out;
}

HttpProvider::HttpProvider(std::string endpoint, HttpOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  std::size_t scheme_end = endpoint_.find("://");
  if (scheme_end == std::string::npos || endpoint_.substr(0, scheme_end) != "http") {
    throw ConfigError("provider endpoint must be http://host:port, got '" +
                      endpoint_ + "'");
  }
  std::size_t path_start = endpoint_.find('/', scheme_end + 3);
  host_ = endpoint_.substr(0, path_start);
  std::string base = path_start == std::string::npos ? "" : endpoint_.substr(path_start);
  while (!base.empty() && base.back() == '/') base.pop_back();
  path_ = base + "/v1/logprobs";
}

TokenLogProbs HttpProvider::Score(const ScoreRequest& request) const {
  nlohmann::json body = {
      {"model", request.model},
      {"prompt", request.prompt},
      {"image_b64_png",
       request.image ? nlohmann::json(Base64Encode(*request.image)) : nlohmann::json()},
      {"continuation", request.continuation},
  };
  const std::string payload = body.dump();

  std::string last_failure;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.backoff * attempt);
    httplib::Client client(host_);
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
        options_.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());

    auto res = client.Post(path_, payload, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (IsTransientStatus(res->status)) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw ProviderRejected(RejectionReason(res));

    TokenLogProbs out;
    try {
      auto doc = nlohmann::json::parse(res->body);
      out.tokens = doc.at("tokens").get<std::vector<std::string>>();
      out.logprobs = doc.at("logprobs").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw MalformedResponse(std::string("bad response body: ") + e.what());
    }
    out.Validate();
    return out;
  }
  throw ProviderUnreachable(endpoint_ + " after " +
                            std::to_string(options_.retries + 1) +
                            " attempt(s): " + last_failure);
}

std::unique_ptr<LogProbProvider> MakeProvider(const std::string& endpoint,
                                              HttpOptions options) {
  constexpr std::string_view kMock = "mock://";
  if (endpoint.starts_with(kMock)) {
    std::string path = endpoint.substr(kMock.size());
    return std::make_unique<MockProvider>(MockTable::FromFile(path), endpoint);
  }
  return std::make_unique<HttpProvider>(endpoint, options);
}

std::vector<ScoreOutcome> ScoreAll(const LogProbProvider& provider,
                                   std::span<const ScoreRequest> requests,
                                   std::size_t parallel) {
  std::vector<ScoreOutcome> outcomes(requests.size());
  std::atomic<std::size_t> next{0};
  // Once the provider is unreachable the rest fail with that same error
  // without another round of retries each.
  std::mutex down_mu;
  std::exception_ptr down;
  std::atomic<bool> is_down{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      if (is_down) {
        std::lock_guard lock(down_mu);
        outcomes[i].error = down;
        continue;
      }
      try {
        outcomes[i].value = RequestLogprobs(requests[i], provider);
      } catch (const ProviderUnreachable&) {
        outcomes[i].error = std::current_exception();
        std::lock_guard lock(down_mu);
        if (!down) down = outcomes[i].error;
        is_down = true;
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(parallel, 1), requests.size());
  if (threads <= 1) {
    worker();
    return outcomes;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return outcomes;
}

std::vector<TokenLogProbs> ScoreBatch(const LogProbProvider& provider,
                                      std::span<const ScoreRequest> requests,
                                      std::size_t parallel) {
  std::vector<ScoreOutcome> outcomes = ScoreAll(provider, requests, parallel);
  std::vector<TokenLogProbs> out;
  out.reserve(outcomes.size());
  for (ScoreOutcome& o : outcomes) {
    if (o.error) std::rethrow_exception(o.error);
    out.push_back(std::move(*o.value));
  }
  return out;
}

}  // namespace sade
