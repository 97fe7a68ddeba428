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

// Seeded synthetic corpora and providers for tests.
#ifndef SADE_TESTS_SYNTHETIC_HPP_
#define SADE_TESTS_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "sade/corpus.hpp"
#include "sade/debias.hpp"
#include "sade/provider.hpp"

namespace sade::testing {

// Test-side randomness, kept apart from the library's own generator.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  std::size_t Index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  std::size_t Between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  double Unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  bool Coin(double p) { return Unit() < p; }
  std::uint64_t Bits() { return engine_(); }

  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[Index(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

std::filesystem::path MakeTempDir(const std::string& tag);

std::string TableText(const std::map<std::string, double>& probs);

// Small English vocabulary with the tags the bundled lexicon gives it.
extern const std::vector<std::string> kNouns;
extern const std::vector<std::string> kAdjectives;
extern const std::vector<std::string> kVerbs;
extern const std::vector<std::string> kFunctionWords;

std::string TinyPng(std::uint64_t seed);

BenchmarkItem MakeItem(const std::string& id, Branch branch, const std::string& source,
                       const std::string& positive, const std::vector<std::string>& negatives,
                       Image image = Image::None());

// Positives lean on tokens with 4x the mock probability of those dominating
// the negatives. Lengths vary so some items land near zero bias.
struct PlantedBias {
  Benchmark benchmark;
  std::map<std::string, double> table;
};
PlantedBias MakePlantedBiasCorpus(std::size_t n, std::uint64_t seed, Branch branch,
                                  const std::string& prefix);

// Items with `candidates` distinct random sentences (first one positive).
Benchmark MakeRandomItems(std::size_t n, std::size_t candidates, Branch branch,
                          std::uint64_t seed, const std::string& prefix, bool images);

// Pairs whose captions swap two nouns, each image a distinct inline PNG.
std::vector<PairedItem> MakeSwapPairs(std::size_t n, std::uint64_t seed,
                                      const std::string& prefix);

// Caption-like sentences over the English vocabulary.
std::string RandomCaption(Gen& gen);
std::vector<Reference> MakePool(std::size_t n, std::uint64_t seed);

// Log-prob of a continuation is a hash of (salt, image, text) spread over
// [-10, 0); one token per request.
class HashProvider : public LogProbProvider {
 public:
  explicit HashProvider(std::uint64_t salt) : salt_(salt) {}
  TokenLogProbs Score(const ScoreRequest& request) const override;
  std::string Describe() const override { return "hash"; }

 private:
  std::uint64_t salt_;
};

// Every file the assemble pipeline needs, written under `dir`.
struct SadeFixture {
  std::filesystem::path dir;
  std::filesystem::path config;
  std::filesystem::path pool;
  std::filesystem::path table;
  std::map<Branch, std::filesystem::path> sources;
};
struct SadeFixtureSizes {
  std::size_t pairs = 400;
  std::size_t filtered_items = 600;  // per Relation/Attribute/Atomic/Negate source
  std::size_t content_items = 2500;
  std::size_t empty_content_items = 0;  // extra Content items with no nouns/adjectives
  std::size_t pool = 3000;
};
SadeFixture WriteSadeFixture(const std::filesystem::path& dir, const SadeFixtureSizes& sizes,
                             std::uint64_t seed);

}  // namespace sade::testing

#endif  // SADE_TESTS_SYNTHETIC_HPP_
