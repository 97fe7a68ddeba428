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

#ifndef SADE_DEBIAS_HPP_
#define SADE_DEBIAS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sade/corpus.hpp"
#include "sade/pos_tag.hpp"
#include "sade/provider.hpp"
#include "sade/random.hpp"
#include "sade/scorer.hpp"
#include "sade/stats.hpp"

namespace sade {

// How per-(positive, negative) bias values collapse to one item score.
enum class PairAggregation { kMean, kMax };

PairAggregation ParsePairAggregation(std::string_view name);
std::string_view PairAggregationName(PairAggregation aggregation);

struct BiasOptions {
  std::size_t bins = 20;
  std::size_t parallel = 1;
  WeightScheme weights = WeightScheme::kUniform;
  PairAggregation aggregation = PairAggregation::kMean;
  std::string model;
};

struct BiasRecord {
  std::string item_id;
  double raw = 0.0;
  double normalized = 0.0;
  std::vector<double> pair_raws;  // one per (positive, negative) pair

  bool operator==(const BiasRecord&) const = default;
};

struct BiasReport {
  std::string branch;
  std::vector<BiasRecord> records;
  NormalizationSpec normalization;
  Histogram histogram;
  double mean = 0.0;   // of normalized scores
  double stdev = 0.0;
  std::optional<TTestResult> test;  // absent with fewer than two records
  std::optional<double> threshold;
  std::vector<std::string> retained_ids;
  std::optional<TTestResult> retained_test;
};

// Raw text-only bias of every item; `normalized` is left at 0.
std::vector<BiasRecord> ScoreBiasRecords(std::span<const BenchmarkItem> items,
                                         const LogProbProvider& provider,
                                         const BiasOptions& options);

// Normalizes (max-abs over `records`, or by `scale` when given) and fills
// the histogram, moments and test. Throws EmptyInput.
BiasReport SummarizeBias(std::string branch, std::vector<BiasRecord> records,
                         std::size_t bins, std::optional<double> scale = std::nullopt);

// ScoreBiasRecords followed by SummarizeBias over the given items.
BiasReport ComputeBiasDistribution(std::string branch,
                                   std::span<const BenchmarkItem> items,
                                   const LogProbProvider& provider,
                                   const BiasOptions& options);

struct FilterResult {
  std::vector<std::string> retained_ids;  // record order
  double retained_fraction = 0.0;
  bool empty = false;
};

// Keeps exactly the records with |normalized| <= tau. Throws ConfigError
// unless 0 < tau <= 1.
FilterResult FilterByThreshold(const BiasReport& report, double tau);

TTestResult SignificanceTest(std::span<const double> scores);

enum class SignificanceGate {
  kNone,                // report only
  kRequireUnbiased,     // refuse when the retained mean differs from 0 (p < alpha)
  kRequireSignificant,  // refuse unless p < alpha
};

SignificanceGate ParseSignificanceGate(std::string_view name);
std::string_view SignificanceGateName(SignificanceGate gate);

struct GateOptions {
  SignificanceGate gate = SignificanceGate::kNone;
  double alpha = 1e-5;
};

// Filters, records threshold/retained ids/retained-set test in the report,
// and enforces the gate (BiasGateFailed). Returns the filter result.
FilterResult ApplyFilter(BiasReport& report, double tau, const GateOptions& gate = {});

nlohmann::ordered_json BiasReportToJson(const BiasReport& report);
BiasReport BiasReportFromJson(const nlohmann::json& doc);

// A document holding one report, or an array of reports.
std::vector<BiasReport> LoadBiasReports(const std::filesystem::path& path);

enum class NormalizationScope { kBranch, kDataset };

struct SourceSpec {
  Branch branch = Branch::kRelation;
  std::string label;
  std::filesystem::path path;
  PositivePolicy positive_policy = PositivePolicy::kStrict;
};

struct SadeConfig {
  std::string name = "SADE";
  std::string version = "1.0";
  Seed seed = 0;
  std::vector<SourceSpec> sources;
  std::filesystem::path pool;
  std::map<Branch, double> tau;  // missing branches use kDefaultTau
  std::size_t negatives_per_item = 2;
  std::size_t bins = 20;
  NormalizationScope normalization = NormalizationScope::kBranch;
  PairAggregation aggregation = PairAggregation::kMean;
  GateOptions gate;
  std::string provider_endpoint;
  std::string model;
  std::size_t parallel = 1;

  static constexpr double kDefaultTau = 0.05;
  double TauFor(Branch branch) const;
  // Throws ConfigError on out-of-range values.
  void Check() const;
};

// Parses the TOML assembly config; relative paths resolve against the
// config file's directory.
SadeConfig LoadSadeConfig(const std::filesystem::path& path);
SadeConfig ParseSadeConfig(std::string_view toml_text,
                           const std::filesystem::path& base_dir);

struct SourceBenchmark {
  Branch branch;
  std::string label;
  Benchmark data;
};

struct SadeResult {
  Benchmark benchmark;
  std::vector<BiasReport> reports;  // one per filtered branch, column order
};

// Comprehensive sources pass through; Relation/Attribute/Atomic/Negate are
// bias-filtered at the branch tau; Content keeps content-only positives
// with `negatives_per_item` pool sentences each.
SadeResult AssembleSade(const SadeConfig& config,
                        std::span<const SourceBenchmark> sources,
                        const LogProbProvider& provider,
                        std::span<const Reference> pool,
                        const PosTagger& tagger = PosTagger::Default());

// Positive references of a benchmark, used as a sampling pool.
std::vector<Reference> PoolFromBenchmark(const Benchmark& benchmark);

}  // namespace sade

#endif  // SADE_DEBIAS_HPP_
