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

#include "sade/debias.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "sade/encoding.hpp"
#include "sade/error.hpp"
#include "sade/perturb.hpp"

namespace sade {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json TestToJson(const std::optional<TTestResult>& test) {
  if (!test) return nullptr;
  ordered_json out;
  // JSON has no infinities; the degenerate statistic is written as null.
  out["statistic"] = std::isfinite(test->statistic) ? ordered_json(test->statistic)
                                                     : ordered_json(nullptr);
  out["p_value"] = test->p_value;
  out["kind"] = test->kind;
  return out;
}

std::optional<TTestResult> TestFromJson(const json& value) {
  if (value.is_null()) return std::nullopt;
  TTestResult test;
  const json& stat = value.at("statistic");
  test.p_value = value.at("p_value").get<double>();
  if (stat.is_null()) {
    test.statistic = test.p_value == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    test.statistic = stat.get<double>();
  }
  test.kind = value.value("kind", "one-sample-t");
  return test;
}

std::vector<double> Normalized(const BiasReport& report) {
  std::vector<double> out;
  out.reserve(report.records.size());
  for (const BiasRecord& r : report.records) out.push_back(r.normalized);
  return out;
}

}  // namespace

PairAggregation ParsePairAggregation(std::string_view name) {
  if (name == "mean") return PairAggregation::kMean;
  if (name == "max") return PairAggregation::kMax;
  throw ConfigError("unknown pair aggregation '" + std::string(name) + "'");
}

std::string_view PairAggregationName(PairAggregation aggregation) {
  return aggregation == PairAggregation::kMean ? "mean" : "max";
}

std::vector<BiasRecord> ScoreBiasRecords(std::span<const BenchmarkItem> items,
                                         const LogProbProvider& provider,
                                         const BiasOptions& options) {
  std::vector<ScoreRequest> requests;
  for (const BenchmarkItem& item : items) {
    for (const auto* list : {&item.positives, &item.negatives}) {
      for (const Reference& ref : *list) {
        requests.push_back({"", std::nullopt, ref.text, options.model});
      }
    }
  }
  std::vector<TokenLogProbs> scored = ScoreBatch(provider, requests, options.parallel);

  std::vector<BiasRecord> records;
  records.reserve(items.size());
  std::size_t next = 0;
  for (const BenchmarkItem& item : items) {
    const std::size_t pos_begin = next;
    const std::size_t neg_begin = pos_begin + item.positives.size();
    next = neg_begin + item.negatives.size();
    BiasRecord record;
    record.item_id = item.item_id;
    for (std::size_t p = pos_begin; p < neg_begin; ++p) {
      for (std::size_t n = neg_begin; n < next; ++n) {
        record.pair_raws.push_back(SyntaxBiasRaw(scored[p], scored[n], options.weights));
      }
    }
    if (record.pair_raws.empty()) {
      throw InvalidBenchmark("item '" + item.item_id + "' has no (positive, negative) pair");
    }
    if (options.aggregation == PairAggregation::kMean) {
      record.raw = Mean(record.pair_raws);
    } else {
      record.raw = *std::max_element(record.pair_raws.begin(), record.pair_raws.end());
    }
    records.push_back(std::move(record));
  }
  return records;
}

BiasReport SummarizeBias(std::string branch, std::vector<BiasRecord> records,
                         std::size_t bins, std::optional<double> scale) {
  if (records.empty()) throw EmptyInput("no items to compute bias for in '" + branch + "'");
  BiasReport report;
  report.branch = std::move(branch);
  std::vector<double> raws;
  raws.reserve(records.size());
  for (const BiasRecord& r : records) raws.push_back(r.raw);
  if (scale) {
    report.normalization.scale = *scale > 0.0 ? *scale : 1.0;
  } else {
    report.normalization = NormalizeScores(raws).spec;
  }
  for (BiasRecord& r : records) r.normalized = report.normalization.Apply(r.raw);
  report.records = std::move(records);

  const std::vector<double> normalized = Normalized(report);
  report.histogram = MakeHistogram(normalized, bins);
  report.mean = Mean(normalized);
  report.stdev = SampleStdev(normalized);
  if (normalized.size() >= 2) report.test = SignificanceTest(normalized);
  return report;
}

BiasReport ComputeBiasDistribution(std::string branch,
                                   std::span<const BenchmarkItem> items,
                                   const LogProbProvider& provider,
                                   const BiasOptions& options) {
  if (items.empty()) throw EmptyInput("no items to compute bias for in '" + branch + "'");
  return SummarizeBias(std::move(branch), ScoreBiasRecords(items, provider, options),
                       options.bins);
}

FilterResult FilterByThreshold(const BiasReport& report, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw ConfigError("threshold must be in (0, 1], got " + std::to_string(tau));
  }
  FilterResult result;
  for (const BiasRecord& r : report.records) {
    if (std::abs(r.normalized) <= tau) result.retained_ids.push_back(r.item_id);
  }
  result.empty = result.retained_ids.empty();
  result.retained_fraction =
      report.records.empty()
          ? 0.0
          : static_cast<double>(result.retained_ids.size()) /
                static_cast<double>(report.records.size());
  return result;
}

TTestResult SignificanceTest(std::span<const double> scores) {
  return OneSampleTTest(scores);
}

SignificanceGate ParseSignificanceGate(std::string_view name) {
  if (name == "none") return SignificanceGate::kNone;
  if (name == "require-unbiased") return SignificanceGate::kRequireUnbiased;
  if (name == "require-significant") return SignificanceGate::kRequireSignificant;
  throw ConfigError("unknown significance gate '" + std::string(name) + "'");
}

std::string_view SignificanceGateName(SignificanceGate gate) {
  switch (gate) {
    case SignificanceGate::kNone: return "none";
    case SignificanceGate::kRequireUnbiased: return "require-unbiased";
    case SignificanceGate::kRequireSignificant: return "require-significant";
  }
  return "none";
}

FilterResult ApplyFilter(BiasReport& report, double tau, const GateOptions& gate) {
  FilterResult result = FilterByThreshold(report, tau);
  report.threshold = tau;
  report.retained_ids = result.retained_ids;
  report.retained_test.reset();

  std::unordered_set<std::string> kept(result.retained_ids.begin(),
                                       result.retained_ids.end());
  std::vector<double> retained;
  for (const BiasRecord& r : report.records) {
    if (kept.contains(r.item_id)) retained.push_back(r.normalized);
  }
  if (retained.size() >= 2) report.retained_test = SignificanceTest(retained);

  if (gate.gate != SignificanceGate::kNone) {
    if (!report.retained_test) {
      throw BiasGateFailed("branch '" + report.branch +
                           "' retains fewer than two items; cannot test");
    }
    const bool significant = report.retained_test->p_value < gate.alpha;
    if (gate.gate == SignificanceGate::kRequireUnbiased && significant) {
      throw BiasGateFailed("branch '" + report.branch +
                           "' retained mean differs from 0 (p=" +
                           std::to_string(report.retained_test->p_value) + ")");
    }
    if (gate.gate == SignificanceGate::kRequireSignificant && !significant) {
      throw BiasGateFailed("branch '" + report.branch + "' retained-set p=" +
                           std::to_string(report.retained_test->p_value) +
                           " is not below alpha");
    }
  }
  return result;
}

ordered_json BiasReportToJson(const BiasReport& report) {
  ordered_json out;
  out["branch"] = report.branch;
  out["mean"] = report.mean;
  out["stdev"] = report.stdev;
  out["test"] = TestToJson(report.test);
  out["threshold"] = report.threshold ? ordered_json(*report.threshold)
                                      : ordered_json(nullptr);
  out["histogram"] = {{"edges", report.histogram.edges},
                      {"counts", report.histogram.counts}};
  ordered_json records = ordered_json::array();
  for (const BiasRecord& r : report.records) {
    records.push_back({{"item_id", r.item_id},
                       {"raw", r.raw},
                       {"normalized", r.normalized},
                       {"pair_raws", r.pair_raws}});
  }
  out["records"] = std::move(records);
  out["retained_ids"] = report.retained_ids;
  out["retained_test"] = TestToJson(report.retained_test);
  out["normalization"] = {{"kind", "maxabs"}, {"scale", report.normalization.scale}};
  return out;
}

BiasReport BiasReportFromJson(const json& doc) {
  try {
    BiasReport report;
    report.branch = doc.at("branch").get<std::string>();
    report.mean = doc.at("mean").get<double>();
    report.stdev = doc.at("stdev").get<double>();
    report.test = TestFromJson(doc.at("test"));
    if (!doc.at("threshold").is_null()) report.threshold = doc["threshold"].get<double>();
    report.histogram.edges = doc.at("histogram").at("edges").get<std::vector<double>>();
    report.histogram.counts =
        doc.at("histogram").at("counts").get<std::vector<std::size_t>>();
    for (const json& r : doc.at("records")) {
      report.records.push_back({r.at("item_id").get<std::string>(),
                                r.at("raw").get<double>(),
                                r.at("normalized").get<double>(),
                                r.value("pair_raws", std::vector<double>{})});
    }
    report.retained_ids = doc.at("retained_ids").get<std::vector<std::string>>();
    if (doc.contains("retained_test")) report.retained_test = TestFromJson(doc["retained_test"]);
    if (doc.contains("normalization")) {
      report.normalization.scale = doc["normalization"].at("scale").get<double>();
    }
    return report;
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("bias report: ") + e.what());
  }
}

std::vector<BiasReport> LoadBiasReports(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  std::vector<BiasReport> out;
  if (doc.is_array()) {
    for (const json& d : doc) out.push_back(BiasReportFromJson(d));
  } else {
    out.push_back(BiasReportFromJson(doc));
  }
  return out;
}

double SadeConfig::TauFor(Branch branch) const {
  auto it = tau.find(branch);
  return it == tau.end() ? kDefaultTau : it->second;
}

void SadeConfig::Check() const {
  for (const auto& [branch, t] : tau) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw ConfigError("tau for " + std::string(BranchName(branch)) +
                        " must be in (0, 1]");
    }
  }
  if (negatives_per_item < 1) throw ConfigError("negatives_per_item must be >= 1");
  if (bins < 1) throw ConfigError("bins must be >= 1");
  if (!(gate.alpha > 0.0 && gate.alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
}

std::vector<Reference> PoolFromBenchmark(const Benchmark& benchmark) {
  std::vector<Reference> pool;
  for (const BenchmarkItem& item : benchmark.items) {
    for (const Reference& ref : item.positives) {
      Reference r = ref;
      r.id = item.item_id + "/" + ref.id;
      pool.push_back(std::move(r));
    }
  }
  return pool;
}

SadeResult AssembleSade(const SadeConfig& config,
                        std::span<const SourceBenchmark> sources,
                        const LogProbProvider& provider,
                        std::span<const Reference> pool,
                        const PosTagger& tagger) {
  config.Check();
  SadeResult result;
  Benchmark& out = result.benchmark;
  std::unordered_set<std::string> ids;
  auto claim = [&ids](const std::string& id) {
    if (!ids.insert(id).second) throw DuplicateId(id);
  };

  ordered_json branches = ordered_json::object();

  // Comprehensive: passed through unfiltered.
  for (const SourceBenchmark& src : sources) {
    if (src.branch != Branch::kComprehensive) continue;
    ordered_json& entry = branches["Comprehensive"]["sources"];
    for (PairedItem pair : src.data.pairs) {
      claim(pair.pair_id);
      if (pair.source.empty()) pair.source = src.label;
      out.pairs.push_back(std::move(pair));
    }
    for (BenchmarkItem item : src.data.items) {
      claim(item.item_id);
      item.branch = {Branch::kComprehensive, src.label};
      out.items.push_back(std::move(item));
    }
    entry.push_back({{"label", src.label},
                     {"pairs", src.data.pairs.size()},
                     {"items", src.data.items.size()}});
  }

  // Relation, Attribute, Atomic, Negate: bias-filtered.
  BiasOptions bias_options;
  bias_options.bins = config.bins;
  bias_options.parallel = config.parallel;
  bias_options.aggregation = config.aggregation;
  bias_options.model = config.model;

  struct Scored {
    Branch branch;
    std::vector<const SourceBenchmark*> srcs;
    std::vector<BiasRecord> records;
  };
  std::vector<Scored> scored;
  double dataset_scale = 0.0;
  for (Branch branch : kAllBranches) {
    if (branch == Branch::kComprehensive || branch == Branch::kContent) continue;
    Scored s{branch, {}, {}};
    for (const SourceBenchmark& src : sources) {
      if (src.branch != branch) continue;
      s.srcs.push_back(&src);
      auto recs = ScoreBiasRecords(src.data.items, provider, bias_options);
      s.records.insert(s.records.end(), recs.begin(), recs.end());
    }
    if (s.srcs.empty()) continue;
    for (const BiasRecord& r : s.records) dataset_scale = std::max(dataset_scale, std::abs(r.raw));
    scored.push_back(std::move(s));
  }
  for (Scored& s : scored) {
    const std::string name(BranchName(s.branch));
    if (s.records.empty()) continue;
    std::optional<double> scale;
    if (config.normalization == NormalizationScope::kDataset) scale = dataset_scale;
    BiasReport report = SummarizeBias(name, std::move(s.records), config.bins, scale);
    const double tau = config.TauFor(s.branch);
    FilterResult kept = ApplyFilter(report, tau, config.gate);
    std::unordered_set<std::string> keep(kept.retained_ids.begin(), kept.retained_ids.end());

    ordered_json entry;
    entry["tau"] = tau;
    entry["scale"] = report.normalization.scale;
    entry["retained_fraction"] = kept.retained_fraction;
    entry["retained_p_value"] = report.retained_test
                                    ? ordered_json(report.retained_test->p_value)
                                    : ordered_json(nullptr);
    for (const SourceBenchmark* src : s.srcs) {
      std::size_t retained = 0;
      for (const BenchmarkItem& item : src->data.items) {
        if (!keep.contains(item.item_id)) continue;
        BenchmarkItem copy = item;
        claim(copy.item_id);
        copy.branch = {s.branch, src->label};
        out.items.push_back(std::move(copy));
        ++retained;
      }
      entry["sources"].push_back({{"label", src->label},
                                  {"input_items", src->data.items.size()},
                                  {"retained", retained},
                                  {"filtered_out", src->data.items.size() - retained}});
    }
    branches[name] = std::move(entry);
    result.reports.push_back(std::move(report));
  }

  // Content: content-only positives against random pool sentences.
  for (const SourceBenchmark& src : sources) {
    if (src.branch != Branch::kContent) continue;
    std::size_t dropped = 0;
    std::size_t kept = 0;
    for (const BenchmarkItem& item : src.data.items) {
      if (item.positives.size() != 1) {
        throw InvalidBenchmark("content item '" + item.item_id +
                               "' must have exactly one positive");
      }
      Reference positive;
      try {
        positive = ContentOnly(item.positives.front(), tagger);
      } catch (const EmptyContent&) {
        ++dropped;
        continue;
      }
      std::set<std::string> exclude;
      for (const Reference& r : item.positives) exclude.insert(item.item_id + "/" + r.id);
      BenchmarkItem content;
      content.item_id = item.item_id;
      content.image = item.image;
      content.branch = {Branch::kContent, src.label};
      content.negatives = SampleRandomNegatives(
          pool, config.negatives_per_item,
          DeriveSeed(config.seed, "content/" + src.label + "/" + item.item_id), exclude);
      for (const Reference& n : content.negatives) {
        if (n.id == positive.id) {
          throw DuplicateId(item.item_id + "/" + n.id);
        }
      }
      content.positives.push_back(std::move(positive));
      claim(content.item_id);
      out.items.push_back(std::move(content));
      ++kept;
    }
    branches["Content"]["sources"].push_back({{"label", src.label},
                                              {"input_items", src.data.items.size()},
                                              {"kept", kept},
                                              {"dropped_empty_content", dropped}});
  }

  out.metadata.name = config.name;
  out.metadata.version = config.version;
  ordered_json& params = out.metadata.parameters;
  params["seed"] = config.seed;
  params["model"] = config.model;
  params["normalization"] =
      config.normalization == NormalizationScope::kBranch ? "branch" : "dataset";
  params["aggregation"] = PairAggregationName(config.aggregation);
  params["gate"] = SignificanceGateName(config.gate.gate);
  params["alpha"] = config.gate.alpha;
  params["negatives_per_item"] = config.negatives_per_item;
  params["pool_size"] = pool.size();
  params["branches"] = std::move(branches);
  return result;
}

}  // namespace sade
