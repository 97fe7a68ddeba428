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

#include "sade/cli.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sade/corpus.hpp"
#include "sade/debias.hpp"
#include "sade/encoding.hpp"
#include "sade/error.hpp"
#include "sade/eval.hpp"
#include "sade/manifest.hpp"
#include "sade/perturb.hpp"
#include "sade/provider.hpp"
#include "sade/report.hpp"

namespace sade {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string in;
  std::string out;
  std::string provider;
  std::string model;
  std::string prompt{kDefaultPrompt};
  std::string config;
  std::string pool;
  std::string strategy;
  std::string format{"json"};
  std::string ratings;
  std::string ablation;
  std::string positive_policy{"strict"};
  std::string image_root;
  std::string gate{"none"};
  std::string aggregation{"mean"};
  std::string branch;
  std::string report;
  std::string scores;
  std::vector<std::string> bias;
  Seed seed = 0;
  std::size_t parallel = 1;
  double tau = SadeConfig::kDefaultTau;
  double alpha = GateOptions{}.alpha;
  std::size_t bins = 20;

  std::map<std::string, CLI::Option*> options;

  bool Given(const std::string& name) const {
    auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

// A trailing '!' marks the flag required for that subcommand.
void AddFlags(CLI::App* app, Flags& f, const std::vector<std::string_view>& names) {
  for (std::string_view spec : names) {
    const bool required = spec.ends_with('!');
    const std::string name(required ? spec.substr(0, spec.size() - 1) : spec);
    CLI::Option* opt = nullptr;
    if (name == "in") {
      opt = app->add_option("--in", f.in, "input file");
    } else if (name == "out") {
      opt = app->add_option("--out", f.out, "output path");
    } else if (name == "provider") {
      opt = app->add_option("--provider", f.provider,
                            "http://host:port, mock://table.tsv or mock-digest://table.tsv");
    } else if (name == "model") {
      opt = app->add_option("--model", f.model, "model id sent with every request");
    } else if (name == "seed") {
      opt = app->add_option("--seed", f.seed, "root seed");
    } else if (name == "parallel") {
      opt = app->add_option("--parallel", f.parallel, "max in-flight provider requests")
                ->check(CLI::PositiveNumber);
    } else if (name == "prompt") {
      opt = app->add_option("--prompt", f.prompt, "instruction prompt");
    } else if (name == "tau") {
      opt = app->add_option("--tau", f.tau, "bias threshold")
                ->check(CLI::Range(0.0, 1.0));
    } else if (name == "bins") {
      opt = app->add_option("--bins", f.bins, "histogram bins")->check(CLI::PositiveNumber);
    } else if (name == "config") {
      opt = app->add_option("--config", f.config, "TOML assembly config");
    } else if (name == "pool") {
      opt = app->add_option("--pool", f.pool, "sentence pool (.jsonl benchmark or .txt lines)");
    } else if (name == "strategy") {
      opt = app->add_option("--strategy", f.strategy, "shuffle strategy")
                ->check(CLI::IsMember(
                    {"nouns-adj", "all-but-nouns-adj", "within-trigrams", "trigrams"}));
    } else if (name == "format") {
      opt = app->add_option("--format", f.format, "json or markdown")
                ->check(CLI::IsMember({"json", "markdown", "md"}));
    } else if (name == "ratings") {
      opt = app->add_option("--ratings", f.ratings, "human ratings CSV");
    } else if (name == "ablation") {
      opt = app->add_option("--ablation", f.ablation, "output of `ablate`");
    } else if (name == "bias") {
      opt = app->add_option("--bias", f.bias, "bias report file(s)");
    } else if (name == "positive-policy") {
      opt = app->add_option("--positive-policy", f.positive_policy,
                            "items with several positives")
                ->check(CLI::IsMember({"strict", "first", "random"}));
    } else if (name == "image-root") {
      opt = app->add_option("--image-root", f.image_root,
                            "base directory for relative image paths");
    } else if (name == "gate") {
      opt = app->add_option("--gate", f.gate, "none, require-unbiased or require-significant")
                ->check(CLI::IsMember({"none", "require-unbiased", "require-significant"}));
    } else if (name == "alpha") {
      opt = app->add_option("--alpha", f.alpha, "significance level")
                ->check(CLI::Range(0.0, 1.0));
    } else if (name == "aggregation") {
      opt = app->add_option("--aggregation", f.aggregation, "mean or max over pairs")
                ->check(CLI::IsMember({"mean", "max"}));
    } else if (name == "branch") {
      opt = app->add_option("--branch", f.branch, "branch label");
    } else if (name == "report") {
      opt = app->add_option("--report", f.report, "also write the updated bias report here");
    } else if (name == "scores") {
      opt = app->add_option("--scores", f.scores, "per-item scores (JSONL)");
    }
    if (required) opt->required();
    f.options[name] = opt;
  }
}

struct Run {
  std::string subcommand;
  const std::vector<std::string>& args;
  Flags& f;
  std::ostream& out;
  std::ostream& err;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  fs::path manifest_path;
  std::string provider;
  std::string model;
  Seed seed = 0;
};

PositivePolicy ToPolicy(std::string_view name) {
  if (name == "first") return PositivePolicy::kFirst;
  if (name == "random") return PositivePolicy::kSeededRandom;
  return PositivePolicy::kStrict;
}

Benchmark LoadInput(Run& run, const fs::path& path, bool enforce = true) {
  run.inputs.push_back(path);
  LoadOptions options;
  options.positive_policy = ToPolicy(run.f.positive_policy);
  options.seed = run.f.seed;
  options.enforce_validation = enforce;
  return LoadBenchmark(path, options);
}

std::vector<Reference> LoadPool(Run& run, const fs::path& path) {
  if (path.extension() != ".txt") return PoolFromBenchmark(LoadInput(run, path));
  run.inputs.push_back(path);
  std::istringstream lines(ReadFile(path));
  std::vector<Reference> pool;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.back() == '\r') line.pop_back();
    pool.push_back(MakeReference(fmt::format("pool/{}", pool.size()), line,
                                 Polarity::kNegative));
  }
  return pool;
}

std::string ResolveEndpoint(const Flags& f, const std::string& fallback = "") {
  if (f.Given("provider")) return f.provider;
  if (!fallback.empty()) return fallback;
  if (const char* env = std::getenv("SADE_PROVIDER"); env && *env) return env;
  throw UsageError("no provider: pass --provider or set SADE_PROVIDER");
}

std::unique_ptr<LogProbProvider> OpenProvider(Run& run, const std::string& endpoint,
                                              const Benchmark* benchmark,
                                              const fs::path& image_root) {
  run.provider = endpoint;
  constexpr std::string_view kDigest = "mock-digest://";
  constexpr std::string_view kMock = "mock://";
  if (endpoint.starts_with(kDigest)) {
    if (benchmark == nullptr) {
      throw UsageError("mock-digest:// needs a benchmark with images");
    }
    const fs::path table = endpoint.substr(kDigest.size());
    run.inputs.push_back(table);
    return std::make_unique<ImageDigestMockProvider>(ImageDigestMockProvider::FromBenchmark(
        MockTable::FromFile(table), *benchmark, image_root));
  }
  if (endpoint.starts_with(kMock)) run.inputs.push_back(endpoint.substr(kMock.size()));
  return MakeProvider(endpoint);
}

fs::path ImageRoot(const Flags& f) {
  if (!f.image_root.empty()) return f.image_root;
  return fs::path(f.in).parent_path();
}

void CheckNoClobber(const Run& run) {
  std::set<fs::path> inputs;
  for (const fs::path& p : run.inputs) inputs.insert(fs::weakly_canonical(p));
  for (const fs::path& p : run.outputs) {
    if (inputs.contains(fs::weakly_canonical(p))) {
      throw UsageError("output would overwrite input " + p.string());
    }
  }
}

std::string UtcNow() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(
                         std::chrono::system_clock::now())));
}

// ---- subcommands ---------------------------------------------------------

int CmdValidate(Run& run) {
  const Flags& f = run.f;
  const Benchmark benchmark = LoadInput(run, f.in, /*enforce=*/false);
  const ValidationReport report = Validate(benchmark);
  ordered_json violations = ordered_json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"where", v.where}, {"field", v.field}, {"message", v.message}});
  }
  const ordered_json doc = {{"file", f.in},
                            {"items", benchmark.items.size()},
                            {"pairs", benchmark.pairs.size()},
                            {"ok", report.ok()},
                            {"violations", violations}};
  run.out << doc.dump() << "\n";
  if (!f.out.empty()) {
    run.outputs.push_back(f.out);
    CheckNoClobber(run);
    WriteFile(f.out, doc.dump(2) + "\n");
  }
  return report.ok() ? kExitOk : kExitData;
}

int CmdPerturb(Run& run) {
  const Flags& f = run.f;
  const Benchmark in = LoadInput(run, f.in);
  run.outputs.push_back(f.out);
  CheckNoClobber(run);
  const ShuffleStrategy strategy = *ParseStrategy(f.strategy);
  const std::string name(StrategyName(strategy));

  Benchmark result;
  result.metadata = in.metadata;
  result.metadata.name = in.metadata.name + "-" + name;
  result.metadata.parameters["strategy"] = name;
  result.metadata.parameters["seed"] = f.seed;
  std::vector<std::string> identity;
  for (const BenchmarkItem& item : in.items) {
    BenchmarkItem next = item;
    next.negatives.clear();
    for (const Reference& pos : item.positives) {
      PerturbResult p =
          Perturb(pos, strategy, DeriveSeed(f.seed, "perturb/" + name + "/" + item.item_id));
      if (p.identity) identity.push_back(p.reference.id);
      next.negatives.push_back(std::move(p.reference));
    }
    result.items.push_back(std::move(next));
  }
  result.pairs = in.pairs;
  SaveBenchmark(result, f.out);
  run.out << ordered_json{{"items", result.items.size()}, {"identity", identity}}.dump()
          << "\n";
  return kExitOk;
}

int CmdCases(Run& run) {
  const Flags& f = run.f;
  const Benchmark in = LoadInput(run, f.in);
  const std::vector<Reference> pool = f.pool.empty() ? PoolFromBenchmark(in) : LoadPool(run, f.pool);
  const fs::path dir = f.out;
  const CaseSuite suite = BuildCaseSuite(in.items, pool, f.seed);
  const std::array<std::pair<const char*, const Benchmark*>, 3> files = {
      {{"case1.jsonl", &suite.case1}, {"case2.jsonl", &suite.case2}, {"case3.jsonl", &suite.case3}}};
  for (const auto& [file, _] : files) run.outputs.push_back(dir / file);
  CheckNoClobber(run);
  for (const auto& [file, benchmark] : files) SaveBenchmark(*benchmark, dir / file);
  run.manifest_path = dir / "manifest.json";
  run.out << ordered_json{{"case1", suite.case1.items.size()},
                          {"case2", suite.case2.items.size()},
                          {"case3", suite.case3.items.size()},
                          {"dropped_from_case3", suite.dropped_from_case3},
                          {"identity_shuffles", suite.identity_shuffles}}
                 .dump()
          << "\n";
  return kExitOk;
}

std::string BranchLabel(const Flags& f, const Benchmark& benchmark) {
  if (!f.branch.empty()) return f.branch;
  std::set<Branch> branches;
  for (const BenchmarkItem& item : benchmark.items) branches.insert(item.branch.name);
  if (branches.size() == 1) return std::string(BranchName(*branches.begin()));
  return benchmark.metadata.name;
}

int CmdBias(Run& run) {
  const Flags& f = run.f;
  const Benchmark in = LoadInput(run, f.in);
  auto provider = OpenProvider(run, ResolveEndpoint(f), &in, ImageRoot(f));
  run.outputs.push_back(f.out);
  CheckNoClobber(run);
  BiasOptions options;
  options.bins = f.bins;
  options.parallel = f.parallel;
  options.aggregation = ParsePairAggregation(f.aggregation);
  options.model = f.model;
  const BiasReport report = ComputeBiasDistribution(BranchLabel(f, in), in.items, *provider, options);
  WriteFile(f.out, BiasReportToJson(report).dump(2) + "\n");
  run.out << ordered_json{{"branch", report.branch},
                          {"records", report.records.size()},
                          {"mean", report.mean}}
                 .dump()
          << "\n";
  return kExitOk;
}

int CmdFilter(Run& run) {
  const Flags& f = run.f;
  if (f.bias.size() != 1) throw UsageError("filter takes exactly one --bias report");
  run.inputs.push_back(f.bias.front());
  std::vector<BiasReport> reports = LoadBiasReports(f.bias.front());
  BiasReport* chosen = nullptr;
  if (reports.size() == 1) {
    chosen = &reports.front();
  } else {
    for (BiasReport& r : reports) {
      if (r.branch == f.branch) chosen = &r;
    }
    if (chosen == nullptr) {
      throw UsageError("bias file holds several reports; pick one with --branch");
    }
  }
  const Benchmark in = LoadInput(run, f.in);
  run.outputs.push_back(f.out);
  if (!f.report.empty()) run.outputs.push_back(f.report);
  CheckNoClobber(run);

  GateOptions gate{ParseSignificanceGate(f.gate), f.alpha};
  const FilterResult kept = ApplyFilter(*chosen, f.tau, gate);
  if (kept.empty) {
    run.err << ordered_json{{"warning", "no item of " + chosen->branch + " is within tau"}}.dump()
            << "\n";
  }
  const std::set<std::string> retained(kept.retained_ids.begin(), kept.retained_ids.end());
  Benchmark result;
  result.metadata = in.metadata;
  result.metadata.parameters["tau"] = f.tau;
  result.metadata.parameters["gate"] = SignificanceGateName(gate.gate);
  for (const BenchmarkItem& item : in.items) {
    if (retained.contains(item.item_id)) result.items.push_back(item);
  }
  result.pairs = in.pairs;
  SaveBenchmark(result, f.out);
  if (!f.report.empty()) WriteFile(f.report, BiasReportToJson(*chosen).dump(2) + "\n");
  run.out << ordered_json{{"branch", chosen->branch},
                          {"retained", result.items.size()},
                          {"total", in.items.size()},
                          {"retained_fraction", kept.retained_fraction}}
                 .dump()
          << "\n";
  return kExitOk;
}

int CmdAssemble(Run& run) {
  const Flags& f = run.f;
  run.inputs.push_back(f.config);
  SadeConfig config = LoadSadeConfig(f.config);
  if (f.Given("seed")) config.seed = f.seed;
  if (f.Given("model")) config.model = f.model;
  if (f.Given("parallel")) config.parallel = f.parallel;
  if (f.Given("bins")) config.bins = f.bins;
  if (f.Given("pool")) config.pool = f.pool;
  if (f.Given("gate")) config.gate.gate = ParseSignificanceGate(f.gate);
  if (f.Given("alpha")) config.gate.alpha = f.alpha;
  if (f.Given("aggregation")) config.aggregation = ParsePairAggregation(f.aggregation);
  if (f.Given("tau")) {
    for (Branch b : {Branch::kRelation, Branch::kAttribute, Branch::kAtomic, Branch::kNegate}) {
      config.tau[b] = f.tau;
    }
  }
  config.Check();
  run.seed = config.seed;
  run.model = config.model;

  std::vector<SourceBenchmark> sources;
  for (const SourceSpec& spec : config.sources) {
    run.inputs.push_back(spec.path);
    LoadOptions options;
    options.positive_policy = spec.positive_policy;
    options.seed = config.seed;
    options.allow_missing_negatives = spec.branch == Branch::kContent;
    sources.push_back({spec.branch, spec.label, LoadBenchmark(spec.path, options)});
  }
  if (config.pool.empty()) throw ConfigError("no sentence pool configured");
  const std::vector<Reference> pool = LoadPool(run, config.pool);
  auto provider = OpenProvider(run, ResolveEndpoint(f, config.provider_endpoint), nullptr, {});
  config.provider_endpoint = run.provider;

  const fs::path dir = f.out.empty() ? fs::path(f.config).parent_path() / config.name : fs::path(f.out);
  run.outputs = {dir / "sade.jsonl", dir / "metadata.json", dir / "bias.json"};
  run.manifest_path = dir / "manifest.json";
  CheckNoClobber(run);

  const SadeResult result = AssembleSade(config, sources, *provider, pool);
  SaveBenchmark(result.benchmark, dir / "sade.jsonl");
  SaveMetadata(result.benchmark, dir / "metadata.json");
  ordered_json reports = ordered_json::array();
  for (const BiasReport& r : result.reports) reports.push_back(BiasReportToJson(r));
  WriteFile(dir / "bias.json", reports.dump(2) + "\n");
  run.out << MetadataToJson(result.benchmark).dump() << "\n";
  return kExitOk;
}

ScoringOptions ScoringFrom(const Flags& f) {
  ScoringOptions options;
  options.prompt = f.prompt;
  options.model = f.model;
  options.parallel = f.parallel;
  options.image_root = ImageRoot(f);
  return options;
}

int CmdEval(Run& run) {
  const Flags& f = run.f;
  const Benchmark in = LoadInput(run, f.in);
  auto provider = OpenProvider(run, ResolveEndpoint(f), &in, ImageRoot(f));
  run.outputs.push_back(f.out);
  if (!f.scores.empty()) run.outputs.push_back(f.scores);
  CheckNoClobber(run);

  std::vector<ScoredItem> scored;
  EvalReport report;
  report.branches =
      EvaluateBenchmark(in, *provider, ScoringFrom(f), f.scores.empty() ? nullptr : &scored);
  report.provider = run.provider;
  report.model = f.model;
  report.prompt = f.prompt;
  report.seed = f.seed;
  WriteFile(f.out, EvalReportToJson(report).dump(2) + "\n");

  if (!f.scores.empty()) {
    std::string lines;
    for (const ScoredItem& item : scored) {
      const Selection best = SelectBest(item);
      const std::vector<double> normalized = NormalizedItemScores(item);
      ordered_json candidates = ordered_json::array();
      for (std::size_t k = 0; k < item.candidates.size(); ++k) {
        candidates.push_back({{"id", item.candidates[k].id},
                              {"polarity", PolarityName(item.candidates[k].polarity)},
                              {"raw_score", item.scores[k]},
                              {"normalized_score", normalized[k]}});
      }
      lines += ordered_json{{"item_id", item.item_id},
                            {"branch", BranchName(item.branch)},
                            {"selected", best.index},
                            {"tie", best.tie},
                            {"hit", IsHit(item)},
                            {"candidates", candidates}}
                   .dump();
      lines += '\n';
    }
    WriteFile(f.scores, lines);
  }
  ordered_json summary = ordered_json::object();
  for (const BranchResult& r : report.branches) summary[std::string(BranchName(r.branch))] = r.value;
  run.out << summary.dump() << "\n";
  return kExitOk;
}

int CmdAblate(Run& run) {
  const Flags& f = run.f;
  const Benchmark in = LoadInput(run, f.in);
  auto provider = OpenProvider(run, ResolveEndpoint(f), &in, ImageRoot(f));
  run.outputs.push_back(f.out);
  CheckNoClobber(run);
  AblationOptions options;
  options.scoring = ScoringFrom(f);
  options.seed = f.seed;
  const AblationResult result = AblateNoise(in, *provider, options);
  EvalReport report;
  report.ablation = result.rows;
  report.provider = run.provider;
  report.model = f.model;
  report.prompt = f.prompt;
  report.seed = f.seed;
  ordered_json doc = EvalReportToJson(report);
  doc["warnings"] = result.warnings;
  WriteFile(f.out, doc.dump(2) + "\n");
  for (const std::string& w : result.warnings) {
    run.err << ordered_json{{"warning", w}}.dump() << "\n";
  }
  return kExitOk;
}

int CmdReport(Run& run) {
  const Flags& f = run.f;
  run.inputs.push_back(f.in);
  EvalReport report = LoadEvalReport(f.in);
  if (!f.ablation.empty()) {
    run.inputs.push_back(f.ablation);
    report.ablation = LoadEvalReport(f.ablation).ablation;
  }
  if (!f.ratings.empty()) {
    run.inputs.push_back(f.ratings);
    const std::vector<HumanRating> ratings = LoadHumanRatings(f.ratings);
    report.human = HumanEvalAggregate(ratings);
  }
  for (const std::string& path : f.bias) {
    run.inputs.push_back(path);
    for (BiasReport& b : LoadBiasReports(path)) report.bias.push_back(std::move(b));
  }
  if (!f.out.empty()) {
    run.outputs.push_back(f.out);
    CheckNoClobber(run);
  }
  const std::string text = EmitReport(report, ParseReportFormat(f.format));
  if (f.out.empty()) {
    run.out << text;
  } else {
    WriteFile(f.out, text);
  }
  run.provider = report.provider;
  run.model = report.model;
  run.seed = report.seed;
  return kExitOk;
}

void WriteRunManifest(const Run& run, std::chrono::steady_clock::time_point start,
                      const std::string& started_at) {
  if (run.outputs.empty()) return;
  RunManifest m;
  m.subcommand = run.subcommand;
  m.config = {{"subcommand", run.subcommand}, {"args", run.args},
              {"provider", run.provider},     {"model", run.model},
              {"seed", run.seed},             {"tool_version", kToolVersion}};
  m.seed = run.seed;
  m.provider = run.provider;
  m.model = run.model;
  m.inputs = HashFiles(run.inputs);
  m.outputs = HashFiles(run.outputs);
  m.config_digest = ComputeConfigDigest(m.config, m.inputs);
  m.started_at = started_at;
  m.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  WriteManifest(m, run.manifest_path.empty() ? ManifestPathFor(run.outputs.front())
                                             : run.manifest_path);
}

void EmitError(std::ostream& err, std::string_view kind, std::string_view message, int code) {
  err << ordered_json{{"error", kind}, {"message", message}, {"exit", code}}.dump() << "\n";
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark construction and evaluation tools", "sade"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  using Handler = int (*)(Run&);
  struct Sub {
    const char* name;
    const char* help;
    Handler handler;
    std::vector<std::string_view> flags;
  };
  const std::vector<Sub> subs = {
      {"validate", "check a benchmark file against its invariants", CmdValidate,
       {"in!", "out", "positive-policy"}},
      {"perturb", "replace negatives with shuffled positives", CmdPerturb,
       {"in!", "out!", "strategy!", "seed", "positive-policy"}},
      {"cases", "build the three SyntaxBias case suites", CmdCases,
       {"in!", "out!", "pool", "seed", "positive-policy"}},
      {"bias", "score the SyntaxBias distribution of a benchmark", CmdBias,
       {"in!", "out!", "provider", "model", "parallel", "bins", "aggregation", "branch",
        "positive-policy", "seed"}},
      {"filter", "keep items whose normalized bias is within tau", CmdFilter,
       {"in!", "out!", "bias!", "tau", "gate", "alpha", "branch", "report",
        "positive-policy", "seed"}},
      {"assemble", "build the de-biased benchmark from a config", CmdAssemble,
       {"config!", "out", "provider", "model", "seed", "parallel", "tau", "bins", "pool",
        "gate", "alpha", "aggregation"}},
      {"eval", "score every branch with VisualGPTScore", CmdEval,
       {"in!", "out!", "provider", "model", "prompt", "parallel", "image-root", "scores",
        "seed", "positive-policy"}},
      {"ablate", "re-run the evaluation with noise images", CmdAblate,
       {"in!", "out!", "provider", "model", "prompt", "parallel", "image-root", "seed",
        "positive-policy"}},
      {"report", "render an evaluation report", CmdReport,
       {"in!", "out", "format", "ablation", "ratings", "bias"}},
  };
  std::map<std::string, Flags> flags;
  std::vector<std::pair<CLI::App*, const Sub*>> apps;
  for (const Sub& sub : subs) {
    CLI::App* app_sub = app.add_subcommand(sub.name, sub.help);
    AddFlags(app_sub, flags[sub.name], sub.flags);
    apps.emplace_back(app_sub, &sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    EmitError(err, "usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  for (auto [app_sub, sub] : apps) {
    if (!app_sub->parsed()) continue;
    Flags& f = flags[sub->name];
    Run run{sub->name, args, f, out, err, {}, {}, {}, {}, f.model, f.seed};
    const auto start = std::chrono::steady_clock::now();
    const std::string started_at = UtcNow();
    try {
      const int code = sub->handler(run);
      WriteRunManifest(run, start, started_at);
      return code;
    } catch (const UsageError& e) {
      EmitError(err, "usage", e.what(), kExitUsage);
      return kExitUsage;
    } catch (const ProviderError& e) {
      EmitError(err, e.kind(), e.what(), kExitProvider);
      return kExitProvider;
    } catch (const Error& e) {
      EmitError(err, e.kind(), e.what(), kExitData);
      return kExitData;
    } catch (const std::exception& e) {
      EmitError(err, "internal", e.what(), kExitData);
      return kExitData;
    }
  }
  EmitError(err, "usage", "no subcommand", kExitUsage);
  return kExitUsage;
}

}  // namespace sade
