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

#include "sade/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "sade/encoding.hpp"
#include "sade/error.hpp"

namespace sade {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string Percent(double fraction) { return fmt::format("{:.2f}", 100.0 * fraction); }

void CheckComplete(const EvalReport& report) {
  std::map<Branch, int> seen;
  for (const BranchResult& r : report.branches) ++seen[r.branch];
  for (Branch b : kAllBranches) {
    auto it = seen.find(b);
    if (it == seen.end()) {
      throw IncompleteResults("missing results for branch " + std::string(BranchName(b)));
    }
    if (it->second > 1) {
      throw IncompleteResults("branch " + std::string(BranchName(b)) + " reported twice");
    }
  }
}

const BranchResult& ResultFor(const EvalReport& report, Branch branch) {
  for (const BranchResult& r : report.branches) {
    if (r.branch == branch) return r;
  }
  throw IncompleteResults("missing results for branch " + std::string(BranchName(branch)));
}

Branch RequireBranch(const json& value) {
  auto b = ParseBranch(value.get<std::string>());
  if (!b) throw ParseError(1, "unknown branch '" + value.get<std::string>() + "'");
  return *b;
}

std::string FormatStat(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.4g}", v);
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

ordered_json EvalReportToJson(const EvalReport& report) {
  ordered_json out;
  out["provider"] = report.provider;
  out["model"] = report.model;
  out["prompt"] = report.prompt;
  out["seed"] = report.seed;
  ordered_json branches = ordered_json::array();
  for (const BranchResult& r : report.branches) {
    ordered_json b;
    b["branch"] = BranchName(r.branch);
    b["metric"] = r.metric;
    b["value"] = r.value;
    b["count"] = r.count;
    b["ties"] = r.ties;
    if (r.winoground) {
      b["winoground"] = {{"text_score", r.winoground->text_score},
                         {"image_score", r.winoground->image_score},
                         {"group_score", r.winoground->group_score},
                         {"pairs", r.winoground->pairs}};
    }
    branches.push_back(std::move(b));
  }
  out["branches"] = std::move(branches);
  ordered_json ablation = ordered_json::array();
  for (const AblationRow& a : report.ablation) {
    ablation.push_back({{"branch", BranchName(a.branch)},
                        {"metric", a.metric},
                        {"original_acc", a.original_acc},
                        {"noise_acc", a.noise_acc},
                        {"delta", a.delta},
                        {"count", a.count}});
  }
  out["ablation"] = std::move(ablation);
  ordered_json human = ordered_json::array();
  for (const HumanEvalRow& h : report.human) {
    human.push_back({{"branch", h.branch},
                     {"source", RatingSourceName(h.source)},
                     {"mean", h.mean},
                     {"count", h.count}});
  }
  out["human"] = std::move(human);
  ordered_json bias = ordered_json::array();
  for (const BiasReport& b : report.bias) bias.push_back(BiasReportToJson(b));
  out["bias"] = std::move(bias);
  return out;
}

EvalReport EvalReportFromJson(const json& doc) {
  try {
    EvalReport report;
    report.provider = doc.value("provider", "");
    report.model = doc.value("model", "");
    report.prompt = doc.value("prompt", "");
    report.seed = doc.value("seed", Seed{0});
    for (const json& b : doc.value("branches", json::array())) {
      BranchResult r;
      r.branch = RequireBranch(b.at("branch"));
      r.metric = b.at("metric").get<std::string>();
      r.value = b.at("value").get<double>();
      r.count = b.value("count", std::size_t{0});
      r.ties = b.value("ties", std::size_t{0});
      if (b.contains("winoground")) {
        const json& w = b["winoground"];
        r.winoground = WinogroundScores{w.at("text_score").get<double>(),
                                        w.at("image_score").get<double>(),
                                        w.at("group_score").get<double>(),
                                        w.value("pairs", std::size_t{0})};
      }
      report.branches.push_back(std::move(r));
    }
    for (const json& a : doc.value("ablation", json::array())) {
      report.ablation.push_back({RequireBranch(a.at("branch")),
                                 a.at("metric").get<std::string>(),
                                 a.at("original_acc").get<double>(),
                                 a.at("noise_acc").get<double>(),
                                 a.at("delta").get<double>(),
                                 a.value("count", std::size_t{0})});
    }
    for (const json& h : doc.value("human", json::array())) {
      const std::string source = h.at("source").get<std::string>();
      report.human.push_back({h.at("branch").get<std::string>(),
                              source == "sade" ? RatingSource::kSade : RatingSource::kOrigin,
                              h.at("mean").get<double>(),
                              h.value("count", std::size_t{0})});
    }
    for (const json& b : doc.value("bias", json::array())) {
      report.bias.push_back(BiasReportFromJson(b));
    }
    return report;
  } catch (const json::exception& e) {
    throw ParseError(1, std::string("eval report: ") + e.what());
  }
}

EvalReport LoadEvalReport(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  return EvalReportFromJson(doc);
}

std::string HumanEvalMarkdown(std::span<const HumanEvalRow> rows) {
  std::vector<std::string> branches;
  std::map<std::pair<std::string, RatingSource>, double> means;
  for (const HumanEvalRow& r : rows) {
    if (std::find(branches.begin(), branches.end(), r.branch) == branches.end()) {
      branches.push_back(r.branch);
    }
    means[{r.branch, r.source}] = r.mean;
  }
  std::string out = "|";
  std::string rule = "|---|";
  for (const std::string& b : branches) {
    out += " | " + b;
    rule += "---|";
  }
  out += " |\n" + rule + "\n";
  for (auto [label, source] : {std::pair{"origin ref.", RatingSource::kOrigin},
                               std::pair{"SADE ref.", RatingSource::kSade}}) {
    out += std::string("| ") + label;
    for (const std::string& b : branches) {
      auto it = means.find({b, source});
      out += " | " + (it == means.end() ? std::string("-") : fmt::format("{:.2f}", it->second));
    }
    out += " |\n";
  }
  return out;
}

std::string EmitReport(const EvalReport& report, ReportFormat format) {
  CheckComplete(report);
  if (format == ReportFormat::kJson) return EvalReportToJson(report).dump(2) + "\n";

  std::string md = "# Evaluation report\n\n";
  md += fmt::format("- provider: `{}`\n- model: `{}`\n- prompt: \"{}\"\n- seed: {}\n\n",
                    report.provider, report.model, report.prompt, report.seed);

  md += "## Results\n\n| Model |";
  std::string rule = "|---|";
  for (Branch b : kAllBranches) {
    md += fmt::format(" {} |", BranchName(b));
    rule += "---|";
  }
  md += "\n" + rule + "\n| " + (report.model.empty() ? "-" : report.model) + " |";
  for (Branch b : kAllBranches) md += " " + Percent(ResultFor(report, b).value) + " |";
  md += "\n\nComprehensive reports the Winoground group score; the other branches "
        "report Recall@1. Values are percentages.\n";

  const BranchResult& comprehensive = ResultFor(report, Branch::kComprehensive);
  if (comprehensive.winoground) {
    const WinogroundScores& w = *comprehensive.winoground;
    md += "\n## Winoground\n\n| Text | Image | Group | Pairs |\n|---|---|---|---|\n";
    md += fmt::format("| {} | {} | {} | {} |\n", Percent(w.text_score),
                      Percent(w.image_score), Percent(w.group_score), w.pairs);
  }

  if (!report.ablation.empty()) {
    md += "\n## Noise-image ablation\n\n"
          "| Branch | Metric | Original | Noise | Delta | Items |\n"
          "|---|---|---|---|---|---|\n";
    for (const AblationRow& a : report.ablation) {
      md += fmt::format("| {} | {} | {} | {} | {} | {} |\n", BranchName(a.branch),
                        a.metric, Percent(a.original_acc), Percent(a.noise_acc),
                        Percent(a.delta), a.count);
    }
  }

  if (!report.human.empty()) {
    md += "\n## Human evaluation (closer to 0 is better)\n\n";
    md += HumanEvalMarkdown(report.human);
  }

  if (!report.bias.empty()) {
    md += "\n## SyntaxBias distributions\n";
    for (const BiasReport& b : report.bias) {
      md += fmt::format("\n### {}\n\n", b.branch);
      md += fmt::format("- records: {}\n- mean: {}\n- stdev: {}\n", b.records.size(),
                        FormatStat(b.mean), FormatStat(b.stdev));
      if (b.test) {
        md += fmt::format("- t-test: statistic {}, p {}\n", FormatStat(b.test->statistic),
                          FormatStat(b.test->p_value));
      }
      if (b.threshold) {
        md += fmt::format("- threshold: {}, retained: {}\n", FormatStat(*b.threshold),
                          b.retained_ids.size());
      }
      json arrays = {{"edges", b.histogram.edges}, {"counts", b.histogram.counts}};
      md += "\n```json\n" + arrays.dump() + "\n```\n";
    }
  }
  return md;
}

}  // namespace sade
