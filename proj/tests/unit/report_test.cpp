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

#include <fstream>

#include "sade/error.hpp"
#include "sade/report.hpp"
#include "support/synthetic.hpp"

namespace sade {
namespace {

EvalReport FullReport() {
  EvalReport r;
  r.provider = "mock://table.tsv";
  r.model = "unigram";
  r.prompt = std::string(kDefaultPrompt);
  r.seed = 7;
  double v = 0.1;
  for (Branch b : kAllBranches) {
    BranchResult res;
    res.branch = b;
    res.metric = b == Branch::kComprehensive ? "group" : "recall@1";
    res.value = v;
    res.count = 100;
    v += 0.1;
    if (b == Branch::kComprehensive) res.winoground = WinogroundScores{0.3, 0.2, 0.1, 100};
    r.branches.push_back(res);
  }
  r.ablation.push_back({Branch::kRelation, "recall@1", 0.6, 0.5, -0.1, 100});
  r.human.push_back({"Relation/VL-CheckList", RatingSource::kOrigin, 3.18, 50});
  r.human.push_back({"Relation/VL-CheckList", RatingSource::kSade, 1.40, 50});
  std::vector<BiasRecord> recs = {{"a", 1.0, 0, {1.0}}, {"b", -0.5, 0, {-0.5}},
                                  {"c", 0.25, 0, {0.25}}};
  r.bias.push_back(SummarizeBias("Relation", recs, 4));
  return r;
}

TEST(ReportFormat, Parse) {
  EXPECT_EQ(ParseReportFormat("json"), ReportFormat::kJson);
  EXPECT_EQ(ParseReportFormat("markdown"), ReportFormat::kMarkdown);
  EXPECT_EQ(ParseReportFormat("md"), ReportFormat::kMarkdown);
  EXPECT_THROW(ParseReportFormat("html"), ConfigError);
}

TEST(EmitReport, MarkdownHeaderInColumnOrder) {
  const std::string md = EmitReport(FullReport(), ReportFormat::kMarkdown);
  EXPECT_NE(md.find("| Model | Comprehensive | Relation | Attribute | Atomic | Negate | "
                    "Content |"),
            std::string::npos);
  EXPECT_NE(md.find("| unigram | 10.00 | 20.00 | 30.00 | 40.00 | 50.00 | 60.00 |"),
            std::string::npos);
}

TEST(EmitReport, ByteIdentical) {
  for (ReportFormat f : {ReportFormat::kJson, ReportFormat::kMarkdown}) {
    EXPECT_EQ(EmitReport(FullReport(), f), EmitReport(FullReport(), f));
  }
}

TEST(EmitReport, MissingBranchIsIncomplete) {
  EvalReport r = FullReport();
  std::erase_if(r.branches, [](const BranchResult& b) { return b.branch == Branch::kNegate; });
  try {
    EmitReport(r, ReportFormat::kMarkdown);
    FAIL() << "expected IncompleteResults";
  } catch (const IncompleteResults& e) {
    EXPECT_NE(std::string(e.what()).find("Negate"), std::string::npos);
  }
  EXPECT_THROW(EmitReport(r, ReportFormat::kJson), IncompleteResults);
}

TEST(EmitReport, DuplicateBranchIsIncomplete) {
  EvalReport r = FullReport();
  r.branches.push_back(r.branches[1]);
  EXPECT_THROW(EmitReport(r, ReportFormat::kJson), IncompleteResults);
}

TEST(EmitReport, HumanRows) {
  const std::string md = EmitReport(FullReport(), ReportFormat::kMarkdown);
  EXPECT_NE(md.find("| origin ref. | 3.18 |"), std::string::npos);
  EXPECT_NE(md.find("| SADE ref. | 1.40 |"), std::string::npos);
}

TEST(HumanEvalMarkdown, MissingCellIsDash) {
  const std::vector<HumanEvalRow> rows = {{"Atomic", RatingSource::kOrigin, 2.5, 4},
                                          {"Negate", RatingSource::kSade, 0.25, 4}};
  const std::string md = HumanEvalMarkdown(rows);
  EXPECT_NE(md.find("| origin ref. | 2.50 | - |"), std::string::npos);
  EXPECT_NE(md.find("| SADE ref. | - | 0.25 |"), std::string::npos);
}

TEST(EvalReportJson, RoundTrip) {
  const EvalReport r = FullReport();
  const auto doc = EvalReportToJson(r);
  const EvalReport back = EvalReportFromJson(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(EvalReportToJson(back).dump(), doc.dump());
  EXPECT_EQ(back.seed, 7u);
  ASSERT_EQ(back.branches.size(), 6u);
  ASSERT_TRUE(back.branches[0].winoground.has_value());
  EXPECT_EQ(back.branches[0].winoground->text_score, 0.3);
  EXPECT_EQ(back.human[1].mean, 1.40);
}

TEST(EvalReportJson, KeyOrder) {
  const auto doc = EvalReportToJson(FullReport());
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"provider", "model", "prompt", "seed", "branches",
                                            "ablation", "human", "bias"}));
}

TEST(EvalReportJson, LoadFromFile) {
  const auto dir = testing::MakeTempDir("report");
  const auto path = dir / "r.json";
  std::ofstream(path) << EmitReport(FullReport(), ReportFormat::kJson);
  const EvalReport back = LoadEvalReport(path);
  EXPECT_EQ(EmitReport(back, ReportFormat::kMarkdown),
            EmitReport(FullReport(), ReportFormat::kMarkdown));
  EXPECT_THROW(LoadEvalReport(dir / "none.json"), FileNotFound);
}

}  // namespace
}  // namespace sade
