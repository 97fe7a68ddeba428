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

#include "sade/debias.hpp"
#include "sade/encoding.hpp"
#include "sade/error.hpp"
#include "support/synthetic.hpp"

namespace sade {
namespace {

constexpr const char* kConfig = R"(
name = "SADE-mini"
version = "0.3"
seed = 42
pool = "data/pool.txt"
negatives_per_item = 3
bins = 10
normalization = "dataset"
aggregation = "max"
gate = "require-unbiased"
alpha = 0.001

[provider]
endpoint = "mock://tables/unigram.tsv"
model = "llava-7b"
parallel = 8

[tau]
Relation = 0.1
Negate = 0.02

[[source]]
branch = "Relation"
label = "VL-CheckList"
path = "rel.jsonl"

[[source]]
branch = "Content"
path = "/abs/coco.jsonl"
positive_policy = "random"
)";

TEST(SadeConfig, ParsesEveryField) {
  const SadeConfig cfg = ParseSadeConfig(kConfig, "/base");
  EXPECT_EQ(cfg.name, "SADE-mini");
  EXPECT_EQ(cfg.version, "0.3");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.pool, "/base/data/pool.txt");
  EXPECT_EQ(cfg.negatives_per_item, 3u);
  EXPECT_EQ(cfg.bins, 10u);
  EXPECT_EQ(cfg.normalization, NormalizationScope::kDataset);
  EXPECT_EQ(cfg.aggregation, PairAggregation::kMax);
  EXPECT_EQ(cfg.gate.gate, SignificanceGate::kRequireUnbiased);
  EXPECT_EQ(cfg.gate.alpha, 0.001);
  EXPECT_EQ(cfg.provider_endpoint, "mock:///base/tables/unigram.tsv");
  EXPECT_EQ(cfg.model, "llava-7b");
  EXPECT_EQ(cfg.parallel, 8u);
  EXPECT_EQ(cfg.TauFor(Branch::kRelation), 0.1);
  EXPECT_EQ(cfg.TauFor(Branch::kNegate), 0.02);
  EXPECT_EQ(cfg.TauFor(Branch::kAtomic), SadeConfig::kDefaultTau);
  ASSERT_EQ(cfg.sources.size(), 2u);
  EXPECT_EQ(cfg.sources[0].branch, Branch::kRelation);
  EXPECT_EQ(cfg.sources[0].label, "VL-CheckList");
  EXPECT_EQ(cfg.sources[0].path, "/base/rel.jsonl");
  EXPECT_EQ(cfg.sources[1].label, "coco");
  EXPECT_EQ(cfg.sources[1].path, "/abs/coco.jsonl");
  EXPECT_EQ(cfg.sources[1].positive_policy, PositivePolicy::kSeededRandom);
}

TEST(SadeConfig, Defaults) {
  const SadeConfig cfg = ParseSadeConfig("", "/base");
  EXPECT_EQ(cfg.name, "SADE");
  EXPECT_EQ(cfg.negatives_per_item, 2u);
  EXPECT_EQ(cfg.bins, 20u);
  EXPECT_EQ(cfg.gate.gate, SignificanceGate::kNone);
  EXPECT_EQ(cfg.gate.alpha, 1e-5);
  EXPECT_EQ(cfg.normalization, NormalizationScope::kBranch);
  EXPECT_TRUE(cfg.sources.empty());
}

TEST(SadeConfig, Errors) {
  EXPECT_THROW(ParseSadeConfig("seed = ", "."), ParseError);
  EXPECT_THROW(ParseSadeConfig("[tau]\nSpatial = 0.1\n", "."), ConfigError);
  EXPECT_THROW(ParseSadeConfig("[tau]\nRelation = 0.0\n", "."), ConfigError);
  EXPECT_THROW(ParseSadeConfig("[tau]\nRelation = 1.5\n", "."), ConfigError);
  EXPECT_THROW(ParseSadeConfig("bins = 0\n", "."), ConfigError);
  EXPECT_THROW(ParseSadeConfig("gate = \"sometimes\"\n", "."), ConfigError);
  EXPECT_THROW(ParseSadeConfig("normalization = \"global\"\n", "."), ConfigError);
  EXPECT_THROW(ParseSadeConfig("[[source]]\nbranch = \"Spatial\"\npath = \"x\"\n", "."),
               ConfigError);
  EXPECT_THROW(ParseSadeConfig("[[source]]\nbranch = \"Relation\"\n", "."), ConfigError);
  EXPECT_THROW(ParseSadeConfig("[provider]\nparallel = 0\n", "."), ConfigError);
  EXPECT_THROW(LoadSadeConfig("/nonexistent/sade.toml"), FileNotFound);
}

TEST(SadeConfig, LoadResolvesAgainstFileDirectory) {
  const auto dir = testing::MakeTempDir("cfg");
  WriteFile(dir / "sub" / "sade.toml", "pool = \"pool.txt\"\n");
  EXPECT_EQ(LoadSadeConfig(dir / "sub" / "sade.toml").pool, dir / "sub" / "pool.txt");
}

}  // namespace
}  // namespace sade
