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
#include <sys/socket.h>
#include <sys/wait.h>
#include <netinet/in.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sade/cli.hpp"
#include "sade/debias.hpp"
#include "sade/encoding.hpp"
#include "sade/manifest.hpp"
#include "support/synthetic.hpp"

namespace sade {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

testing::SadeFixture SmallFixture(const std::string& tag) {
  testing::SadeFixtureSizes sizes;
  sizes.pairs = 10;
  sizes.filtered_items = 80;
  sizes.content_items = 40;
  sizes.pool = 200;
  return testing::WriteSadeFixture(testing::MakeTempDir(tag), sizes, 17);
}

std::string Mock(const testing::SadeFixture& fx) { return "mock://" + fx.table.string(); }

TEST(Cli, ValidateCleanFixture) {
  const auto fx = SmallFixture("cli-validate");
  const Result r = Cli({"validate", "--in", fx.sources.at(Branch::kRelation).string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_TRUE(doc["ok"].get<bool>());
  EXPECT_TRUE(doc["violations"].empty());
  EXPECT_EQ(doc["items"], 80);
}

TEST(Cli, ValidateReportsViolations) {
  const auto dir = testing::MakeTempDir("cli-invalid");
  Benchmark bad;
  bad.items.push_back(testing::MakeItem("x", Branch::kRelation, "s", "a dog", {}));
  SaveBenchmark(bad, dir / "bad.jsonl");
  const Result r = Cli({"validate", "--in", (dir / "bad.jsonl").string()});
  EXPECT_EQ(r.code, kExitData);
  const json doc = json::parse(r.out);
  EXPECT_FALSE(doc["ok"].get<bool>());
  EXPECT_FALSE(doc["violations"].empty());
}

TEST(Cli, BiasMatchesLibraryAndWritesManifest) {
  const auto fx = SmallFixture("cli-bias");
  const fs::path in = fx.sources.at(Branch::kAtomic);
  const fs::path out = fx.dir / "bias-atomic.json";
  const Result r = Cli({"bias", "--in", in.string(), "--provider", Mock(fx), "--out",
                        out.string(), "--parallel", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  const Benchmark b = LoadBenchmark(in);
  const MockProvider mock(MockTable::FromFile(fx.table));
  const BiasReport lib = ComputeBiasDistribution("Atomic", b.items, mock, {});
  EXPECT_EQ(ReadFile(out), BiasReportToJson(lib).dump(2) + "\n");

  const RunManifest m = LoadManifest(ManifestPathFor(out));
  EXPECT_EQ(m.subcommand, "bias");
  EXPECT_EQ(m.provider, Mock(fx));
  ASSERT_EQ(m.inputs.size(), 2u);
  EXPECT_EQ(m.inputs[0].sha256, Sha256Hex(ReadFile(in)));
  EXPECT_EQ(m.inputs[1].sha256, Sha256Hex(ReadFile(fx.table)));
  ASSERT_EQ(m.outputs.size(), 1u);
  EXPECT_EQ(m.outputs[0].sha256, Sha256Hex(ReadFile(out)));
  EXPECT_TRUE(VerifyManifest(m));
}

TEST(Cli, FilterKeepsWithinTau) {
  const auto fx = SmallFixture("cli-filter");
  const fs::path in = fx.sources.at(Branch::kNegate);
  const fs::path bias = fx.dir / "bias.json";
  ASSERT_EQ(Cli({"bias", "--in", in.string(), "--provider", Mock(fx), "--out", bias.string()})
                .code,
            kExitOk);
  const fs::path out = fx.dir / "kept.jsonl";
  const Result r = Cli({"filter", "--in", in.string(), "--bias", bias.string(), "--tau", "0.1",
                        "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  BiasReport report = LoadBiasReports(bias).front();
  const FilterResult lib = ApplyFilter(report, 0.1, {});
  const Benchmark kept = LoadBenchmark(out);
  ASSERT_EQ(kept.items.size(), lib.retained_ids.size());
  std::map<std::string, double> norm;
  for (const auto& rec : report.records) norm[rec.item_id] = rec.normalized;
  for (const auto& item : kept.items) EXPECT_LE(std::abs(norm.at(item.item_id)), 0.1);
}

TEST(Cli, AssembleMissingPoolNamesPath) {
  const auto fx = SmallFixture("cli-nopool");
  const std::string missing = (fx.dir / "no-such-pool.txt").string();
  const Result r = Cli({"assemble", "--config", fx.config.string(), "--pool", missing});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("no-such-pool.txt"), std::string::npos) << r.err;
  const json e = json::parse(r.err);
  EXPECT_EQ(e["exit"], kExitData);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"validate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"perturb", "--in", "x", "--out", "y", "--strategy", "sideways"}).code,
            kExitUsage);
  EXPECT_EQ(Cli({"report", "--in", "x", "--format", "pdf"}).code, kExitUsage);
  const Result r = Cli({"eval", "--bogus"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(json::parse(r.err)["error"], "usage");
}

TEST(Cli, MissingProviderIsUsage) {
  const auto fx = SmallFixture("cli-noprov");
  unsetenv("SADE_PROVIDER");
  const Result r = Cli({"bias", "--in", fx.sources.at(Branch::kAtomic).string(), "--out",
                        (fx.dir / "b.json").string()});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST(Cli, OutputMayNotOverwriteInput) {
  const auto fx = SmallFixture("cli-clobber");
  const std::string in = fx.sources.at(Branch::kAtomic).string();
  const std::string before = ReadFile(in);
  const Result r = Cli({"perturb", "--in", in, "--out", in, "--strategy", "trigrams"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(ReadFile(in), before);
}

int DeadPort() {
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);
  close(fd);
  return port;
}

TEST(Cli, UnreachableProviderExitsTwo) {
  const auto fx = SmallFixture("cli-dead");
  const std::string endpoint = "http://127.0.0.1:" + std::to_string(DeadPort());
  const Result r = Cli({"eval", "--in", fx.sources.at(Branch::kAtomic).string(), "--provider",
                        endpoint, "--out", (fx.dir / "e.json").string()});
  EXPECT_EQ(r.code, kExitProvider);
  EXPECT_EQ(json::parse(r.err)["exit"], kExitProvider);
}

TEST(Cli, EnvironmentProvider) {
  const auto fx = SmallFixture("cli-env");
  setenv("SADE_PROVIDER", Mock(fx).c_str(), 1);
  const Result r = Cli({"eval", "--in", fx.sources.at(Branch::kAtomic).string(), "--out",
                        (fx.dir / "e.json").string()});
  unsetenv("SADE_PROVIDER");
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(Cli, ReproducibleArtifactsAndUntouchedInputs) {
  const auto fx = SmallFixture("cli-repro");
  std::map<fs::path, std::string> before;
  for (const auto& entry : fs::recursive_directory_iterator(fx.dir)) {
    if (entry.is_regular_file()) before[entry.path()] = ReadFile(entry.path());
  }
  auto run = [&](const std::string& tag) {
    const fs::path out = fx.dir / tag;
    const Result r = Cli({"assemble", "--config", fx.config.string(), "--out", out.string()});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    const fs::path eval = fx.dir / (tag + "-eval.json");
    EXPECT_EQ(Cli({"eval", "--in", (out / "sade.jsonl").string(), "--provider", Mock(fx),
                   "--out", eval.string(), "--seed", "5"})
                  .code,
              kExitOk);
    return std::vector<std::string>{ReadFile(out / "sade.jsonl"), ReadFile(out / "metadata.json"),
                                    ReadFile(out / "bias.json"), ReadFile(eval)};
  };
  EXPECT_EQ(run("a"), run("b"));
  for (const auto& [path, text] : before) EXPECT_EQ(ReadFile(path), text) << path;
  EXPECT_TRUE(VerifyManifest(LoadManifest(fx.dir / "a" / "manifest.json")));
}

TEST(Cli, PerturbAndCases) {
  const auto fx = SmallFixture("cli-perturb");
  const std::string in = fx.sources.at(Branch::kRelation).string();
  const fs::path out = fx.dir / "shuffled.jsonl";
  const Result r = Cli({"perturb", "--in", in, "--out", out.string(), "--strategy",
                        "within-trigrams", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Benchmark b = LoadBenchmark(out);
  EXPECT_EQ(b.items.size(), 80u);
  for (const auto& item : b.items) ASSERT_EQ(item.negatives.size(), item.positives.size());

  const fs::path cases = fx.dir / "cases";
  const Result c = Cli({"cases", "--in", in, "--out", cases.string(), "--pool",
                        fx.pool.string(), "--seed", "3"});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  for (const char* f : {"case1.jsonl", "case2.jsonl", "case3.jsonl", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(cases / f)) << f;
  }
}

TEST(Cli, AblateAndReport) {
  const auto fx = SmallFixture("cli-report");
  const fs::path sade = fx.dir / "sade";
  ASSERT_EQ(Cli({"assemble", "--config", fx.config.string(), "--out", sade.string()}).code,
            kExitOk);
  const std::string bench = (sade / "sade.jsonl").string();
  const fs::path eval = fx.dir / "eval.json", abl = fx.dir / "abl.json";
  ASSERT_EQ(Cli({"eval", "--in", bench, "--provider", Mock(fx), "--out", eval.string(),
                 "--scores", (fx.dir / "scores.jsonl").string()})
                .code,
            kExitOk);
  const Result a =
      Cli({"ablate", "--in", bench, "--provider", Mock(fx), "--out", abl.string()});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  std::ofstream(fx.dir / "ratings.csv") << "annotator,item_id,branch,source,rating\n"
                                        << "a,1,Relation,origin,3\na,1,Relation,sade,1\n";
  const Result md = Cli({"report", "--in", eval.string(), "--ablation", abl.string(),
                         "--ratings", (fx.dir / "ratings.csv").string(), "--bias",
                         (sade / "bias.json").string(), "--format", "markdown"});
  ASSERT_EQ(md.code, kExitOk) << md.err;
  EXPECT_NE(md.out.find("| Model | Comprehensive | Relation |"), std::string::npos);
  EXPECT_NE(md.out.find("Noise-image ablation"), std::string::npos);
  EXPECT_NE(md.out.find("| origin ref. | 3.00 |"), std::string::npos);

  std::ifstream scores(fx.dir / "scores.jsonl");
  std::string line;
  ASSERT_TRUE(std::getline(scores, line));
  const json first = json::parse(line);
  EXPECT_TRUE(first["candidates"][0].contains("raw_score"));
  EXPECT_TRUE(first["candidates"][0].contains("normalized_score"));
}

TEST(Cli, ReportWithMissingBranchFails) {
  const auto fx = SmallFixture("cli-incomplete");
  const fs::path eval = fx.dir / "eval.json";
  ASSERT_EQ(Cli({"eval", "--in", fx.sources.at(Branch::kAtomic).string(), "--provider",
                 Mock(fx), "--out", eval.string()})
                .code,
            kExitOk);
  const Result r = Cli({"report", "--in", eval.string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_EQ(json::parse(r.err)["error"], "IncompleteResults");
}

TEST(Cli, BinarySpawns) {
  const auto fx = SmallFixture("cli-binary");
  const std::string cmd = std::string(SADE_CLI_BINARY) + " validate --in " +
                          fx.sources.at(Branch::kRelation).string() + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = pclose(pipe);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0) << text;
  EXPECT_TRUE(json::parse(text)["ok"].get<bool>());

  FILE* bad = popen((std::string(SADE_CLI_BINARY) + " nope 2>/dev/null").c_str(), "r");
  const int bad_status = pclose(bad);
  EXPECT_EQ(WEXITSTATUS(bad_status), kExitUsage);
}

}  // namespace
}  // namespace sade
