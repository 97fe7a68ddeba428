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

#include "sade/eval.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "sade/error.hpp"

namespace sade {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    fields.emplace_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string ExceptionMessage(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

}  // namespace

Selection SelectBest(const ScoredItem& item) {
  Selection sel;
  if (item.scores.empty()) return sel;
  for (std::size_t i = 1; i < item.scores.size(); ++i) {
    if (item.scores[i] > item.scores[sel.index]) sel.index = i;
  }
  const double best = item.scores[sel.index];
  sel.tie = std::count(item.scores.begin(), item.scores.end(), best) > 1;
  return sel;
}

bool IsHit(const ScoredItem& item) {
  if (item.candidates.empty()) return false;
  return item.candidates[SelectBest(item).index].polarity == Polarity::kPositive;
}

double RecallAt1(std::span<const ScoredItem> items) {
  if (items.empty()) return 0.0;
  std::size_t hits = 0;
  for (const ScoredItem& item : items) hits += IsHit(item) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

std::vector<double> NormalizedItemScores(const ScoredItem& item) {
  return NormalizeScores(item.scores).values;
}

std::vector<ScoredItem> ScoreItems(std::span<const BenchmarkItem> items,
                                   const LogProbProvider& provider,
                                   const ScoringOptions& options,
                                   std::span<const std::optional<std::string>> images) {
  std::vector<ScoreRequest> requests;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const BenchmarkItem& item = items[k];
    std::optional<std::string> image =
        images.empty() ? ReadImageBytes(item.image, options.image_root) : images[k];
    for (const auto* list : {&item.positives, &item.negatives}) {
      for (const Reference& ref : *list) {
        requests.push_back({options.prompt, image, ref.text, options.model});
      }
    }
  }
  std::vector<ScoreOutcome> outcomes = ScoreAll(provider, requests, options.parallel);

  std::vector<ScoredItem> scored;
  scored.reserve(items.size());
  std::size_t next = 0;
  for (const BenchmarkItem& item : items) {
    ScoredItem si;
    si.item_id = item.item_id;
    si.branch = item.branch.name;
    for (const auto* list : {&item.positives, &item.negatives}) {
      for (const Reference& ref : *list) {
        ScoreOutcome& o = outcomes[next++];
        if (o.error) throw PartialScore(item.item_id, ExceptionMessage(o.error));
        si.candidates.push_back({ref.id, ref.polarity});
        si.scores.push_back(VisualGptScore(*o.value, options.weights));
      }
    }
    scored.push_back(std::move(si));
  }
  return scored;
}

ScoredItem ScoreItem(const BenchmarkItem& item, const LogProbProvider& provider,
                     const ScoringOptions& options,
                     const std::optional<std::string>& image) {
  std::vector<std::optional<std::string>> images;
  if (image) images.push_back(image);
  return ScoreItems(std::span(&item, 1), provider, options, images).front();
}

PairOutcome JudgePair(const ScoredPair& pair) {
  for (const auto& row : pair.scores) {
    for (const auto& cell : row) {
      if (!cell) throw MissingCell(pair.pair_id);
    }
  }
  auto s = [&pair](int c, int i) { return *pair.scores[c][i]; };
  PairOutcome out;
  out.text = s(0, 0) > s(1, 0) && s(1, 1) > s(0, 1);
  out.image = s(0, 0) > s(0, 1) && s(1, 1) > s(1, 0);
  out.group = out.text && out.image;
  return out;
}

WinogroundScores ComputeWinogroundScores(std::span<const ScoredPair> pairs) {
  WinogroundScores out;
  out.pairs = pairs.size();
  if (pairs.empty()) return out;
  std::size_t text = 0, image = 0, group = 0;
  for (const ScoredPair& p : pairs) {
    PairOutcome o = JudgePair(p);
    text += o.text;
    image += o.image;
    group += o.group;
  }
  const double n = static_cast<double>(pairs.size());
  out.text_score = static_cast<double>(text) / n;
  out.image_score = static_cast<double>(image) / n;
  out.group_score = static_cast<double>(group) / n;
  return out;
}

std::vector<ScoredPair> ScorePairs(
    std::span<const PairedItem> pairs, const LogProbProvider& provider,
    const ScoringOptions& options,
    std::span<const std::array<std::optional<std::string>, 2>> images) {
  std::vector<ScoreRequest> requests;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const PairedItem& pair = pairs[k];
    std::array<std::optional<std::string>, 2> img;
    if (images.empty()) {
      img = {ReadImageBytes(pair.image_0, options.image_root),
             ReadImageBytes(pair.image_1, options.image_root)};
    } else {
      img = images[k];
    }
    for (const Reference* caption : {&pair.caption_0, &pair.caption_1}) {
      for (int i = 0; i < 2; ++i) {
        requests.push_back({options.prompt, img[i], caption->text, options.model});
      }
    }
  }
  std::vector<ScoreOutcome> outcomes = ScoreAll(provider, requests, options.parallel);
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  std::size_t next = 0;
  for (const PairedItem& pair : pairs) {
    ScoredPair sp;
    sp.pair_id = pair.pair_id;
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < 2; ++i) {
        ScoreOutcome& o = outcomes[next++];
        if (o.error) throw PartialScore(pair.pair_id, ExceptionMessage(o.error));
        sp.scores[c][i] = VisualGptScore(*o.value, options.weights);
      }
    }
    out.push_back(std::move(sp));
  }
  return out;
}

std::vector<BranchResult> EvaluateBenchmark(const Benchmark& benchmark,
                                            const LogProbProvider& provider,
                                            const ScoringOptions& options,
                                            std::vector<ScoredItem>* scored) {
  std::vector<BranchResult> results;
  auto parts = PartitionByBranch(benchmark);
  for (Branch branch : kAllBranches) {
    if (branch == Branch::kComprehensive && !benchmark.pairs.empty()) {
      auto pair_scores = ScorePairs(benchmark.pairs, provider, options);
      WinogroundScores w = ComputeWinogroundScores(pair_scores);
      BranchResult r;
      r.branch = branch;
      r.metric = "group";
      r.value = w.group_score;
      r.count = w.pairs;
      r.winoground = w;
      results.push_back(r);
      continue;
    }
    auto it = parts.find(branch);
    if (it == parts.end()) continue;
    std::vector<ScoredItem> items = ScoreItems(it->second, provider, options);
    BranchResult r;
    r.branch = branch;
    r.metric = "recall@1";
    r.value = RecallAt1(items);
    r.count = items.size();
    for (const ScoredItem& si : items) r.ties += SelectBest(si).tie ? 1 : 0;
    results.push_back(r);
    if (scored) scored->insert(scored->end(), items.begin(), items.end());
  }
  return results;
}

std::string NoiseReplacement(const Image& image, const std::filesystem::path& image_root,
                             ImageSize fallback, Seed seed) {
  ImageSize size = fallback;
  if (image.width && image.height) {
    size = {*image.width, *image.height};
  } else if (image.kind != Image::Kind::kNone) {
    if (auto bytes = ReadImageBytes(image, image_root)) {
      if (auto dims = PngDimensions(*bytes)) size = *dims;
    }
  }
  return MakeNoiseImage(size.width, size.height, seed);
}

AblationResult AblateNoise(const Benchmark& benchmark, const LogProbProvider& provider,
                           const AblationOptions& options) {
  AblationResult result;
  const ScoringOptions& scoring = options.scoring;
  auto parts = PartitionByBranch(benchmark);
  for (Branch branch : kAllBranches) {
    const std::string name(BranchName(branch));
    if (branch == Branch::kComprehensive && !benchmark.pairs.empty()) {
      std::vector<std::array<std::optional<std::string>, 2>> noise;
      for (const PairedItem& p : benchmark.pairs) {
        noise.push_back({
            NoiseReplacement(p.image_0, scoring.image_root, options.default_size,
                             DeriveSeed(options.seed, "noise/" + p.pair_id + "/0")),
            NoiseReplacement(p.image_1, scoring.image_root, options.default_size,
                             DeriveSeed(options.seed, "noise/" + p.pair_id + "/1"))});
      }
      auto original = ComputeWinogroundScores(ScorePairs(benchmark.pairs, provider, scoring));
      auto noisy = ComputeWinogroundScores(ScorePairs(benchmark.pairs, provider, scoring, noise));
      result.rows.push_back({branch, "group", original.group_score, noisy.group_score,
                             noisy.group_score - original.group_score, original.pairs});
      continue;
    }
    auto it = parts.find(branch);
    if (it == parts.end() || it->second.empty()) {
      result.warnings.push_back("branch " + name + " has no items; omitted");
      continue;
    }
    const std::vector<BenchmarkItem>& items = it->second;
    std::vector<std::optional<std::string>> noise;
    noise.reserve(items.size());
    for (const BenchmarkItem& item : items) {
      noise.emplace_back(NoiseReplacement(item.image, scoring.image_root,
                                          options.default_size,
                                          DeriveSeed(options.seed, "noise/" + item.item_id)));
    }
    const double original = RecallAt1(ScoreItems(items, provider, scoring));
    const double noisy = RecallAt1(ScoreItems(items, provider, scoring, noise));
    result.rows.push_back({branch, "recall@1", original, noisy, noisy - original, items.size()});
  }
  return result;
}

std::string_view RatingSourceName(RatingSource source) {
  return source == RatingSource::kOrigin ? "origin" : "sade";
}

std::vector<HumanRating> ParseHumanRatingsCsv(std::istream& in) {
  std::vector<HumanRating> ratings;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> f = SplitCsvLine(line);
    if (!header_seen) {
      header_seen = true;
      if (f == std::vector<std::string>{"annotator", "item_id", "branch", "source", "rating"}) {
        continue;
      }
      throw ParseError(line_no, "expected header annotator,item_id,branch,source,rating");
    }
    if (f.size() != 5) throw ParseError(line_no, "expected 5 fields");
    HumanRating r;
    r.annotator = f[0];
    r.item_id = f[1];
    r.branch = f[2];
    if (f[3] == "origin") {
      r.source = RatingSource::kOrigin;
    } else if (f[3] == "sade") {
      r.source = RatingSource::kSade;
    } else {
      throw ParseError(line_no, "source must be 'origin' or 'sade'");
    }
    std::size_t used = 0;
    try {
      r.rating = std::stoi(f[4], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != f[4].size()) throw ParseError(line_no, "rating must be an integer");
    if (r.rating < -5 || r.rating > 5) throw ParseError(line_no, "rating outside [-5, 5]");
    ratings.push_back(std::move(r));
  }
  return ratings;
}

std::vector<HumanRating> LoadHumanRatings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  return ParseHumanRatingsCsv(in);
}

std::vector<HumanEvalRow> HumanEvalAggregate(std::span<const HumanRating> ratings) {
  if (ratings.empty()) throw EmptyGroup("no human ratings to aggregate");
  std::vector<std::string> order;
  std::map<std::pair<std::string, RatingSource>, std::pair<long, std::size_t>> sums;
  for (const HumanRating& r : ratings) {
    if (r.rating < -5 || r.rating > 5) {
      throw DataError("RatingOutOfRange", "rating " + std::to_string(r.rating) +
                                              " outside [-5, 5]");
    }
    if (std::find(order.begin(), order.end(), r.branch) == order.end()) {
      order.push_back(r.branch);
    }
    auto& [sum, count] = sums[{r.branch, r.source}];
    sum += r.rating;
    ++count;
  }
  std::vector<HumanEvalRow> rows;
  for (const std::string& branch : order) {
    for (RatingSource source : {RatingSource::kOrigin, RatingSource::kSade}) {
      auto it = sums.find({branch, source});
      if (it == sums.end()) continue;
      const auto [sum, count] = it->second;
      rows.push_back({branch, source,
                      static_cast<double>(sum) / static_cast<double>(count), count});
    }
  }
  return rows;
}

}  // namespace sade
