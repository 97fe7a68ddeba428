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

#ifndef SADE_EVAL_HPP_
#define SADE_EVAL_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sade/corpus.hpp"
#include "sade/debias.hpp"
#include "sade/noise_image.hpp"
#include "sade/provider.hpp"
#include "sade/random.hpp"
#include "sade/scorer.hpp"

namespace sade {

// Instruction text conditioning every VisualGPTScore request unless
// overridden; recorded in report metadata.
inline constexpr std::string_view kDefaultPrompt =
    "Describe the image in one sentence.";

struct Candidate {
  std::string id;
  Polarity polarity = Polarity::kNegative;
};

struct ScoredItem {
  std::string item_id;
  Branch branch = Branch::kRelation;
  std::vector<Candidate> candidates;  // positives first, in stored order
  std::vector<double> scores;         // VisualGPTScore per candidate
};

struct Selection {
  std::size_t index = 0;
  bool tie = false;  // another candidate shares the maximum
};

// Argmax with ties going to the lowest index.
Selection SelectBest(const ScoredItem& item);
bool IsHit(const ScoredItem& item);

// Fraction of items whose selected candidate is the positive.
double RecallAt1(std::span<const ScoredItem> items);

// Per-item max-abs rescaling of the raw scores, for display.
std::vector<double> NormalizedItemScores(const ScoredItem& item);

struct ScoringOptions {
  std::string prompt{kDefaultPrompt};
  std::string model;
  std::size_t parallel = 1;
  WeightScheme weights = WeightScheme::kUniform;
  std::filesystem::path image_root;  // base for relative image paths
};

// One VisualGPTScore per candidate, all under the same prompt and image.
// `image` overrides the item's own image. Throws PartialScore.
ScoredItem ScoreItem(const BenchmarkItem& item, const LogProbProvider& provider,
                     const ScoringOptions& options,
                     const std::optional<std::string>& image = std::nullopt);

// Batched ScoreItem; `images`, when non-empty, is aligned with `items`.
std::vector<ScoredItem> ScoreItems(std::span<const BenchmarkItem> items,
                                   const LogProbProvider& provider,
                                   const ScoringOptions& options,
                                   std::span<const std::optional<std::string>> images = {});

// scores[c][i] = s(caption c, image i).
struct ScoredPair {
  std::string pair_id;
  std::array<std::array<std::optional<double>, 2>, 2> scores;
};

struct WinogroundScores {
  double text_score = 0.0;
  double image_score = 0.0;
  double group_score = 0.0;
  std::size_t pairs = 0;
};

struct PairOutcome {
  bool text = false;
  bool image = false;
  bool group = false;
};

// Strict pairwise inequalities; ties fail. Throws MissingCell.
PairOutcome JudgePair(const ScoredPair& pair);
WinogroundScores ComputeWinogroundScores(std::span<const ScoredPair> pairs);

std::vector<ScoredPair> ScorePairs(
    std::span<const PairedItem> pairs, const LogProbProvider& provider,
    const ScoringOptions& options,
    std::span<const std::array<std::optional<std::string>, 2>> images = {});

struct BranchResult {
  Branch branch = Branch::kRelation;
  std::string metric;  // "recall@1" or "group"
  double value = 0.0;
  std::size_t count = 0;
  std::size_t ties = 0;
  std::optional<WinogroundScores> winoground;
};

// Scores every item and pair; one result per branch present, column order.
std::vector<BranchResult> EvaluateBenchmark(const Benchmark& benchmark,
                                            const LogProbProvider& provider,
                                            const ScoringOptions& options,
                                            std::vector<ScoredItem>* scored = nullptr);

struct AblationRow {
  Branch branch = Branch::kRelation;
  std::string metric;
  double original_acc = 0.0;
  double noise_acc = 0.0;
  double delta = 0.0;  // noise - original
  std::size_t count = 0;
};

struct AblationOptions {
  ScoringOptions scoring;
  Seed seed = 0;
  ImageSize default_size{224, 224};
};

struct AblationResult {
  std::vector<AblationRow> rows;
  std::vector<std::string> warnings;
};

// Re-runs the branch metric with every image replaced by seeded noise of
// the same size. Branches without items are omitted with a warning.
AblationResult AblateNoise(const Benchmark& benchmark, const LogProbProvider& provider,
                           const AblationOptions& options);

// Noise replacement for an image: same dimensions when known.
std::string NoiseReplacement(const Image& image, const std::filesystem::path& image_root,
                             ImageSize fallback, Seed seed);

enum class RatingSource { kOrigin, kSade };

std::string_view RatingSourceName(RatingSource source);

struct HumanRating {
  std::string annotator;
  std::string item_id;
  std::string branch;  // free-form label, e.g. "Relation/VL-CheckList"
  RatingSource source = RatingSource::kOrigin;
  int rating = 0;  // [-5, 5]
};

// CSV with header `annotator,item_id,branch,source,rating`.
std::vector<HumanRating> ParseHumanRatingsCsv(std::istream& in);
std::vector<HumanRating> LoadHumanRatings(const std::filesystem::path& path);

struct HumanEvalRow {
  std::string branch;
  RatingSource source = RatingSource::kOrigin;
  double mean = 0.0;
  std::size_t count = 0;
};

// Mean rating per (branch, source), across annotators. Branch labels keep
// their first-appearance order. Throws EmptyGroup.
std::vector<HumanEvalRow> HumanEvalAggregate(std::span<const HumanRating> ratings);

struct EvalReport {
  std::vector<BranchResult> branches;
  std::vector<AblationRow> ablation;
  std::vector<HumanEvalRow> human;
  std::vector<BiasReport> bias;
  std::string provider;
  std::string model;
  std::string prompt;
  Seed seed = 0;
};

}  // namespace sade

#endif  // SADE_EVAL_HPP_
