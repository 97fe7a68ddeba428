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

#ifndef SADE_CORPUS_HPP_
#define SADE_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sade/pos_tag.hpp"
#include "sade/random.hpp"

namespace sade {

enum class Polarity { kPositive, kNegative };

std::string_view PolarityName(Polarity polarity);

enum class Branch { kComprehensive, kRelation, kAttribute, kAtomic, kNegate,
                    kContent };

// Report column order.
inline constexpr std::array<Branch, 6> kAllBranches = {
    Branch::kComprehensive, Branch::kRelation, Branch::kAttribute,
    Branch::kAtomic,        Branch::kNegate,   Branch::kContent};

std::string_view BranchName(Branch branch);
std::optional<Branch> ParseBranch(std::string_view name);

struct TaxonomyBranch {
  Branch name = Branch::kRelation;
  std::string source;  // free-form dataset label

  bool operator==(const TaxonomyBranch&) const = default;
};

// Images are opaque: a path or an inline base64 PNG. Width and height are
// optional hints used when generating same-sized noise replacements.
struct Image {
  enum class Kind { kNone, kPath, kInlinePng };

  Kind kind = Kind::kNone;
  std::string value;  // path, or base64 text for kInlinePng
  std::optional<int> width;
  std::optional<int> height;

  static Image None() { return {}; }
  static Image Path(std::string path) {
    return {Kind::kPath, std::move(path), std::nullopt, std::nullopt};
  }
  static Image InlinePng(std::string_view png_bytes);

  bool operator==(const Image&) const = default;
};

struct Reference {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::optional<std::vector<PosTag>> pos_tags;
  Polarity polarity = Polarity::kPositive;

  bool operator==(const Reference&) const = default;
};

// Builds a reference with canonical tokens and no tags.
Reference MakeReference(std::string id, std::string text, Polarity polarity);

struct BenchmarkItem {
  std::string item_id;
  Image image;
  std::vector<Reference> positives;
  std::vector<Reference> negatives;
  TaxonomyBranch branch;

  std::size_t candidate_count() const {
    return positives.size() + negatives.size();
  }
  bool operator==(const BenchmarkItem&) const = default;
};

// Winoground-style item: two images, two captions, scored pairwise.
struct PairedItem {
  std::string pair_id;
  std::string source;
  Image image_0;
  Image image_1;
  Reference caption_0;
  Reference caption_1;

  bool operator==(const PairedItem&) const = default;
};

struct BenchmarkMetadata {
  std::string name;
  std::string version;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();

  bool operator==(const BenchmarkMetadata&) const = default;
};

struct Benchmark {
  std::vector<BenchmarkItem> items;
  std::vector<PairedItem> pairs;
  BenchmarkMetadata metadata;

  bool operator==(const Benchmark&) const = default;
};

struct BranchCounts {
  std::size_t items = 0;
  std::size_t images = 0;
  std::size_t references = 0;
};

// Pairs count toward Comprehensive with two images and two captions each.
std::map<Branch, BranchCounts> CountByBranch(const Benchmark& benchmark);

// Canonical tokenization: trailing . , ! ? ; : are split off each
// whitespace-delimited word as separate tokens.
std::vector<std::string> Tokenize(std::string_view text);
std::string JoinTokens(std::span<const std::string> tokens);

enum class PositivePolicy {
  kStrict,        // more than one positive is a validation failure
  kFirst,         // keep the first positive
  kSeededRandom,  // keep one positive chosen from a per-item seed
};

struct LoadOptions {
  PositivePolicy positive_policy = PositivePolicy::kStrict;
  Seed seed = 0;
  // When false, invariant violations are left for Validate() to report.
  bool enforce_validation = true;
  // Caption-only sources (Content inputs) carry positives alone.
  bool allow_missing_negatives = false;
};

// Reads line-delimited benchmark records (items and pairs may be mixed).
// Throws ParseError, DuplicateId, MissingPositive, and InvalidBenchmark.
Benchmark LoadBenchmark(const std::filesystem::path& path,
                        const LoadOptions& options = {});
Benchmark ParseBenchmark(std::istream& in, const LoadOptions& options = {});

std::string SerializeBenchmark(const Benchmark& benchmark);
void SaveBenchmark(const Benchmark& benchmark,
                   const std::filesystem::path& path);

// Sidecar document: name, version, parameters, per-branch counts.
nlohmann::ordered_json MetadataToJson(const Benchmark& benchmark);
void SaveMetadata(const Benchmark& benchmark,
                  const std::filesystem::path& path);
BenchmarkMetadata LoadMetadata(const std::filesystem::path& path);

struct Violation {
  std::string where;  // item, pair or reference id
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport Validate(const Benchmark& benchmark);

std::map<Branch, std::vector<BenchmarkItem>> PartitionByBranch(
    const Benchmark& benchmark);

// Raw PNG bytes of an image, or nullopt for Kind::kNone. Relative paths are
// resolved against base_dir.
std::optional<std::string> ReadImageBytes(const Image& image,
                                          const std::filesystem::path& base_dir);

// Converters shared by the serializers of other modules.
nlohmann::ordered_json ImageToJson(const Image& image);
Image ImageFromJson(const nlohmann::json& value, std::size_t line);

}  // namespace sade

#endif  // SADE_CORPUS_HPP_
