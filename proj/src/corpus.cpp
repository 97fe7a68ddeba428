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

#include "sade/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "sade/encoding.hpp"
#include "sade/error.hpp"

namespace sade {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kNoNegative = "no negative reference";

constexpr std::array<std::string_view, 6> kBranchNames = {
    "Comprehensive", "Relation", "Attribute", "Atomic", "Negate", "Content"};

bool IsDetachable(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

std::string StripWhitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

const json& Require(const json& record, const char* key, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw ParseError(line, std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string RequireString(const json& record, const char* key,
                          std::size_t line) {
  const json& value = Require(record, key, line);
  if (!value.is_string()) {
    throw ParseError(line, std::string("field '") + key + "' must be a string");
  }
  return value.get<std::string>();
}

std::vector<std::string> StringList(const json& value, const char* key,
                                    std::size_t line) {
  if (!value.is_array()) {
    throw ParseError(line, std::string("field '") + key + "' must be a list");
  }
  std::vector<std::string> out;
  for (const json& v : value) {
    if (!v.is_string()) {
      throw ParseError(line, std::string("field '") + key +
                                 "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

Reference ReferenceFromJson(const json& value, std::size_t line) {
  if (!value.is_object()) throw ParseError(line, "reference must be an object");
  Reference ref;
  ref.id = RequireString(value, "id", line);
  ref.text = RequireString(value, "text", line);
  std::string polarity = RequireString(value, "polarity", line);
  if (polarity == "positive") {
    ref.polarity = Polarity::kPositive;
  } else if (polarity == "negative") {
    ref.polarity = Polarity::kNegative;
  } else {
    throw ParseError(line, "polarity must be 'positive' or 'negative'");
  }
  if (auto it = value.find("tokens"); it != value.end() && !it->is_null()) {
    ref.tokens = StringList(*it, "tokens", line);
  } else {
    ref.tokens = Tokenize(ref.text);
  }
  if (auto it = value.find("pos_tags"); it != value.end() && !it->is_null()) {
    std::vector<PosTag> tags;
    for (const std::string& name : StringList(*it, "pos_tags", line)) {
      auto tag = ParsePosTag(name);
      if (!tag) throw ParseError(line, "unknown POS tag '" + name + "'");
      tags.push_back(*tag);
    }
    ref.pos_tags = std::move(tags);
  }
  return ref;
}

ordered_json ReferenceToJson(const Reference& ref) {
  ordered_json out;
  out["id"] = ref.id;
  out["text"] = ref.text;
  out["polarity"] = PolarityName(ref.polarity);
  out["tokens"] = ref.tokens;
  if (ref.pos_tags) {
    ordered_json tags = ordered_json::array();
    for (PosTag t : *ref.pos_tags) tags.push_back(PosTagName(t));
    out["pos_tags"] = std::move(tags);
  }
  return out;
}

BenchmarkItem ItemFromJson(const json& record, std::size_t line) {
  BenchmarkItem item;
  item.item_id = RequireString(record, "item_id", line);
  std::string branch = RequireString(record, "branch", line);
  auto parsed = ParseBranch(branch);
  if (!parsed) throw ParseError(line, "unknown branch '" + branch + "'");
  item.branch.name = *parsed;
  if (auto it = record.find("source"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line, "field 'source' must be a string");
    item.branch.source = it->get<std::string>();
  }
  if (auto it = record.find("image"); it != record.end()) {
    item.image = ImageFromJson(*it, line);
  }
  const json& refs = Require(record, "references", line);
  if (!refs.is_array()) throw ParseError(line, "field 'references' must be a list");
  std::set<std::string> seen;
  for (const json& r : refs) {
    Reference ref = ReferenceFromJson(r, line);
    if (!seen.insert(ref.id).second) {
      throw DuplicateId(item.item_id + "/" + ref.id);
    }
    if (ref.polarity == Polarity::kPositive) {
      item.positives.push_back(std::move(ref));
    } else {
      item.negatives.push_back(std::move(ref));
    }
  }
  if (item.positives.empty()) throw MissingPositive(item.item_id);
  return item;
}

PairedItem PairFromJson(const json& record, std::size_t line) {
  PairedItem pair;
  pair.pair_id = RequireString(record, "pair_id", line);
  if (auto it = record.find("source"); it != record.end() && it->is_string()) {
    pair.source = it->get<std::string>();
  }
  pair.image_0 = ImageFromJson(Require(record, "image_0", line), line);
  pair.image_1 = ImageFromJson(Require(record, "image_1", line), line);
  pair.caption_0 = MakeReference(pair.pair_id + "/c0",
                                 RequireString(record, "caption_0", line),
                                 Polarity::kPositive);
  pair.caption_1 = MakeReference(pair.pair_id + "/c1",
                                 RequireString(record, "caption_1", line),
                                 Polarity::kPositive);
  return pair;
}

void ApplyPositivePolicy(Benchmark& benchmark, const LoadOptions& options) {
  if (options.positive_policy == PositivePolicy::kStrict) return;
  for (BenchmarkItem& item : benchmark.items) {
    if (item.positives.size() <= 1) continue;
    std::size_t keep = 0;
    if (options.positive_policy == PositivePolicy::kSeededRandom) {
      Rng rng(DeriveSeed(options.seed, "positive:" + item.item_id));
      keep = rng.UniformIndex(item.positives.size());
    }
    Reference chosen = std::move(item.positives[keep]);
    item.positives.clear();
    item.positives.push_back(std::move(chosen));
  }
}

void CheckReference(const Reference& ref, const std::string& owner,
                    std::vector<Violation>& out) {
  const std::string where = owner + "/" + ref.id;
  if (!ref.text.empty() && ref.tokens.empty()) {
    out.push_back({where, "tokens", "empty token list for non-empty text"});
  } else if (StripWhitespace(JoinTokens(ref.tokens)) != StripWhitespace(ref.text)) {
    out.push_back({where, "tokens", "tokens do not reproduce text"});
  }
  if (ref.pos_tags && ref.pos_tags->size() != ref.tokens.size()) {
    out.push_back({where, "pos_tags",
                   "length " + std::to_string(ref.pos_tags->size()) +
                       " != token count " + std::to_string(ref.tokens.size())});
  }
}

}  // namespace

std::string_view PolarityName(Polarity polarity) {
  return polarity == Polarity::kPositive ? "positive" : "negative";
}

std::string_view BranchName(Branch branch) {
  return kBranchNames[static_cast<std::size_t>(branch)];
}

std::optional<Branch> ParseBranch(std::string_view name) {
  for (std::size_t i = 0; i < kBranchNames.size(); ++i) {
    if (kBranchNames[i] == name) return static_cast<Branch>(i);
  }
  return std::nullopt;
}

Image Image::InlinePng(std::string_view png_bytes) {
  return {Kind::kInlinePng, Base64Encode(png_bytes), std::nullopt, std::nullopt};
}

Reference MakeReference(std::string id, std::string text, Polarity polarity) {
  Reference ref;
  ref.id = std::move(id);
  ref.tokens = Tokenize(text);
  ref.text = std::move(text);
  ref.polarity = polarity;
  return ref;
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    std::string_view word = text.substr(start, i - start);
    std::size_t core = word.size();
    while (core > 0 && IsDetachable(word[core - 1])) --core;
    if (core > 0) tokens.emplace_back(word.substr(0, core));
    for (std::size_t k = core; k < word.size(); ++k) {
      tokens.emplace_back(1, word[k]);
    }
  }
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

ordered_json ImageToJson(const Image& image) {
  if (image.kind == Image::Kind::kNone) return nullptr;
  ordered_json out;
  if (image.kind == Image::Kind::kPath) {
    out["path"] = image.value;
  } else {
    out["b64_png"] = image.value;
  }
  if (image.width) out["width"] = *image.width;
  if (image.height) out["height"] = *image.height;
  return out;
}

Image ImageFromJson(const json& value, std::size_t line) {
  Image image;
  if (value.is_null()) return image;
  if (!value.is_object()) throw ParseError(line, "image must be an object or null");
  if (auto it = value.find("path"); it != value.end()) {
    if (!it->is_string()) throw ParseError(line, "image path must be a string");
    image.kind = Image::Kind::kPath;
    image.value = it->get<std::string>();
  } else if (auto b64 = value.find("b64_png"); b64 != value.end()) {
    if (!b64->is_string()) throw ParseError(line, "b64_png must be a string");
    image.kind = Image::Kind::kInlinePng;
    image.value = b64->get<std::string>();
  } else {
    throw ParseError(line, "image needs 'path' or 'b64_png'");
  }
  for (const char* key : {"width", "height"}) {
    auto it = value.find(key);
    if (it == value.end()) continue;
    if (!it->is_number_integer() || it->get<int>() < 1) {
      throw ParseError(line, std::string("image ") + key + " must be a positive integer");
    }
    (std::string_view(key) == "width" ? image.width : image.height) = it->get<int>();
  }
  return image;
}

std::map<Branch, BranchCounts> CountByBranch(const Benchmark& benchmark) {
  std::map<Branch, BranchCounts> counts;
  for (const BenchmarkItem& item : benchmark.items) {
    BranchCounts& c = counts[item.branch.name];
    ++c.items;
    if (item.image.kind != Image::Kind::kNone) ++c.images;
    c.references += item.candidate_count();
  }
  if (!benchmark.pairs.empty()) {
    BranchCounts& c = counts[Branch::kComprehensive];
    c.items += benchmark.pairs.size();
    c.images += 2 * benchmark.pairs.size();
    c.references += 2 * benchmark.pairs.size();
  }
  return counts;
}

Benchmark ParseBenchmark(std::istream& in, const LoadOptions& options) {
  Benchmark benchmark;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](char c) {
          return std::isspace(static_cast<unsigned char>(c));
        })) {
      continue;
    }
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "record must be an object");
    if (record.contains("pair_id")) {
      PairedItem pair = PairFromJson(record, line_no);
      if (!ids.insert(pair.pair_id).second) throw DuplicateId(pair.pair_id);
      benchmark.pairs.push_back(std::move(pair));
    } else {
      BenchmarkItem item = ItemFromJson(record, line_no);
      if (!ids.insert(item.item_id).second) throw DuplicateId(item.item_id);
      benchmark.items.push_back(std::move(item));
    }
  }
  ApplyPositivePolicy(benchmark, options);
  if (options.enforce_validation) {
    ValidationReport report = Validate(benchmark);
    if (options.allow_missing_negatives) {
      std::erase_if(report.violations, [](const Violation& v) {
        return v.message == kNoNegative;
      });
    }
    if (!report.ok()) {
      const Violation& v = report.violations.front();
      throw InvalidBenchmark(std::to_string(report.violations.size()) +
                             " violation(s); first: " + v.where + " [" +
                             v.field + "] " + v.message);
    }
  }
  return benchmark;
}

Benchmark LoadBenchmark(const std::filesystem::path& path,
                        const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  Benchmark benchmark = ParseBenchmark(in, options);
  benchmark.metadata.name = path.stem().string();
  return benchmark;
}

std::string SerializeBenchmark(const Benchmark& benchmark) {
  std::string out;
  for (const BenchmarkItem& item : benchmark.items) {
    ordered_json record;
    record["item_id"] = item.item_id;
    record["branch"] = BranchName(item.branch.name);
    record["source"] = item.branch.source;
    record["image"] = ImageToJson(item.image);
    ordered_json refs = ordered_json::array();
    for (const Reference& r : item.positives) refs.push_back(ReferenceToJson(r));
    for (const Reference& r : item.negatives) refs.push_back(ReferenceToJson(r));
    record["references"] = std::move(refs);
    out += record.dump();
    out += '\n';
  }
  for (const PairedItem& pair : benchmark.pairs) {
    ordered_json record;
    record["pair_id"] = pair.pair_id;
    record["source"] = pair.source;
    record["image_0"] = ImageToJson(pair.image_0);
    record["image_1"] = ImageToJson(pair.image_1);
    record["caption_0"] = pair.caption_0.text;
    record["caption_1"] = pair.caption_1.text;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void SaveBenchmark(const Benchmark& benchmark,
                   const std::filesystem::path& path) {
  WriteFile(path, SerializeBenchmark(benchmark));
}

ordered_json MetadataToJson(const Benchmark& benchmark) {
  ordered_json out;
  out["name"] = benchmark.metadata.name;
  out["version"] = benchmark.metadata.version;
  out["parameters"] = benchmark.metadata.parameters;
  ordered_json counts = ordered_json::object();
  for (const auto& [branch, c] : CountByBranch(benchmark)) {
    counts[std::string(BranchName(branch))] = {
        {"items", c.items}, {"images", c.images}, {"references", c.references}};
  }
  out["counts"] = std::move(counts);
  return out;
}

void SaveMetadata(const Benchmark& benchmark,
                  const std::filesystem::path& path) {
  WriteFile(path, MetadataToJson(benchmark).dump(2) + "\n");
}

BenchmarkMetadata LoadMetadata(const std::filesystem::path& path) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(ReadFile(path));
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  BenchmarkMetadata meta;
  meta.name = doc.value("name", "");
  meta.version = doc.value("version", "");
  if (doc.contains("parameters")) meta.parameters = doc["parameters"];
  return meta;
}

ValidationReport Validate(const Benchmark& benchmark) {
  ValidationReport report;
  auto& out = report.violations;
  std::unordered_set<std::string> ids;
  for (const BenchmarkItem& item : benchmark.items) {
    if (!ids.insert(item.item_id).second) {
      out.push_back({item.item_id, "item_id", "duplicate id"});
    }
    if (item.positives.size() != 1) {
      out.push_back({item.item_id, "references",
                     "expected exactly one positive, found " +
                         std::to_string(item.positives.size())});
    }
    if (item.negatives.empty()) {
      out.push_back({item.item_id, "references", std::string(kNoNegative)});
    }
    std::set<std::string> ref_ids;
    for (const auto* list : {&item.positives, &item.negatives}) {
      const Polarity expected =
          list == &item.positives ? Polarity::kPositive : Polarity::kNegative;
      for (const Reference& ref : *list) {
        if (!ref_ids.insert(ref.id).second) {
          out.push_back({item.item_id + "/" + ref.id, "id",
                         "duplicate reference id"});
        }
        if (ref.polarity != expected) {
          out.push_back({item.item_id + "/" + ref.id, "polarity",
                         "stored under the wrong polarity"});
        }
        CheckReference(ref, item.item_id, out);
      }
    }
  }
  for (const PairedItem& pair : benchmark.pairs) {
    if (!ids.insert(pair.pair_id).second) {
      out.push_back({pair.pair_id, "pair_id", "duplicate id"});
    }
    if (pair.caption_0.text == pair.caption_1.text) {
      out.push_back({pair.pair_id, "caption_1", "captions are identical"});
    }
    CheckReference(pair.caption_0, pair.pair_id, out);
    CheckReference(pair.caption_1, pair.pair_id, out);
  }
  return report;
}

std::map<Branch, std::vector<BenchmarkItem>> PartitionByBranch(
    const Benchmark& benchmark) {
  std::map<Branch, std::vector<BenchmarkItem>> parts;
  for (const BenchmarkItem& item : benchmark.items) {
    parts[item.branch.name].push_back(item);
  }
  return parts;
}

std::optional<std::string> ReadImageBytes(const Image& image,
                                          const std::filesystem::path& base_dir) {
  switch (image.kind) {
    case Image::Kind::kNone:
      return std::nullopt;
    case Image::Kind::kInlinePng:
      return Base64Decode(image.value);
    case Image::Kind::kPath: {
      std::filesystem::path p(image.value);
      if (p.is_relative()) p = base_dir / p;
      return ReadFile(p);
    }
  }
  return std::nullopt;
}

}  // namespace sade
