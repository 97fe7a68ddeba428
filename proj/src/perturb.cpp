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

#include "sade/perturb.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <unordered_set>
#include <utility>

#include "sade/error.hpp"

namespace sade {
namespace {

constexpr std::array<std::pair<ShuffleStrategy, std::string_view>, 4>
    kStrategyNames = {{
        {ShuffleStrategy::kNounsAdj, "nouns-adj"},
        {ShuffleStrategy::kAllButNounsAdj, "all-but-nouns-adj"},
        {ShuffleStrategy::kWithinTrigrams, "within-trigrams"},
        {ShuffleStrategy::kTrigrams, "trigrams"},
    }};

// perm[i] is the input index placed at output position i.
std::vector<std::size_t> DrawPermutation(ShuffleStrategy strategy,
                                         std::span<const PosTag> tags,
                                         Rng& rng) {
  const std::size_t n = tags.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  switch (strategy) {
    case ShuffleStrategy::kNounsAdj:
    case ShuffleStrategy::kAllButNounsAdj: {
      const bool want_content = strategy == ShuffleStrategy::kNounsAdj;
      std::vector<std::size_t> movable;
      for (std::size_t i = 0; i < n; ++i) {
        if (IsContentTag(tags[i]) == want_content) movable.push_back(i);
      }
      std::vector<std::size_t> shuffled = movable;
      rng.Shuffle(std::span(shuffled));
      for (std::size_t i = 0; i < movable.size(); ++i) {
        perm[movable[i]] = shuffled[i];
      }
      break;
    }
    case ShuffleStrategy::kWithinTrigrams:
      for (auto [begin, end] : TrigramGroups(n)) {
        rng.Shuffle(std::span(perm).subspan(begin, end - begin));
      }
      break;
    case ShuffleStrategy::kTrigrams: {
      auto groups = TrigramGroups(n);
      std::vector<std::size_t> order(groups.size());
      std::iota(order.begin(), order.end(), 0);
      rng.Shuffle(std::span(order));
      perm.clear();
      for (std::size_t g : order) {
        for (std::size_t i = groups[g].first; i < groups[g].second; ++i) {
          perm.push_back(i);
        }
      }
      break;
    }
  }
  return perm;
}

}  // namespace

std::string_view StrategyName(ShuffleStrategy strategy) {
  for (const auto& [s, name] : kStrategyNames) {
    if (s == strategy) return name;
  }
  return "";
}

std::optional<ShuffleStrategy> ParseStrategy(std::string_view name) {
  for (const auto& [s, n] : kStrategyNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

std::vector<PosTag> TagsFor(const Reference& ref, const PosTagger& tagger) {
  if (ref.pos_tags) return *ref.pos_tags;
  return tagger.Tag(ref.tokens);
}

std::vector<std::pair<std::size_t, std::size_t>> TrigramGroups(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t begin = 0; begin < n; begin += 3) {
    groups.emplace_back(begin, std::min(begin + 3, n));
  }
  return groups;
}

std::vector<std::string> ReorderTrigrams(std::span<const std::string> tokens,
                                         std::span<const std::size_t> order) {
  auto groups = TrigramGroups(tokens.size());
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t g : order) {
    for (std::size_t i = groups.at(g).first; i < groups[g].second; ++i) {
      out.push_back(tokens[i]);
    }
  }
  return out;
}

PerturbResult Perturb(const Reference& ref, ShuffleStrategy strategy, Seed seed,
                      const PosTagger& tagger) {
  if (ref.tokens.empty()) throw UntaggableReference(ref.id);
  const std::vector<PosTag> tags = TagsFor(ref, tagger);

  Rng rng(seed);
  std::vector<std::size_t> perm;
  std::vector<std::string> tokens;
  bool identity = true;
  for (int attempt = 0; attempt < kMaxIdentityResamples && identity; ++attempt) {
    perm = DrawPermutation(strategy, tags, rng);
    tokens.clear();
    for (std::size_t i : perm) tokens.push_back(ref.tokens[i]);
    identity = tokens == ref.tokens;
  }

  PerturbResult result;
  result.identity = identity;
  Reference& out = result.reference;
  out.id = ref.id + "~" + std::string(StrategyName(strategy));
  out.text = JoinTokens(tokens);
  out.tokens = std::move(tokens);
  if (ref.pos_tags) {
    std::vector<PosTag> moved;
    for (std::size_t i : perm) moved.push_back(tags[i]);
    out.pos_tags = std::move(moved);
  }
  out.polarity = Polarity::kNegative;
  return result;
}

Reference ContentOnly(const Reference& ref, const PosTagger& tagger) {
  const std::vector<PosTag> tags = TagsFor(ref, tagger);
  Reference out;
  out.id = ref.id;
  out.polarity = ref.polarity;
  std::vector<PosTag> kept;
  for (std::size_t i = 0; i < ref.tokens.size(); ++i) {
    if (IsContentTag(tags[i])) {
      out.tokens.push_back(ref.tokens[i]);
      kept.push_back(tags[i]);
    }
  }
  if (out.tokens.empty()) throw EmptyContent(ref.id);
  out.text = JoinTokens(out.tokens);
  out.pos_tags = std::move(kept);
  return out;
}

std::vector<Reference> SampleRandomNegatives(std::span<const Reference> pool,
                                             std::size_t k, Seed seed,
                                             const std::set<std::string>& exclude) {
  std::vector<std::size_t> eligible;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (exclude.contains(pool[i].id)) continue;
    if (!seen.insert(pool[i].id).second) continue;
    eligible.push_back(i);
  }
  if (eligible.size() < k) throw InsufficientPool(k, eligible.size());

  Rng rng(seed);
  std::vector<Reference> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.UniformIndex(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
    Reference ref = pool[eligible[i]];
    ref.polarity = Polarity::kNegative;
    out.push_back(std::move(ref));
  }
  return out;
}

CaseSuite BuildCaseSuite(std::span<const BenchmarkItem> items,
                         std::span<const Reference> pool, Seed seed,
                         const PosTagger& tagger) {
  CaseSuite suite;
  for (const BenchmarkItem& item : items) {
    if (item.positives.size() != 1) {
      throw InvalidBenchmark("item '" + item.item_id +
                             "' must have exactly one positive");
    }
    const Reference& positive = item.positives.front();
    const std::set<std::string> exclude = {positive.id};

    BenchmarkItem case1 = item;
    case1.negatives.clear();
    for (ShuffleStrategy s : {ShuffleStrategy::kNounsAdj, ShuffleStrategy::kTrigrams}) {
      PerturbResult r = Perturb(
          positive, s,
          DeriveSeed(seed, "case1/" + std::string(StrategyName(s)) + "/" + item.item_id),
          tagger);
      suite.identity_shuffles += r.identity ? 1 : 0;
      case1.negatives.push_back(std::move(r.reference));
    }
    suite.case1.items.push_back(std::move(case1));

    BenchmarkItem case2 = item;
    case2.negatives = SampleRandomNegatives(
        pool, 2, DeriveSeed(seed, "case2/" + item.item_id), exclude);
    suite.case2.items.push_back(std::move(case2));

    Reference content;
    try {
      content = ContentOnly(positive, tagger);
    } catch (const EmptyContent&) {
      ++suite.dropped_from_case3;
      continue;
    }
    BenchmarkItem case3 = item;
    case3.positives = {std::move(content)};
    case3.negatives = SampleRandomNegatives(
        pool, 2, DeriveSeed(seed, "case3/" + item.item_id), exclude);
    suite.case3.items.push_back(std::move(case3));
  }

  int index = 1;
  for (Benchmark* b : {&suite.case1, &suite.case2, &suite.case3}) {
    b->metadata.name = "case" + std::to_string(index++);
    b->metadata.parameters = {{"seed", seed},
                              {"input_items", items.size()},
                              {"pool_size", pool.size()}};
  }
  suite.case1.metadata.parameters["identity_shuffles"] = suite.identity_shuffles;
  suite.case3.metadata.parameters["dropped_empty_content"] = suite.dropped_from_case3;
  return suite;
}

}  // namespace sade
