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

#ifndef SADE_PERTURB_HPP_
#define SADE_PERTURB_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sade/corpus.hpp"
#include "sade/pos_tag.hpp"
#include "sade/random.hpp"

namespace sade {

enum class ShuffleStrategy {
  kNounsAdj,        // permute NOUN/ADJ positions only
  kAllButNounsAdj,  // permute every other position
  kWithinTrigrams,  // permute inside consecutive groups of three
  kTrigrams,        // permute the order of the groups
};

std::string_view StrategyName(ShuffleStrategy strategy);
std::optional<ShuffleStrategy> ParseStrategy(std::string_view name);

inline constexpr int kMaxIdentityResamples = 16;

// Carried tags win over the tagger.
std::vector<PosTag> TagsFor(const Reference& ref, const PosTagger& tagger);

struct PerturbResult {
  Reference reference;
  // Set when no non-identity arrangement was found within the resample cap.
  bool identity = false;
};

// Shuffled negative of `ref`. The output id is `<id>~<strategy>`.
// Throws UntaggableReference for a reference without tokens.
PerturbResult Perturb(const Reference& ref, ShuffleStrategy strategy, Seed seed,
                      const PosTagger& tagger = PosTagger::Default());

// Consecutive groups of three over n tokens: [begin, end) index pairs.
std::vector<std::pair<std::size_t, std::size_t>> TrigramGroups(std::size_t n);

// Concatenates trigram groups in the given order. `order` must be a
// permutation of the group indices.
std::vector<std::string> ReorderTrigrams(std::span<const std::string> tokens,
                                         std::span<const std::size_t> order);

// Keeps only NOUN/ADJ tokens in order; the result carries its tags so the
// operation is idempotent. Throws EmptyContent.
Reference ContentOnly(const Reference& ref,
                      const PosTagger& tagger = PosTagger::Default());

// k distinct references from `pool` whose ids are not in `exclude`, drawn
// uniformly without replacement and marked negative. Throws InsufficientPool.
std::vector<Reference> SampleRandomNegatives(std::span<const Reference> pool,
                                             std::size_t k, Seed seed,
                                             const std::set<std::string>& exclude);

struct CaseSuite {
  Benchmark case1;  // positive + NounsAdj and Trigrams shuffles
  Benchmark case2;  // positive + two pool sentences
  Benchmark case3;  // content-only positive + two pool sentences
  std::size_t dropped_from_case3 = 0;
  std::size_t identity_shuffles = 0;
};

CaseSuite BuildCaseSuite(std::span<const BenchmarkItem> items,
                         std::span<const Reference> pool, Seed seed,
                         const PosTagger& tagger = PosTagger::Default());

}  // namespace sade

#endif  // SADE_PERTURB_HPP_
