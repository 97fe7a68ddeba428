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

#ifndef SADE_POS_TAG_HPP_
#define SADE_POS_TAG_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sade {

enum class PosTag { kNoun, kAdj, kVerb, kAdv, kDet, kPron, kAdp, kConj, kNum,
                    kPart, kOther };

std::string_view PosTagName(PosTag tag);
std::optional<PosTag> ParsePosTag(std::string_view name);

// Nouns and adjectives carry the content of a caption.
inline bool IsContentTag(PosTag tag) {
  return tag == PosTag::kNoun || tag == PosTag::kAdj;
}

// Rule-based tagger: closed lexicon lookup, then suffix heuristics for
// unknown words, then NOUN.
class PosTagger {
 public:
  // Parses `token<TAB>TAG` lines. Blank lines and lines starting with '#'
  // are skipped.
  static PosTagger FromLexiconText(std::string_view text);
  static PosTagger FromLexiconFile(const std::string& path);

  // Tagger over the lexicon compiled into the library. Built once.
  static const PosTagger& Default();

  std::vector<PosTag> Tag(std::span<const std::string> tokens) const;

  std::optional<PosTag> Lookup(std::string_view token) const;
  std::size_t lexicon_size() const { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, PosTag> lexicon_;
};

}  // namespace sade

#endif  // SADE_POS_TAG_HPP_
