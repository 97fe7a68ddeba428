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

#include "sade/pos_tag.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

#include "sade/error.hpp"

namespace sade {
namespace internal {
extern const std::string_view kBundledLexicon;
}  // namespace internal

namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 11> kTagNames = {{
    {PosTag::kNoun, "NOUN"}, {PosTag::kAdj, "ADJ"},   {PosTag::kVerb, "VERB"},
    {PosTag::kAdv, "ADV"},   {PosTag::kDet, "DET"},   {PosTag::kPron, "PRON"},
    {PosTag::kAdp, "ADP"},   {PosTag::kConj, "CONJ"}, {PosTag::kNum, "NUM"},
    {PosTag::kPart, "PART"}, {PosTag::kOther, "OTHER"},
}};

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool AllOf(std::string_view s, int (*pred)(int)) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [pred](char c) {
    return pred(static_cast<unsigned char>(c)) != 0;
  });
}

}  // namespace

std::string_view PosTagName(PosTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "OTHER";
}

std::optional<PosTag> ParsePosTag(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

PosTagger PosTagger::FromLexiconText(std::string_view text) {
  PosTagger tagger;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError(line_no, "lexicon line lacks a TAB separator");
    }
    auto tag = ParsePosTag(line.substr(tab + 1));
    if (!tag) throw ParseError(line_no, "unknown tag in lexicon");
    tagger.lexicon_[Lowercase(line.substr(0, tab))] = *tag;
  }
  return tagger;
}

PosTagger PosTagger::FromLexiconFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromLexiconText(buffer.str());
}

const PosTagger& PosTagger::Default() {
  static const PosTagger tagger = FromLexiconText(internal::kBundledLexicon);
  return tagger;
}

std::optional<PosTag> PosTagger::Lookup(std::string_view token) const {
  auto it = lexicon_.find(Lowercase(token));
  if (it == lexicon_.end()) return std::nullopt;
  return it->second;
}

std::vector<PosTag> PosTagger::Tag(std::span<const std::string> tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (auto known = Lookup(token)) {
      tags.push_back(*known);
      continue;
    }
    const std::string word = Lowercase(token);
    PosTag tag = PosTag::kNoun;
    if (AllOf(word, std::ispunct)) {
      tag = PosTag::kOther;
    } else if (AllOf(word, std::isdigit)) {
      tag = PosTag::kNum;
    } else if (EndsWith(word, "ly")) {
      tag = PosTag::kAdv;
    } else if (EndsWith(word, "ing") || EndsWith(word, "ed")) {
      // "the running water" vs. "a dog running".
      bool after_det = !tags.empty() && tags.back() == PosTag::kDet;
      tag = after_det ? PosTag::kAdj : PosTag::kVerb;
    }
    // Plural "-s" and everything else fall through to NOUN.
    tags.push_back(tag);
  }
  return tags;
}

}  // namespace sade
