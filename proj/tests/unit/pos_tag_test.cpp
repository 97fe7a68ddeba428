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

#include <fstream>
#include <map>

#include "sade/error.hpp"
#include "sade/pos_tag.hpp"

namespace sade {
namespace {

using Tags = std::vector<PosTag>;

// Reads the lexicon file directly rather than through the tagger.
std::map<std::string, std::string> RawLexicon() {
  std::map<std::string, std::string> out;
  std::ifstream in(SADE_LEXICON_PATH);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

TEST(PosTag, BrownDogFromBundledLexicon) {
  const auto lexicon = RawLexicon();
  ASSERT_EQ(lexicon.at("brown"), "ADJ");
  ASSERT_EQ(lexicon.at("dog"), "NOUN");
  const std::vector<std::string> tokens = {"brown", "dog"};
  EXPECT_EQ(PosTagger::Default().Tag(tokens), (Tags{PosTag::kAdj, PosTag::kNoun}));
}

TEST(PosTag, EmptyInput) {
  EXPECT_TRUE(PosTagger::Default().Tag(std::vector<std::string>{}).empty());
}

TEST(PosTag, UnknownDefaultsToNoun) {
  const std::vector<std::string> tokens = {"zzxqy"};
  EXPECT_EQ(PosTagger::Default().Tag(tokens), Tags{PosTag::kNoun});
}

TEST(PosTag, CompiledLexiconMatchesFile) {
  const auto lexicon = RawLexicon();
  const PosTagger& tagger = PosTagger::Default();
  EXPECT_EQ(tagger.lexicon_size(), lexicon.size());
  for (const auto& [token, tag] : lexicon) {
    ASSERT_EQ(tagger.Lookup(token), ParsePosTag(tag)) << token;
  }
}

TEST(PosTag, LookupIgnoresCase) {
  const std::vector<std::string> tokens = {"The", "DOG"};
  EXPECT_EQ(PosTagger::Default().Tag(tokens), (Tags{PosTag::kDet, PosTag::kNoun}));
}

TEST(PosTag, SuffixHeuristicsForUnknownWords) {
  const PosTagger tagger = PosTagger::FromLexiconText("the\tDET\n");
  const std::vector<std::string> tokens = {"blorply", "zorking", "the", "zorking",
                                           "1984", ",", "flimbed", "glorp"};
  EXPECT_EQ(tagger.Tag(tokens),
            (Tags{PosTag::kAdv, PosTag::kVerb, PosTag::kDet, PosTag::kAdj, PosTag::kNum,
                  PosTag::kOther, PosTag::kVerb, PosTag::kNoun}));
}

TEST(PosTag, LexiconErrors) {
  EXPECT_THROW(PosTagger::FromLexiconText("dog NOUN\n"), ParseError);
  EXPECT_THROW(PosTagger::FromLexiconText("dog\tTHING\n"), ParseError);
  EXPECT_THROW(PosTagger::FromLexiconFile("/nonexistent/lexicon.tsv"), FileNotFound);
  const PosTagger t = PosTagger::FromLexiconText("# comment\n\ndog\tNOUN\n");
  EXPECT_EQ(t.lexicon_size(), 1u);
}

TEST(PosTag, NamesRoundTrip) {
  for (PosTag tag : {PosTag::kNoun, PosTag::kAdj, PosTag::kVerb, PosTag::kAdv, PosTag::kDet,
                     PosTag::kPron, PosTag::kAdp, PosTag::kConj, PosTag::kNum, PosTag::kPart,
                     PosTag::kOther}) {
    EXPECT_EQ(ParsePosTag(PosTagName(tag)), tag);
  }
  EXPECT_FALSE(ParsePosTag("XYZ").has_value());
}

}  // namespace
}  // namespace sade
