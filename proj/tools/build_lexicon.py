#!/usr/bin/env python3
# Copyright 2026 The sade-bench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/lexicon.tsv.

Inputs are the Brill tagger lexicon (word followed by Penn tags, most likely
tag first) and a word-frequency list, both as shipped in the TextBlob wheel
(textblob/en/en-lexicon.txt and textblob/en/en-spelling.txt).

  python3 tools/build_lexicon.py en-lexicon.txt en-spelling.txt > data/lexicon.tsv
"""

import sys

PENN_TO_COARSE = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB",
    "VBP": "VERB", "VBZ": "VERB", "MD": "VERB",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV", "WRB": "ADV",
    "DT": "DET", "PDT": "DET", "WDT": "DET",
    "PRP": "PRON", "PRP$": "PRON", "WP": "PRON", "WP$": "PRON", "EX": "PRON",
    "IN": "ADP",
    "CC": "CONJ",
    "CD": "NUM",
    "RP": "PART", "TO": "PART", "POS": "PART",
}

CLOSED = {"DET", "PRON", "ADP", "CONJ", "PART"}
OPEN_LIMIT = 5000

# Third-person verb forms common in captions that the Brill lexicon lacks
# or lists as plural nouns first.
OVERRIDES = {
    "chases": "VERB", "kisses": "VERB", "rides": "VERB", "holds": "VERB",
    "sits": "VERB", "stands": "VERB", "walks": "VERB", "eats": "VERB",
    "runs": "VERB", "jumps": "VERB", "looks": "VERB", "plays": "VERB",
    "carries": "VERB", "wears": "VERB", "throws": "VERB", "catches": "VERB",
    "drinks": "VERB", "lies": "VERB", "lays": "VERB", "hangs": "VERB",
    "sleeps": "VERB", "swims": "VERB", "pulls": "VERB", "pushes": "VERB",
    "watches": "VERB", "flies": "VERB", "climbs": "VERB", "reads": "VERB",
}


def read_lexicon(path):
    tags = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) < 2 or not parts[0].islower() or not parts[0].isalpha():
                continue
            coarse = PENN_TO_COARSE.get(parts[1])
            if coarse is not None:
                tags.setdefault(parts[0], coarse)
    return tags


def read_frequencies(path):
    freq = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) == 2:
                freq[parts[0]] = int(parts[1])
    return freq


def main():
    tags = read_lexicon(sys.argv[1])
    freq = read_frequencies(sys.argv[2])
    chosen = {w: t for w, t in tags.items() if t in CLOSED}
    ranked = sorted((w for w in tags if w in freq), key=lambda w: (-freq[w], w))
    for w in ranked:
        if len(chosen) >= OPEN_LIMIT:
            break
        chosen.setdefault(w, tags[w])
    chosen.update(OVERRIDES)
    for w in sorted(chosen):
        print(f"{w}\t{chosen[w]}")


if __name__ == "__main__":
    main()
