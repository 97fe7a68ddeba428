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

#ifndef SADE_SCORER_HPP_
#define SADE_SCORER_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sade {

// Per-token natural-log conditional probabilities of a continuation.
struct TokenLogProbs {
  std::vector<std::string> tokens;
  std::vector<double> logprobs;

  // Throws MalformedResponse unless lengths match, the sequence is
  // non-empty, and every value is finite and <= 0.
  void Validate() const;
};

// Only uniform weights (w_t = 1/m) are supported.
enum class WeightScheme { kUniform };

// Throws ConfigError for anything but "uniform".
WeightScheme ParseWeightScheme(std::string_view name);

// Weighted sum of token log-probs; the arithmetic mean for uniform weights.
// Image-conditioned log-probs give VisualGPTScore, text-only ones GPTScore.
double VisualGptScore(const TokenLogProbs& tlp,
                      WeightScheme scheme = WeightScheme::kUniform);

// Length-normalized log-likelihood gap between a positive and a negative
// sentence, both scored without an image. Antisymmetric.
double SyntaxBiasRaw(const TokenLogProbs& positive, const TokenLogProbs& negative,
                     WeightScheme scheme = WeightScheme::kUniform);

struct NormalizationSpec {
  // max |raw| over the population, or 1 when every raw is zero.
  double scale = 1.0;

  double Apply(double raw) const { return raw / scale; }
};

struct NormalizedScores {
  std::vector<double> values;
  NormalizationSpec spec;
};

// Max-abs scaling into [-1, 1]; keeps order, sign, and zeros.
NormalizedScores NormalizeScores(std::span<const double> raws);

}  // namespace sade

#endif  // SADE_SCORER_HPP_
