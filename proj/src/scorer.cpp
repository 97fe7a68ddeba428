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

#include "sade/scorer.hpp"

#include <algorithm>
#include <cmath>

#include "sade/error.hpp"

namespace sade {

void TokenLogProbs::Validate() const {
  if (tokens.size() != logprobs.size()) {
    throw MalformedResponse("token/logprob length mismatch (" +
                            std::to_string(tokens.size()) + " vs " +
                            std::to_string(logprobs.size()) + ")");
  }
  if (tokens.empty()) throw MalformedResponse("empty token sequence");
  for (double lp : logprobs) {
    if (!std::isfinite(lp) || lp > 0.0) {
      throw MalformedResponse("log-prob " + std::to_string(lp) +
                              " is not finite and <= 0");
    }
  }
}

WeightScheme ParseWeightScheme(std::string_view name) {
  if (name == "uniform") return WeightScheme::kUniform;
  throw ConfigError("unsupported weight scheme '" + std::string(name) + "'");
}

double VisualGptScore(const TokenLogProbs& tlp, WeightScheme scheme) {
  tlp.Validate();
  switch (scheme) {
    case WeightScheme::kUniform: {
      // Summed in sorted order so any reordering of the same tokens gives
      // the same bits.
      std::vector<double> sorted = tlp.logprobs;
      std::sort(sorted.begin(), sorted.end());
      double sum = 0.0;
      for (double lp : sorted) sum += lp;
      return sum / static_cast<double>(sorted.size());
    }
  }
  return 0.0;
}

double SyntaxBiasRaw(const TokenLogProbs& positive, const TokenLogProbs& negative,
                     WeightScheme scheme) {
  return VisualGptScore(positive, scheme) - VisualGptScore(negative, scheme);
}

NormalizedScores NormalizeScores(std::span<const double> raws) {
  NormalizedScores out;
  double max_abs = 0.0;
  for (double r : raws) max_abs = std::max(max_abs, std::abs(r));
  out.spec.scale = max_abs > 0.0 ? max_abs : 1.0;
  out.values.reserve(raws.size());
  for (double r : raws) out.values.push_back(out.spec.Apply(r));
  return out;
}

}  // namespace sade
