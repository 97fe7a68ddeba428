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

#ifndef SADE_STATS_HPP_
#define SADE_STATS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sade {

double Mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double SampleStdev(std::span<const double> values);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;
};

// Equal-width bins over [lo, hi]; the last bin is closed on the right and
// values outside the range are clamped into the end bins.
Histogram MakeHistogram(std::span<const double> values, std::size_t bins,
                        double lo = -1.0, double hi = 1.0);

// I_x(a, b), evaluated by continued fraction.
double RegularizedIncompleteBeta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double StudentTTwoSidedP(double t, double dof);

struct TTestResult {
  double statistic = 0.0;  // may be +-inf for zero-variance input
  double p_value = 1.0;
  std::string kind = "one-sample-t";
};

// Two-sided one-sample t-test of mean == 0. Zero-variance input yields
// p = 1 when the mean is 0 and p = 0 otherwise. Throws TooFewSamples.
TTestResult OneSampleTTest(std::span<const double> scores);

}  // namespace sade

#endif  // SADE_STATS_HPP_
