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

#include "sade/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sade/error.hpp"

namespace sade {
namespace {

constexpr double kTiny = 1e-300;
constexpr double kEpsilon = 1e-16;
constexpr int kMaxIterations = 1000;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double BetaContinuedFraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return h;
}

// I_x(a, b) with y = 1 - x supplied separately to avoid cancellation.
double IncompleteBeta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, y) / b;
}

}  // namespace

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleStdev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

Histogram MakeHistogram(std::span<const double> values, std::size_t bins,
                        double lo, double hi) {
  Histogram h;
  bins = std::max<std::size_t>(bins, 1);
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = lo + width * static_cast<double>(i);
  }
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    double pos = std::floor((v - lo) / width);
    std::size_t bin = pos <= 0.0 ? 0
                                 : std::min(static_cast<std::size_t>(pos), bins - 1);
    ++h.counts[bin];
  }
  return h;
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  return IncompleteBeta(a, b, x, 1.0 - x);
}

double StudentTTwoSidedP(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double x = dof / (dof + t2);
  const double y = t2 / (dof + t2);
  return std::clamp(IncompleteBeta(dof / 2.0, 0.5, x, y), 0.0, 1.0);
}

TTestResult OneSampleTTest(std::span<const double> scores) {
  if (scores.size() < 2) throw TooFewSamples(scores.size());
  TTestResult result;
  const double mean = Mean(scores);
  const double sd = SampleStdev(scores);
  if (sd == 0.0) {
    if (mean == 0.0) {
      result.statistic = 0.0;
      result.p_value = 1.0;
    } else {
      result.statistic = std::copysign(std::numeric_limits<double>::infinity(), mean);
      result.p_value = 0.0;
    }
    return result;
  }
  const double n = static_cast<double>(scores.size());
  result.statistic = mean / (sd / std::sqrt(n));
  result.p_value = StudentTTwoSidedP(result.statistic, n - 1.0);
  return result;
}

}  // namespace sade
