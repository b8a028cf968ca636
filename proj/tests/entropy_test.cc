// Copyright 2026 The rampho Authors
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

#include "rampho/entropy.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "rampho/error.h"
#include "rampho/random.h"

namespace rampho {
namespace {

const double kLog2_31 = std::log2(31.0);

// Eq. 1 evaluated directly in extended precision.
long double BruteForceEntropy(const std::vector<double>& p, std::size_t blank) {
  long double active = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i != blank) active += p[i];
  }
  long double h = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == blank) continue;
    const long double q = p[i] / active;
    h -= q * std::log2(q + static_cast<long double>(kEntropyEpsilon));
  }
  return std::max(h, 0.0L);
}

std::vector<double> RandomDistribution(Rng* rng, std::size_t n) {
  std::vector<double> p(n);
  for (double& v : p) v = -std::log(1.0 - rng->Uniform());  // Dirichlet(1)
  // Occasionally zero some entries to hit the epsilon path.
  if (rng->Uniform() < 0.3) p[rng->Below(n)] = 0.0;
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  if (s == 0.0) p[0] = 1.0;
  for (double& v : p) v /= (s == 0.0 ? 1.0 : s);
  return p;
}

LogitsMatrix Matrix(const std::vector<std::vector<float>>& rows) {
  std::vector<float> v;
  for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
  return LogitsMatrix(std::move(v), rows.size(), DefaultManifest(), "t");
}

std::vector<float> UniformActiveRow() {
  std::vector<float> r(32, 0.0f);
  r[0] = -1000.0f;
  return r;
}

std::vector<float> OneHotRow(std::size_t token) {
  std::vector<float> r(32, -1000.0f);
  r[token] = 0.0f;
  return r;
}

TEST(Softmax, Examples) {
  const std::vector<double> flat(32, 3.0);
  for (double p : Softmax(flat)) EXPECT_NEAR(p, 1.0 / 32, 1e-15);

  std::vector<double> big(32, 0.0);
  big[0] = 1000.0;
  const auto p = Softmax(big);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_GE(p[i], 0.0);
  EXPECT_TRUE(std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); }));

  Rng rng(3);
  std::vector<double> row(32);
  for (double& v : row) v = 5 * rng.Gaussian();
  std::vector<double> shifted = row;
  for (double& v : shifted) v += 17.3;
  const auto a = Softmax(row);
  const auto b = Softmax(shifted);
  EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 1.0, 1e-9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], 1e-12);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (row[i] < row[j]) EXPECT_LE(a[i], a[j]);
    }
  }
}

TEST(FrameEntropy, Examples) {
  std::vector<double> uniform(32, 1.0 / 31);
  uniform[0] = 0.0;
  EXPECT_NEAR(FrameEntropy(uniform, 0), 4.954196310386876, 1e-9);

  std::vector<double> one_hot(32, 0.0);
  one_hot[7] = 1.0;
  EXPECT_NEAR(FrameEntropy(one_hot, 0), 0.0, 1e-9);

  std::vector<double> half(32, 0.0);
  half[0] = 0.5;
  half[3] = 0.25;
  half[9] = 0.25;
  EXPECT_NEAR(FrameEntropy(half, 0), 1.0, 1e-9);
}

TEST(FrameEntropy, Degenerate) {
  std::vector<double> p(32, 0.0);
  p[0] = 1.0;
  try {
    FrameEntropy(p, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateFrame);
  }
  p[0] = 1.0 - 5e-7;
  p[1] = 5e-7;
  EXPECT_THROW(FrameEntropy(p, 0), Error);
}

TEST(FrameEntropy, MatchesBruteForceOracle) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const std::vector<double> p = RandomDistribution(&rng, n);
    const std::size_t blank = rng.Below(n);
    if (1.0 - p[blank] <= kDegenerateActiveMass) continue;
    ASSERT_NEAR(FrameEntropy(p, blank), static_cast<double>(BruteForceEntropy(p, blank)), 1e-9)
        << trial;
  }
}

TEST(FrameEntropy, BoundsAndInvariances) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logits(32);
    for (double& v : logits) v = 8 * rng.Gaussian();
    const auto p = Softmax(logits);
    if (1.0 - p[0] <= kDegenerateActiveMass) continue;
    const double h = FrameEntropy(p, 0);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, kLog2_31 + 1e-6);

    // Shifting logits.
    std::vector<double> shifted = logits;
    for (double& v : shifted) v -= 3.25;
    EXPECT_NEAR(FrameEntropy(Softmax(shifted), 0), h, 1e-9);

    // Rescaling the blank mass with active ratios fixed.
    const double new_blank = rng.Uniform() * 0.99;
    std::vector<double> q = p;
    const double scale = (1.0 - new_blank) / (1.0 - p[0]);
    q[0] = new_blank;
    for (std::size_t i = 1; i < q.size(); ++i) q[i] *= scale;
    EXPECT_NEAR(FrameEntropy(q, 0), h, 1e-9);

    // Permuting the active tokens, blank moved consistently.
    std::vector<double> perm(p.begin() + 1, p.end());
    std::reverse(perm.begin(), perm.end());
    perm.insert(perm.begin() + 11, p[0]);
    EXPECT_NEAR(FrameEntropy(perm, 11), h, 1e-12);
  }
}

TEST(AggregateTrace, UniformRows) {
  const LogitsMatrix m = Matrix(std::vector<std::vector<float>>(5, UniformActiveRow()));
  const EntropyTrace t = AggregateTrace(m);
  EXPECT_NEAR(t.mean_bits, kLog2_31, 1e-6);
  EXPECT_NEAR(t.normalized_mean, 1.0, 1e-6);
  EXPECT_EQ(t.included_frames, 5u);
  EXPECT_EQ(t.excluded_frames, 0u);
}

TEST(AggregateTrace, HalfOneHotHalfUniform) {
  std::vector<std::vector<float>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(OneHotRow(4 + i));
  for (int i = 0; i < 10; ++i) rows.push_back(UniformActiveRow());
  const EntropyTrace t = AggregateTrace(Matrix(rows));
  EXPECT_NEAR(t.mean_bits, kLog2_31 / 2, 1e-6);
  EXPECT_NEAR(t.median_bits, 0.0, 1e-9);  // lower median
  EXPECT_NEAR(t.normalized_mean, 0.5, 1e-6);
}

TEST(AggregateTrace, OddMedianAndExclusion) {
  std::vector<std::vector<float>> rows{OneHotRow(1), UniformActiveRow(), UniformActiveRow(),
                                       OneHotRow(0), OneHotRow(0)};
  const EntropyTrace t = AggregateTrace(Matrix(rows));
  EXPECT_EQ(t.included_frames, 3u);
  EXPECT_EQ(t.excluded_frames, 2u);
  EXPECT_NEAR(t.median_bits, kLog2_31, 1e-6);
  EXPECT_EQ(t.frame_excluded, (std::vector<bool>{false, false, false, true, true}));
  EXPECT_EQ(t.frame_entropy_bits.size(), 5u);
  EXPECT_NEAR(t.frame_blank_prob[3], 1.0, 1e-12);
  for (double h : t.frame_entropy_bits) {
    EXPECT_TRUE(std::isfinite(h));
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, kLog2_31 + 1e-6);
  }
}

TEST(AggregateTrace, ThresholdControlsExclusion) {
  // P(blank) = 0.99: included at the default threshold, excluded at 0.9.
  std::vector<float> row(32, 0.0f);
  row[0] = static_cast<float>(std::log(0.99 / 0.01 * 31));
  const LogitsMatrix m = Matrix({row, UniformActiveRow()});
  EXPECT_EQ(AggregateTrace(m).included_frames, 2u);
  EXPECT_EQ(AggregateTrace(m, 0.9).included_frames, 1u);
  EXPECT_EQ(AggregateTrace(m, 1.0).included_frames, 2u);
}

TEST(AggregateTrace, AllExcluded) {
  try {
    AggregateTrace(Matrix({OneHotRow(0), OneHotRow(0)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllFramesExcluded);
  }
}

SweepResult Curves(const std::vector<std::pair<double, double>>& a,
                   const std::vector<std::pair<double, double>>& b) {
  SweepResult r;
  for (const auto& [c, pts] : {std::pair{Condition::kEng, a}, std::pair{Condition::kCs, b}}) {
    for (const auto& [snr, y] : pts) {
      r.AddRow(SweepRow{c, snr, "u", y * kLog2_31, y * kLog2_31, y, 10, 0, -26, -26 - snr});
    }
  }
  return r;
}

constexpr ConditionPair kEngCs{Condition::kEng, Condition::kCs};

TEST(FindCrossover, SymmetricLines) {
  const SweepResult r = Curves({{0, 0.9}, {20, 0.1}}, {{0, 0.1}, {20, 0.9}});
  const auto x = FindCrossover(r, kEngCs);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, 10.0);
}

TEST(FindCrossover, IdenticalAndTouchingCurves) {
  EXPECT_FALSE(FindCrossover(Curves({{0, .5}, {10, .4}, {20, .3}}, {{0, .5}, {10, .4}, {20, .3}}),
                             kEngCs));
  // Touch at 10 dB, same side on both ends.
  EXPECT_FALSE(FindCrossover(Curves({{0, .5}, {10, .4}, {20, .5}}, {{0, .4}, {10, .4}, {20, .4}}),
                             kEngCs));
}

TEST(FindCrossover, CrossingThroughExactTie) {
  const auto x = FindCrossover(
      Curves({{0, .5}, {10, .4}, {15, .4}, {20, .3}}, {{0, .3}, {10, .4}, {15, .4}, {20, .5}}),
      kEngCs);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, 10.0);
}

TEST(FindCrossover, PaperShapedCurvesCrossInside) {
  // ENG 0.67 -> 0.16, CS 0.85 -> 0.11 with intermediate points, and a
  // pristine baseline that must not be interpolated.
  const SweepResult r = Curves(
      {{0, .67}, {5, .52}, {10, .38}, {15, .25}, {20, .16}, {100, .05}},
      {{0, .85}, {5, .62}, {10, .40}, {15, .22}, {20, .11}, {100, .90}});
  const auto x = FindCrossover(r, kEngCs);
  ASSERT_TRUE(x.has_value());
  EXPECT_GT(*x, 10.0);
  EXPECT_LT(*x, 15.0);
  EXPECT_NEAR(*x, 10.0 + 5.0 * 0.02 / 0.05, 1e-12);
}

TEST(FindCrossover, PristineBaselineIgnoredAndInsufficientData) {
  EXPECT_FALSE(FindCrossover(Curves({{0, .5}, {20, .4}, {100, .1}}, {{0, .3}, {20, .3}, {100, .9}}),
                             kEngCs));
  try {
    FindCrossover(Curves({{0, .5}, {100, .4}}, {{0, .3}, {100, .9}}), kEngCs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
  EXPECT_THROW(FindCrossover(Curves({{0, .5}, {5, .4}}, {{10, .3}, {15, .9}}), kEngCs), Error);
}

TEST(FindCrossover, Fast) {
  const SweepResult r = Curves({{0, 0.9}, {20, 0.1}}, {{0, 0.1}, {20, 0.9}});
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 100; ++i) ASSERT_TRUE(FindCrossover(r, kEngCs));
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_LT(std::chrono::duration<double>(elapsed).count() / 100, 1e-3);
}

TEST(SweepResult, DuplicateRowsRejectedAndCurvesAveraged) {
  SweepResult r;
  r.AddRow(SweepRow{Condition::kEng, 0, "a", 1, 1, 0.2, 1, 0, 0, 0});
  r.AddRow(SweepRow{Condition::kEng, 0, "b", 1, 1, 0.4, 1, 0, 0, 0});
  r.AddRow(SweepRow{Condition::kEng, 5, "a", 1, 1, 0.1, 1, 0, 0, 0});
  EXPECT_THROW(r.AddRow(SweepRow{Condition::kEng, 0, "a", 1, 1, 0.3, 1, 0, 0, 0}), Error);
  const auto curve = r.Curve(Condition::kEng);
  ASSERT_EQ(curve.size(), 2u);
  EXPECT_EQ(curve[0].first, 0.0);
  EXPECT_NEAR(curve[0].second, 0.3, 1e-15);
  EXPECT_EQ(curve[1].first, 5.0);
  EXPECT_TRUE(r.Curve(Condition::kSsn).empty());
}

TEST(ComputeCrossovers, FillsOnlyCrossingPairs) {
  SweepResult r = Curves({{0, 0.9}, {20, 0.1}}, {{0, 0.1}, {20, 0.9}});
  ComputeCrossovers(&r);
  ASSERT_EQ(r.crossover_points.size(), 1u);
  EXPECT_EQ(r.crossover_points.at(kEngCs), 10.0);
}

}  // namespace
}  // namespace rampho
