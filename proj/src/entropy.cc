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
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rampho/error.h"

namespace rampho {

namespace {

template <typename T>
std::vector<double> SoftmaxImpl(std::span<const T> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  double max = -std::numeric_limits<double>::infinity();
  for (T v : logits) max = std::max(max, static_cast<double>(v));
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(static_cast<double>(logits[i]) - max);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

// Renormalized entropy straight from logits: a softmax over the active
// tokens only, which equals P(x_i) / (1 - P(blank)) without forming
// 1 - P(blank). Used for frames too blank-dominated for the probability
// route.
double ActiveEntropyFromLogits(std::span<const float> logits,
                               std::size_t blank_index) {
  std::vector<double> active;
  active.reserve(logits.size() - 1);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (i != blank_index) active.push_back(logits[i]);
  }
  const std::vector<double> q = Softmax(std::span<const double>(active));
  double h = 0.0;
  for (double v : q) h -= v * std::log2(v + kEntropyEpsilon);
  return std::max(h, 0.0);
}

}  // namespace

std::vector<double> Softmax(std::span<const float> logits) {
  return SoftmaxImpl(logits);
}

std::vector<double> Softmax(std::span<const double> logits) {
  return SoftmaxImpl(logits);
}

double FrameEntropy(std::span<const double> probs, std::size_t blank_index) {
  if (blank_index >= probs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "blank index out of range");
  }
  const double active_mass = 1.0 - probs[blank_index];
  if (active_mass <= kDegenerateActiveMass) {
    throw Error(ErrorCode::kDegenerateFrame,
                fmt::format("1 - P(blank) = {:.3g} leaves nothing to "
                            "renormalize",
                            active_mass));
  }
  double h = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i == blank_index) continue;
    const double q = probs[i] / active_mass;
    h -= q * std::log2(q + kEntropyEpsilon);
  }
  return std::max(h, 0.0);
}

EntropyTrace AggregateTrace(const LogitsMatrix& matrix,
                            double silence_exclusion_blank_prob) {
  if (!(silence_exclusion_blank_prob > 0.0 &&
        silence_exclusion_blank_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("exclusion threshold must lie in (0, 1], got {}",
                            silence_exclusion_blank_prob));
  }
  const std::size_t blank = matrix.manifest().blank_index;
  const std::size_t n = matrix.frames();
  EntropyTrace trace;
  trace.frame_entropy_bits.resize(n);
  trace.frame_blank_prob.resize(n);
  trace.frame_excluded.resize(n);
  std::vector<double> included;
  included.reserve(n);
  for (std::size_t f = 0; f < n; ++f) {
    const std::vector<double> probs = Softmax(matrix.row(f));
    const double p_blank = probs[blank];
    trace.frame_blank_prob[f] = p_blank;
    const bool degenerate = 1.0 - p_blank <= kDegenerateActiveMass;
    const double h = degenerate ? ActiveEntropyFromLogits(matrix.row(f), blank)
                                : FrameEntropy(probs, blank);
    trace.frame_entropy_bits[f] = h;
    const bool excluded = degenerate || p_blank > silence_exclusion_blank_prob;
    trace.frame_excluded[f] = excluded;
    if (!excluded) included.push_back(h);
  }
  trace.included_frames = included.size();
  trace.excluded_frames = n - included.size();
  if (included.empty()) {
    throw Error(ErrorCode::kAllFramesExcluded,
                fmt::format("all {} frames of {} exceed P(blank) > {}", n,
                            matrix.source_audio_id(),
                            silence_exclusion_blank_prob));
  }
  long double sum = 0.0L;
  for (double h : included) sum += h;
  trace.mean_bits = static_cast<double>(sum / included.size());
  const std::size_t mid = (included.size() - 1) / 2;
  std::nth_element(included.begin(), included.begin() + mid, included.end());
  trace.median_bits = included[mid];
  trace.normalized_mean =
      trace.mean_bits /
      std::log2(static_cast<double>(matrix.manifest().active_vocab_size()));
  return trace;
}

void SweepResult::AddRow(SweepRow row) {
  for (const SweepRow& r : rows) {
    if (r.condition == row.condition && r.snr_db == row.snr_db &&
        r.utterance_id == row.utterance_id) {
      throw Error(ErrorCode::kValidationError,
                  fmt::format("duplicate sweep row {} {} dB {}",
                              ConditionName(row.condition), row.snr_db,
                              row.utterance_id));
    }
  }
  rows.push_back(std::move(row));
}

std::vector<std::pair<double, double>> SweepResult::Curve(
    Condition condition) const {
  std::map<double, std::pair<double, int>> acc;
  for (const SweepRow& r : rows) {
    if (r.condition != condition) continue;
    auto& [sum, count] = acc[r.snr_db];
    sum += r.normalized_mean;
    ++count;
  }
  std::vector<std::pair<double, double>> curve;
  for (const auto& [snr, sc] : acc) {
    curve.emplace_back(snr, sc.first / sc.second);
  }
  return curve;
}

std::optional<double> FindCrossover(const SweepResult& result,
                                    ConditionPair pair) {
  const auto a = result.Curve(pair.first);
  const auto b = result.Curve(pair.second);
  std::vector<double> snr, diff;
  std::size_t j = 0;
  for (const auto& [x, ya] : a) {
    if (x >= kPristineSnrDb) continue;
    while (j < b.size() && b[j].first < x) ++j;
    if (j < b.size() && b[j].first == x) {
      snr.push_back(x);
      diff.push_back(ya - b[j].second);
    }
  }
  if (snr.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("{} and {} share {} SNR points below the "
                            "baseline; need 2",
                            ConditionName(pair.first),
                            ConditionName(pair.second), snr.size()));
  }
  // Index of the most recent nonzero difference.
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i] == 0.0) continue;
    if (last && (diff[i] > 0.0) != (diff[*last] > 0.0)) {
      if (*last + 1 == i) {
        const double t = diff[*last] / (diff[*last] - diff[i]);
        return snr[*last] + t * (snr[i] - snr[*last]);
      }
      // The curves meet on a run of exact ties; report its first point.
      return snr[*last + 1];
    }
    last = i;
  }
  return std::nullopt;
}

void ComputeCrossovers(SweepResult* result) {
  result->crossover_points.clear();
  for (const ConditionPair& pair : kCrossoverPairs) {
    try {
      if (auto x = FindCrossover(*result, pair)) {
        result->crossover_points[pair] = *x;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientData) throw;
    }
  }
}

}  // namespace rampho
