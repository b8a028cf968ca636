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

#ifndef RAMPHO_ENTROPY_H_
#define RAMPHO_ENTROPY_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rampho/logits.h"
#include "rampho/mixer.h"

namespace rampho {

// Constant inside the logarithm of the frame entropy. It biases H low by at
// most K * eps / ln 2 (4.5e-11 bits for K = 31).
inline constexpr double kEntropyEpsilon = 1e-12;
// Frames with 1 - P(blank) at or below this cannot be renormalized.
inline constexpr double kDegenerateActiveMass = 1e-6;
inline constexpr double kDefaultSilenceExclusionBlankProb = 0.999;

// Max-subtracted softmax.
std::vector<double> Softmax(std::span<const float> logits);
std::vector<double> Softmax(std::span<const double> logits);

// Shannon entropy in bits of the blank-excluded distribution
//   q_i = P(x_i) / (1 - P(blank)),  H = -sum_{i != blank} q_i log2(q_i + eps).
// Clamped at 0 from below. Throws DegenerateFrame when
// 1 - P(blank) <= kDegenerateActiveMass.
double FrameEntropy(std::span<const double> probs, std::size_t blank_index);

struct EntropyTrace {
  std::vector<double> frame_entropy_bits;
  std::vector<double> frame_blank_prob;
  std::vector<bool> frame_excluded;
  double mean_bits = 0.0;
  double median_bits = 0.0;  // lower median for even counts
  double normalized_mean = 0.0;  // mean_bits / log2(active vocab size)
  std::size_t included_frames = 0;
  std::size_t excluded_frames = 0;
};

// Frames with P(blank) above the threshold are excluded from the aggregates,
// as are degenerate frames whatever the threshold. Throws AllFramesExcluded
// when nothing remains.
EntropyTrace AggregateTrace(
    const LogitsMatrix& matrix,
    double silence_exclusion_blank_prob = kDefaultSilenceExclusionBlankProb);

struct SweepRow {
  Condition condition;
  double snr_db;
  std::string utterance_id;
  double mean_bits;
  double median_bits;
  double normalized_mean;
  std::size_t included_frames;
  std::size_t excluded_frames;
  double target_active_level_db;
  double masker_active_level_db;
};

using ConditionPair = std::pair<Condition, Condition>;

inline constexpr ConditionPair kCrossoverPairs[] = {
    {Condition::kEng, Condition::kCs},
    {Condition::kEng, Condition::kSsn},
    {Condition::kCs, Condition::kSsn}};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Filled by ComputeCrossovers; a pair without a crossing has no entry.
  std::map<ConditionPair, double> crossover_points;

  // Throws ValidationError on a second row for the same
  // (condition, snr, utterance).
  void AddRow(SweepRow row);

  // Normalized mean entropy per SNR for a condition, averaged over
  // utterances, in increasing SNR order.
  std::vector<std::pair<double, double>> Curve(Condition condition) const;
};

// First sign change of curve(a) - curve(b), scanning from low to high SNR
// over the common SNR points below the pristine baseline, linearly
// interpolated. Touching without crossing is not a crossover. Throws
// InsufficientData with fewer than two common points.
std::optional<double> FindCrossover(const SweepResult& result,
                                    ConditionPair pair);

// Fills result->crossover_points for every pair with enough data.
void ComputeCrossovers(SweepResult* result);

}  // namespace rampho

#endif  // RAMPHO_ENTROPY_H_
