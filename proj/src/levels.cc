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

#include "rampho/levels.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>

#include "rampho/error.h"

namespace rampho {

ActiveLevelReport ActiveSpeechLevel(const AudioBuffer& buffer) {
  const double fs = buffer.sample_rate();
  if (buffer.duration_s() < kMinLevelDurationS) {
    throw Error(ErrorCode::kTooShort,
                "active level needs >= 0.25 s, got " +
                    std::to_string(buffer.duration_s()) + " s");
  }
  const double g = std::exp(-1.0 / (fs * kEnvelopeTimeConstantS));
  const auto hangover = static_cast<int64_t>(std::ceil(kHangoverS * fs));

  std::array<double, kThresholdCount> threshold;
  for (int j = 0; j < kThresholdCount; ++j) threshold[j] = std::ldexp(1.0, -j);

  // Hangover counters start expired: nothing before the first sample counts
  // as activity.
  std::array<int64_t, kThresholdCount> active{};
  std::array<int64_t, kThresholdCount> hang;
  hang.fill(hangover);

  long double energy = 0.0L;
  double p = 0.0, q = 0.0;
  for (double x : buffer.samples()) {
    energy += static_cast<long double>(x) * x;
    p = g * p + (1.0 - g) * std::abs(x);
    q = g * q + (1.0 - g) * p;
    for (int j = 0; j < kThresholdCount; ++j) {
      if (q >= threshold[j]) {
        ++active[j];
        hang[j] = 0;
      } else if (hang[j] < hangover) {
        ++active[j];
        ++hang[j];
      }
    }
  }

  const auto n = static_cast<double>(buffer.size());
  const double total_energy = static_cast<double>(energy);
  if (total_energy <= 0.0) {
    throw Error(ErrorCode::kNoActiveSpeech, "buffer is digital silence");
  }
  const double overall_db = 10.0 * std::log10(total_energy / n);

  // delta_j = A_j - C_j grows as the threshold drops; find the first j with
  // delta_j >= M and interpolate against j - 1 in the dB domain.
  auto level_db = [&](int j) {
    return 10.0 * std::log10(total_energy / static_cast<double>(active[j]));
  };
  constexpr double kNoActivity = -std::numeric_limits<double>::infinity();
  double prev_delta = kNoActivity;
  for (int j = 0; j < kThresholdCount; ++j) {
    if (active[j] == 0) continue;
    const double c_db = 20.0 * std::log10(threshold[j]);
    const double a_db = level_db(j);
    const double delta = a_db - c_db;
    if (delta < kMarginDb) {
      prev_delta = delta;
      continue;
    }
    ActiveLevelReport report{};
    report.overall_rms_db = overall_db;
    if (j == 0 || prev_delta == kNoActivity || delta == kMarginDb) {
      report.active_level_db = a_db;
      report.threshold_db = c_db;
      report.activity_factor = active[j] / n;
    } else {
      const double c_prev = 20.0 * std::log10(threshold[j - 1]);
      const double t = (kMarginDb - prev_delta) / (delta - prev_delta);
      report.threshold_db = c_prev + t * (c_db - c_prev);
      report.active_level_db = report.threshold_db + kMarginDb;
      // A = 10 log10(E / (n * activity)) at the interpolated crossing.
      report.activity_factor =
          std::pow(10.0, (overall_db - report.active_level_db) / 10.0);
    }
    if (report.activity_factor > 1.0) report.activity_factor = 1.0;
    return report;
  }
  throw Error(ErrorCode::kNoActiveSpeech,
              "no activity threshold satisfies the P.56 margin");
}

ActiveLevelReport ActiveSpeechLevelAnyScale(const AudioBuffer& buffer) {
  const double peak = PeakAbs(buffer.samples());
  if (peak == 0.0) {
    throw Error(ErrorCode::kNoActiveSpeech, "buffer is digital silence");
  }
  int exponent;
  std::frexp(peak, &exponent);  // peak = m * 2^exponent, m in [0.5, 1)
  if (exponent == 0) return ActiveSpeechLevel(buffer);
  std::vector<double> scaled(buffer.samples().begin(), buffer.samples().end());
  for (double& v : scaled) v = std::ldexp(v, -exponent);
  ActiveLevelReport report =
      ActiveSpeechLevel(AudioBuffer(std::move(scaled), buffer.sample_rate()));
  const double shift_db = 20.0 * std::log10(2.0) * exponent;
  report.active_level_db += shift_db;
  report.overall_rms_db += shift_db;
  report.threshold_db += shift_db;
  return report;
}

CalibratedAudio ApplyGainToActiveLevel(const AudioBuffer& buffer,
                                       double target_db) {
  const ActiveLevelReport report = ActiveSpeechLevel(buffer);
  const double gain_db = target_db - report.active_level_db;
  const double gain = std::pow(10.0, gain_db / 20.0);
  std::vector<double> out(buffer.samples().begin(), buffer.samples().end());
  bool clipping = false;
  for (double& s : out) {
    s *= gain;
    if (std::abs(s) > 1.0) clipping = true;
  }
  if (clipping) {
    spdlog::warn("ClippingWarning: gain of {:.2f} dB to reach {:.2f} dBov "
                 "pushes samples beyond full scale (not clipped)",
                 gain_db, target_db);
  }
  return CalibratedAudio{AudioBuffer(std::move(out), buffer.sample_rate()),
                         gain_db, report.active_level_db, clipping};
}

}  // namespace rampho
