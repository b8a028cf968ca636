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

#include "rampho/resample.h"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "rampho/error.h"

namespace rampho {

namespace {

// Tables larger than this many phases are not precomputed; the kernel is
// evaluated per output sample instead.
constexpr int64_t kMaxTablePhases = 4096;

double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  const double half = x / 2.0;
  for (int k = 1; k < 200; ++k) {
    term *= (half / k) * (half / k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

class SincKernel {
 public:
  // cutoff in cycles per input sample; half_width in input samples.
  SincKernel(double cutoff, double half_width)
      : cutoff_(cutoff),
        half_width_(half_width),
        norm_(1.0 / BesselI0(kResampleKaiserBeta)) {}

  double operator()(double t) const {
    const double r = t / half_width_;
    if (r <= -1.0 || r >= 1.0) return 0.0;
    const double window =
        BesselI0(kResampleKaiserBeta * std::sqrt(1.0 - r * r)) * norm_;
    const double x = 2.0 * cutoff_ * t;
    const double sinc =
        x == 0.0 ? 1.0
                 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    return 2.0 * cutoff_ * sinc * window;
  }

 private:
  double cutoff_;
  double half_width_;
  double norm_;
};

}  // namespace

AudioBuffer Resample(const AudioBuffer& buffer, int target_rate) {
  if (target_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "target rate must be positive, got " +
                    std::to_string(target_rate));
  }
  const int input_rate = buffer.sample_rate();
  if (input_rate == target_rate) return buffer;

  const int64_t g = std::gcd(input_rate, target_rate);
  const int64_t up = target_rate / g;
  const int64_t down = input_rate / g;
  const auto n_in = static_cast<int64_t>(buffer.size());
  const int64_t n_out = (2 * n_in * up + down) / (2 * down);
  if (n_out < 1) {
    throw Error(ErrorCode::kEmptyAudio, "resampled buffer would be empty");
  }

  const double cutoff =
      0.5 * std::min(input_rate, target_rate) / static_cast<double>(input_rate);
  const double half_width = kResampleZeroCrossings / (2.0 * cutoff);
  const SincKernel kernel(cutoff, half_width);
  const auto taps_per_side = static_cast<int64_t>(std::ceil(half_width));
  const int64_t taps = 2 * taps_per_side;

  // Output sample j sits at input position j * down / up = base + phase / up.
  // Its taps are input samples base - taps_per_side + 1 .. base + taps_per_side.
  const bool use_table = up <= kMaxTablePhases;
  std::vector<double> table;
  if (use_table) {
    table.resize(static_cast<std::size_t>(up * taps));
    for (int64_t phase = 0; phase < up; ++phase) {
      const double frac = static_cast<double>(phase) / up;
      for (int64_t k = 0; k < taps; ++k) {
        const double offset = frac - static_cast<double>(k - taps_per_side + 1);
        table[phase * taps + k] = kernel(offset);
      }
    }
  }

  const std::span<const double> x = buffer.samples();
  std::vector<double> out(static_cast<std::size_t>(n_out));
  std::vector<double> scratch(use_table ? 0 : taps);
  for (int64_t j = 0; j < n_out; ++j) {
    const int64_t pos = j * down;
    const int64_t base = pos / up;
    const int64_t phase = pos % up;
    const double* h;
    if (use_table) {
      h = &table[phase * taps];
    } else {
      const double frac = static_cast<double>(phase) / up;
      for (int64_t k = 0; k < taps; ++k) {
        scratch[k] = kernel(frac - static_cast<double>(k - taps_per_side + 1));
      }
      h = scratch.data();
    }
    const int64_t first = base - taps_per_side + 1;
    const int64_t k_begin = std::max<int64_t>(0, -first);
    const int64_t k_end = std::min<int64_t>(taps, n_in - first);
    double acc = 0.0;
    for (int64_t k = k_begin; k < k_end; ++k) acc += h[k] * x[first + k];
    out[j] = acc;
  }
  return AudioBuffer(std::move(out), target_rate);
}

}  // namespace rampho
