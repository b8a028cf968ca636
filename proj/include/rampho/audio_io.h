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

#ifndef RAMPHO_AUDIO_IO_H_
#define RAMPHO_AUDIO_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace rampho {

// Canonical analysis rate. Ingested audio is resampled to this rate before
// any synthesis or analysis.
inline constexpr int kCanonicalRate = 16000;

// Mono waveform, full scale = 1.0. Samples may exceed +/-1.0 (calibrated
// mixtures are not clipped), but are always finite and there is always at
// least one of them.
class AudioBuffer {
 public:
  AudioBuffer(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double duration_s() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  double operator[](std::size_t i) const { return samples_[i]; }

  // Releases the sample storage; the buffer must not be used afterwards.
  std::vector<double> TakeSamples() && { return std::move(samples_); }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

// Reads RIFF/WAVE with PCM16 or IEEE float32 samples, 1 or 2 channels.
// Stereo is averaged to mono; PCM16 is scaled by 1/32768.
AudioBuffer LoadWav(const std::filesystem::path& path);

// Writes a canonical 44-byte-header float32 mono WAV. Samples are narrowed
// to float32; buffers whose samples are float32-representable (anything that
// came out of LoadWav) round-trip bit-exactly.
void SaveWav(const AudioBuffer& buffer, const std::filesystem::path& path);

// Scales so that max |sample| == peak.
AudioBuffer PeakNormalize(const AudioBuffer& buffer, double peak);

double PeakAbs(std::span<const double> samples);
double MeanSquare(std::span<const double> samples);
// Level in dBov, where a full-scale square wave (mean square 1.0) is 0 dBov.
double RmsDb(std::span<const double> samples);

}  // namespace rampho

#endif  // RAMPHO_AUDIO_IO_H_
