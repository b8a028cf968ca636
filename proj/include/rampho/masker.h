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

#ifndef RAMPHO_MASKER_H_
#define RAMPHO_MASKER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rampho/audio_io.h"
#include "rampho/fft.h"

namespace rampho {

// Concentration Shield: whole-signal phase randomization of the
// speech-critical band, with raised-cosine weights on the phase
// perturbation across each band edge. Magnitudes are never touched.
struct ShieldParams {
  double band_low_hz = 1000.0;
  double band_high_hz = 4000.0;
  double taper_half_width_hz = 100.0;
  uint64_t rng_seed = 0;

  // Throws BandOutOfRange unless
  // 0 < low - taper, low + taper < high - taper, high + taper < nyquist.
  void Validate(double sample_rate) const;
};

// Weight w(f) in [0, 1] applied to the random phase offset at frequency f.
double ShieldPhaseWeight(double freq_hz, const ShieldParams& params);

// Half spectrum (bins 0..n/2) of the shielded signal.
Spectrum ShieldSpectrum(const AudioBuffer& buffer, const ShieldParams& params);

AudioBuffer ConcentrationShield(const AudioBuffer& buffer,
                                const ShieldParams& params);

// Pearson correlation of the band-limited amplitude envelopes of two
// equal-length signals. Stand-in metric for destruction of the linguistic
// payload in [band_low, band_high].
double EnvelopeDecorrelation(const AudioBuffer& original,
                             const AudioBuffer& shielded, double band_low_hz,
                             double band_high_hz);

// Standard deviation over mean of the 32 Hz amplitude envelope, ignoring 5%
// at each end for filter settling.
double EnvelopeFluctuation(const AudioBuffer& buffer);

inline constexpr int kLtasFftSize = 1024;
inline constexpr double kLtasMinDurationS = 10.0;

struct LtasProfile {
  std::vector<double> band_centers_hz;
  std::vector<double> band_levels_db;  // re total power over all bands
  int fft_size = kLtasFftSize;
  double source_duration_s = 0.0;

  void Validate() const;
};

// Nominal 1/3-octave centers 100 Hz .. 6.3 kHz.
const std::vector<double>& ThirdOctaveCenters();
// Band edges fc * 2^(-1/6), fc * 2^(1/6).
double BandLowerEdge(double center_hz);
double BandUpperEdge(double center_hz);

// Welch power spectrum (Hann, 1024, 50% overlap) integrated into 1/3-octave
// bands with fractional bin overlap, normalized to 0 dB total.
LtasProfile MeasureLtas(const AudioBuffer& reference);

// Integrates a one-sided power spectrum sampled at k * bin_hz into the
// profile's bands; bin k is taken to cover [(k - 1/2), (k + 1/2)) * bin_hz.
std::vector<double> IntegrateBands(const std::vector<double>& power,
                                   double bin_hz,
                                   const std::vector<double>& centers_hz);

inline constexpr int kSsnFilterTaps = 4096;

// Seeded Gaussian noise shaped by a frequency-sampled FIR whose response
// follows the profile. Output RMS is -26 dBov; callers recalibrate anyway.
AudioBuffer SynthesizeSsn(const LtasProfile& profile, double duration_s,
                          uint64_t rng_seed, int sample_rate = kCanonicalRate);

// Plain-text table, one "band_center_hz level_db" pair per line, preceded by
// '#' comment lines carrying fft_size and source_duration_s.
std::string FormatLtasTable(const LtasProfile& profile);
LtasProfile ParseLtasTable(const std::string& text);
void WriteLtasTable(const LtasProfile& profile,
                    const std::filesystem::path& path);
LtasProfile ReadLtasTable(const std::filesystem::path& path);

}  // namespace rampho

#endif  // RAMPHO_MASKER_H_
