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

#ifndef RAMPHO_FILTERS_H_
#define RAMPHO_FILTERS_H_

#include <span>
#include <vector>

namespace rampho {

// Direct-form II transposed second-order section, a0 normalized to 1.
struct Biquad {
  double b0, b1, b2, a1, a2;
};

// Butterworth designs of even order as cascades of bilinear-transformed
// second-order sections.
std::vector<Biquad> ButterworthLowPass(int order, double cutoff_hz,
                                       double sample_rate);
std::vector<Biquad> ButterworthHighPass(int order, double cutoff_hz,
                                        double sample_rate);

std::vector<double> ApplySections(std::span<const Biquad> sections,
                                  std::span<const double> x);

// Zero-phase band limiting: DFT bins outside [low_hz, high_hz] are zeroed.
std::vector<double> BandLimit(std::span<const double> x, double low_hz,
                              double high_hz, double sample_rate);

// Magnitude of the analytic signal, smoothed by a 4th-order low-pass at
// smoothing_hz.
std::vector<double> AmplitudeEnvelope(std::span<const double> x,
                                      double sample_rate,
                                      double smoothing_hz = 32.0);

double PearsonCorrelation(std::span<const double> a, std::span<const double> b);

}  // namespace rampho

#endif  // RAMPHO_FILTERS_H_
