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

#ifndef RAMPHO_FFT_H_
#define RAMPHO_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace rampho {

using Spectrum = std::vector<std::complex<double>>;

// Unnormalized real DFT of arbitrary length n; returns bins 0..n/2.
Spectrum RealFft(std::span<const double> signal);

// Inverse of RealFft including the 1/n factor. The imaginary parts of the DC
// bin (and the Nyquist bin for even n) are ignored, which is what makes the
// output exactly real.
std::vector<double> InverseRealFft(const Spectrum& half_spectrum,
                                   std::size_t n);

// Full-length complex DFT. sign = -1 forward, +1 backward (unnormalized).
std::vector<std::complex<double>> ComplexFft(
    std::span<const std::complex<double>> input, int sign);

}  // namespace rampho

#endif  // RAMPHO_FFT_H_
