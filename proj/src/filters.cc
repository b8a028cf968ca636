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

#include "rampho/filters.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "rampho/error.h"
#include "rampho/fft.h"

namespace rampho {

namespace {

void CheckOrder(int order) {
  if (order < 2 || order % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "Butterworth order must be even and >= 2, got " +
                    std::to_string(order));
  }
}

// Q of the k-th pole pair of an order-n Butterworth prototype.
double PoleQ(int order, int k) {
  const double theta = std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order);
  return 1.0 / (2.0 * std::sin(theta));
}

}  // namespace

std::vector<Biquad> ButterworthLowPass(int order, double cutoff_hz,
                                       double sample_rate) {
  CheckOrder(order);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0), sw = std::sin(w0);
  std::vector<Biquad> sections;
  for (int k = 0; k < order / 2; ++k) {
    const double alpha = sw / (2.0 * PoleQ(order, k));
    const double a0 = 1.0 + alpha;
    sections.push_back({(1.0 - cw) / 2.0 / a0, (1.0 - cw) / a0,
                        (1.0 - cw) / 2.0 / a0, -2.0 * cw / a0,
                        (1.0 - alpha) / a0});
  }
  return sections;
}

std::vector<Biquad> ButterworthHighPass(int order, double cutoff_hz,
                                        double sample_rate) {
  CheckOrder(order);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0), sw = std::sin(w0);
  std::vector<Biquad> sections;
  for (int k = 0; k < order / 2; ++k) {
    const double alpha = sw / (2.0 * PoleQ(order, k));
    const double a0 = 1.0 + alpha;
    sections.push_back({(1.0 + cw) / 2.0 / a0, -(1.0 + cw) / a0,
                        (1.0 + cw) / 2.0 / a0, -2.0 * cw / a0,
                        (1.0 - alpha) / a0});
  }
  return sections;
}

std::vector<double> ApplySections(std::span<const Biquad> sections,
                                  std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  for (const Biquad& s : sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> BandLimit(std::span<const double> x, double low_hz,
                              double high_hz, double sample_rate) {
  Spectrum spectrum = RealFft(x);
  const double bin_hz = sample_rate / static_cast<double>(x.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = k * bin_hz;
    if (f < low_hz || f > high_hz) spectrum[k] = 0.0;
  }
  return InverseRealFft(spectrum, x.size());
}

std::vector<double> AmplitudeEnvelope(std::span<const double> x,
                                      double sample_rate,
                                      double smoothing_hz) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spectrum(n);
  for (std::size_t i = 0; i < n; ++i) spectrum[i] = x[i];
  spectrum = ComplexFft(spectrum, -1);
  // Analytic signal: keep DC (and Nyquist), double positive, zero negative.
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k < n) {
      spectrum[k] *= 2.0;
    } else if (2 * k > n) {
      spectrum[k] = 0.0;
    }
  }
  const auto analytic = ComplexFft(spectrum, +1);
  std::vector<double> magnitude(n);
  for (std::size_t i = 0; i < n; ++i) {
    magnitude[i] = std::abs(analytic[i]) / static_cast<double>(n);
  }
  return ApplySections(ButterworthLowPass(4, smoothing_hz, sample_rate),
                       magnitude);
}

double PearsonCorrelation(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "correlation of sequences with different lengths");
  }
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

}  // namespace rampho
