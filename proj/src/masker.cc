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

#include "rampho/masker.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "rampho/error.h"
#include "rampho/filters.h"
#include "rampho/random.h"

namespace rampho {

void ShieldParams::Validate(double sample_rate) const {
  const double nyquist = sample_rate / 2.0;
  const double t = taper_half_width_hz;
  if (!(t >= 0.0 && band_low_hz - t > 0.0 &&
        band_low_hz + t < band_high_hz - t && band_high_hz + t < nyquist)) {
    throw Error(ErrorCode::kBandOutOfRange,
                fmt::format("shield band [{}, {}] Hz with taper {} Hz does not "
                            "fit below nyquist {} Hz",
                            band_low_hz, band_high_hz, t, nyquist));
  }
}

double ShieldPhaseWeight(double f, const ShieldParams& params) {
  const double t = params.taper_half_width_hz;
  const double lo0 = params.band_low_hz - t, lo1 = params.band_low_hz + t;
  const double hi0 = params.band_high_hz - t, hi1 = params.band_high_hz + t;
  if (f <= lo0 || f >= hi1) return 0.0;
  if (f >= lo1 && f <= hi0) return 1.0;
  if (f < lo1) {
    return 0.5 * (1.0 - std::cos(std::numbers::pi * (f - lo0) / (lo1 - lo0)));
  }
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (f - hi0) / (hi1 - hi0)));
}

Spectrum ShieldSpectrum(const AudioBuffer& buffer, const ShieldParams& params) {
  params.Validate(buffer.sample_rate());
  const std::size_t n = buffer.size();
  Spectrum spectrum = RealFft(buffer.samples());
  const double bin_hz = static_cast<double>(buffer.sample_rate()) / n;
  Rng rng(params.rng_seed);
  // One draw per positive-frequency bin (DC and an even-length Nyquist bin
  // excluded) so the stream does not depend on the band settings.
  const std::size_t last = (n % 2 == 0) ? n / 2 : n / 2 + 1;
  for (std::size_t k = 1; k < last; ++k) {
    const double theta = 2.0 * std::numbers::pi * rng.Uniform();
    const double w = ShieldPhaseWeight(k * bin_hz, params);
    if (w == 0.0) continue;
    spectrum[k] *= std::polar(1.0, w * theta);
  }
  return spectrum;
}

AudioBuffer ConcentrationShield(const AudioBuffer& buffer,
                                const ShieldParams& params) {
  return AudioBuffer(InverseRealFft(ShieldSpectrum(buffer, params),
                                    buffer.size()),
                     buffer.sample_rate());
}

double EnvelopeDecorrelation(const AudioBuffer& original,
                             const AudioBuffer& shielded, double band_low_hz,
                             double band_high_hz) {
  if (original.size() != shielded.size() ||
      original.sample_rate() != shielded.sample_rate()) {
    throw Error(ErrorCode::kLengthMismatch,
                "envelope decorrelation needs equal lengths and rates");
  }
  const double fs = original.sample_rate();
  const auto env_a = AmplitudeEnvelope(
      BandLimit(original.samples(), band_low_hz, band_high_hz, fs), fs);
  const auto env_b = AmplitudeEnvelope(
      BandLimit(shielded.samples(), band_low_hz, band_high_hz, fs), fs);
  return PearsonCorrelation(env_a, env_b);
}

double EnvelopeFluctuation(const AudioBuffer& buffer) {
  const auto env = AmplitudeEnvelope(buffer.samples(), buffer.sample_rate());
  const std::size_t trim = env.size() / 20;
  const std::span<const double> mid(env.data() + trim, env.size() - 2 * trim);
  if (mid.empty()) return 0.0;
  long double mean = 0.0L;
  for (double v : mid) mean += v;
  mean /= mid.size();
  long double var = 0.0L;
  for (double v : mid) var += (v - mean) * (v - mean);
  var /= mid.size();
  if (mean <= 0.0L) return 0.0;
  return static_cast<double>(std::sqrt(var) / mean);
}

const std::vector<double>& ThirdOctaveCenters() {
  static const std::vector<double> centers = {
      100,  125,  160,  200,  250,  315,  400,  500,  630,  800,
      1000, 1250, 1600, 2000, 2500, 3150, 4000, 5000, 6300};
  return centers;
}

double BandLowerEdge(double center_hz) {
  return center_hz * std::pow(2.0, -1.0 / 6.0);
}
double BandUpperEdge(double center_hz) {
  return center_hz * std::pow(2.0, 1.0 / 6.0);
}

void LtasProfile::Validate() const {
  if (band_centers_hz.empty() ||
      band_centers_hz.size() != band_levels_db.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "LTAS profile needs matching, non-empty band arrays");
  }
  for (std::size_t i = 0; i < band_centers_hz.size(); ++i) {
    if (!std::isfinite(band_levels_db[i]) ||
        !std::isfinite(band_centers_hz[i]) || band_centers_hz[i] <= 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite LTAS entry");
    }
    if (i > 0 && band_centers_hz[i] <= band_centers_hz[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "LTAS band centers must be strictly increasing");
    }
  }
}

std::vector<double> IntegrateBands(const std::vector<double>& power,
                                   double bin_hz,
                                   const std::vector<double>& centers_hz) {
  std::vector<double> bands(centers_hz.size(), 0.0);
  for (std::size_t b = 0; b < centers_hz.size(); ++b) {
    const double lo = BandLowerEdge(centers_hz[b]);
    const double hi = BandUpperEdge(centers_hz[b]);
    const auto k0 = static_cast<std::size_t>(std::max(0.0, lo / bin_hz - 0.5));
    const auto k1 = std::min(power.size() - 1,
                             static_cast<std::size_t>(hi / bin_hz + 0.5) + 1);
    double acc = 0.0;
    for (std::size_t k = k0; k <= k1; ++k) {
      const double bin_lo = (k - 0.5) * bin_hz, bin_hi = (k + 0.5) * bin_hz;
      const double overlap = std::min(hi, bin_hi) - std::max(lo, bin_lo);
      if (overlap > 0.0) acc += power[k] * overlap / bin_hz;
    }
    bands[b] = acc;
  }
  return bands;
}

namespace {

std::vector<double> NormalizedLevelsDb(const std::vector<double>& bands) {
  double total = 0.0;
  for (double p : bands) total += p;
  std::vector<double> levels(bands.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    levels[b] = 10.0 * std::log10(bands[b] / total);
  }
  return levels;
}

std::vector<double> HannWindow(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

}  // namespace

LtasProfile MeasureLtas(const AudioBuffer& reference) {
  if (reference.duration_s() < kLtasMinDurationS) {
    throw Error(ErrorCode::kTooShort,
                fmt::format("LTAS reference needs >= {} s, got {:.3f} s",
                            kLtasMinDurationS, reference.duration_s()));
  }
  const double fs = reference.sample_rate();
  const auto& centers = ThirdOctaveCenters();
  if (BandUpperEdge(centers.back()) >= fs / 2.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate too low for the 6.3 kHz band");
  }
  const std::size_t seg = kLtasFftSize, hop = kLtasFftSize / 2;
  const auto window = HannWindow(seg);
  std::vector<double> power(seg / 2 + 1, 0.0);
  std::vector<double> frame(seg);
  const auto x = reference.samples();
  for (std::size_t start = 0; start + seg <= x.size(); start += hop) {
    for (std::size_t i = 0; i < seg; ++i) frame[i] = x[start + i] * window[i];
    const Spectrum s = RealFft(frame);
    for (std::size_t k = 0; k < s.size(); ++k) power[k] += std::norm(s[k]);
  }
  LtasProfile profile;
  profile.band_centers_hz = centers;
  profile.band_levels_db = NormalizedLevelsDb(IntegrateBands(power, fs / seg,
                                                             centers));
  profile.fft_size = kLtasFftSize;
  profile.source_duration_s = reference.duration_s();
  for (double level : profile.band_levels_db) {
    if (!std::isfinite(level)) {
      throw Error(ErrorCode::kSilentInput,
                  "LTAS reference has an empty band (silent input?)");
    }
  }
  return profile;
}

namespace {

constexpr int kSsnDesignIterations = 8;
constexpr int kSsnAnalysisOversample = 4;
constexpr int kLeakageSpanBins = 32;

// Expected Welch estimate of a power spectrum given on a fine grid: the
// spectrum convolved with the squared magnitude response of the segment
// window, sampled on the kLtasFftSize grid.
class WelchLeakage {
 public:
  explicit WelchLeakage(std::size_t fine_size)
      : ratio_(fine_size / kLtasFftSize), fine_size_(fine_size) {
    const auto window = HannWindow(kLtasFftSize);
    const int span = kLeakageSpanBins * static_cast<int>(ratio_);
    kernel_.resize(2 * span + 1);
    for (int j = -span; j <= span; ++j) {
      // Offset in cycles per sample.
      const double f = static_cast<double>(j) / static_cast<double>(fine_size);
      std::complex<double> acc = 0.0;
      for (std::size_t t = 0; t < window.size(); ++t) {
        acc += window[t] * std::polar(1.0, -2.0 * std::numbers::pi * f * t);
      }
      kernel_[j + span] = std::norm(acc);
    }
  }

  std::vector<double> Apply(const std::vector<double>& fine_power) const {
    const int span = static_cast<int>(kernel_.size() / 2);
    const auto half = static_cast<long>(fine_size_ / 2);
    std::vector<double> coarse(kLtasFftSize / 2 + 1, 0.0);
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      const long center = static_cast<long>(k * ratio_);
      double acc = 0.0;
      for (int j = -span; j <= span; ++j) {
        long idx = center + j;
        // Fold negative and above-nyquist frequencies back: the spectrum of a
        // real signal is symmetric.
        if (idx < 0) idx = -idx;
        if (idx > half) idx = 2 * half - idx;
        acc += kernel_[j + span] * fine_power[static_cast<std::size_t>(idx)];
      }
      coarse[k] = acc;
    }
    return coarse;
  }

 private:
  std::size_t ratio_;
  std::size_t fine_size_;
  std::vector<double> kernel_;
};

// Interpolates log power density between band centers on a log-frequency
// axis; held constant beyond the outermost centers.
std::vector<double> DensityOnGrid(const std::vector<double>& centers,
                                  const std::vector<double>& log_density,
                                  std::size_t bins, double bin_hz) {
  std::vector<double> out(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = k * bin_hz;
    double ld;
    if (f <= centers.front()) {
      ld = log_density.front();
    } else if (f >= centers.back()) {
      ld = log_density.back();
    } else {
      const auto it = std::upper_bound(centers.begin(), centers.end(), f);
      const std::size_t b = static_cast<std::size_t>(it - centers.begin());
      const double t = std::log2(f / centers[b - 1]) /
                       std::log2(centers[b] / centers[b - 1]);
      ld = log_density[b - 1] + t * (log_density[b] - log_density[b - 1]);
    }
    out[k] = std::pow(10.0, ld / 10.0);
  }
  return out;
}

std::vector<double> DesignFir(const std::vector<double>& density,
                              std::size_t taps) {
  Spectrum amplitude(density.size());
  for (std::size_t k = 0; k < density.size(); ++k) {
    amplitude[k] = std::sqrt(density[k]);
  }
  amplitude[0] = 0.0;
  const std::vector<double> zero_phase = InverseRealFft(amplitude, taps);
  const auto window = HannWindow(taps);
  std::vector<double> h(taps);
  for (std::size_t i = 0; i < taps; ++i) {
    h[i] = zero_phase[(i + taps / 2) % taps] * window[i];
  }
  return h;
}

}  // namespace

AudioBuffer SynthesizeSsn(const LtasProfile& profile, double duration_s,
                          uint64_t rng_seed, int sample_rate) {
  profile.Validate();
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("SSN duration must be positive, got {}",
                            duration_s));
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  if (n == 0) throw Error(ErrorCode::kEmptyAudio, "SSN duration rounds to 0");

  const auto& centers = profile.band_centers_hz;
  const std::size_t taps = kSsnFilterTaps;
  const double design_bin_hz = static_cast<double>(sample_rate) / taps;
  const std::size_t fine = taps * kSsnAnalysisOversample;

  std::vector<double> width(centers.size());
  std::vector<double> log_density(centers.size());
  for (std::size_t b = 0; b < centers.size(); ++b) {
    width[b] = BandUpperEdge(centers[b]) - BandLowerEdge(centers[b]);
    log_density[b] = profile.band_levels_db[b] - 10.0 * std::log10(width[b]);
  }

  // Frequency sampling and the Welch estimator both smear the spectrum across
  // band edges; correct the per-band densities until the band levels that
  // MeasureLtas would report for the filter match the profile.
  const WelchLeakage leakage(fine);
  std::vector<double> h;
  for (int iter = 0;; ++iter) {
    h = DesignFir(DensityOnGrid(centers, log_density, taps / 2 + 1,
                                design_bin_hz),
                  taps);
    if (iter == kSsnDesignIterations) break;
    std::vector<double> padded(fine, 0.0);
    std::copy(h.begin(), h.end(), padded.begin());
    const Spectrum response = RealFft(padded);
    std::vector<double> power(response.size());
    for (std::size_t k = 0; k < response.size(); ++k) {
      power[k] = std::norm(response[k]);
    }
    const auto realized = NormalizedLevelsDb(IntegrateBands(
        leakage.Apply(power), static_cast<double>(sample_rate) / kLtasFftSize,
        centers));
    for (std::size_t b = 0; b < centers.size(); ++b) {
      log_density[b] += profile.band_levels_db[b] - realized[b];
    }
  }

  Rng rng(rng_seed);
  const std::size_t total = n + taps - 1;
  std::vector<double> noise(total);
  for (double& v : noise) v = rng.Gaussian();
  std::vector<double> h_padded(total, 0.0);
  std::copy(h.begin(), h.end(), h_padded.begin());
  Spectrum noise_spectrum = RealFft(noise);
  const Spectrum filter_spectrum = RealFft(h_padded);
  for (std::size_t k = 0; k < noise_spectrum.size(); ++k) {
    noise_spectrum[k] *= filter_spectrum[k];
  }
  const std::vector<double> filtered = InverseRealFft(noise_spectrum, total);
  std::vector<double> out(filtered.begin() + (taps - 1), filtered.end());

  const double target_rms = std::pow(10.0, -26.0 / 20.0);
  long double ms = 0.0L;
  for (double v : out) ms += static_cast<long double>(v) * v;
  const double rms = std::sqrt(static_cast<double>(ms / out.size()));
  if (rms > 0.0) {
    for (double& v : out) v *= target_rms / rms;
  }
  return AudioBuffer(std::move(out), sample_rate);
}

std::string FormatLtasTable(const LtasProfile& profile) {
  std::string out;
  out += fmt::format("# fft_size {}\n", profile.fft_size);
  out += fmt::format("# source_duration_s {:.17g}\n", profile.source_duration_s);
  out += "# band_center_hz level_db\n";
  for (std::size_t b = 0; b < profile.band_centers_hz.size(); ++b) {
    out += fmt::format("{:.17g} {:.17g}\n", profile.band_centers_hz[b],
                       profile.band_levels_db[b]);
  }
  return out;
}

LtasProfile ParseLtasTable(const std::string& text) {
  LtasProfile profile;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string hash, key;
      fields >> hash >> key;
      if (key == "fft_size") {
        fields >> profile.fft_size;
      } else if (key == "source_duration_s") {
        fields >> profile.source_duration_s;
      }
      continue;
    }
    double center, level;
    if (!(fields >> center >> level)) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("LTAS table line {}: expected two numbers",
                              line_no));
    }
    profile.band_centers_hz.push_back(center);
    profile.band_levels_db.push_back(level);
  }
  profile.Validate();
  return profile;
}

void WriteLtasTable(const LtasProfile& profile,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  out << FormatLtasTable(profile);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

LtasProfile ReadLtasTable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseLtasTable(buffer.str());
}

}  // namespace rampho
