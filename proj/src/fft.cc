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

#include "rampho/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace rampho {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {}
  ~Plan() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void Execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

fftw_complex* AsFftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

Spectrum RealFft(std::span<const double> signal) {
  const int n = static_cast<int>(signal.size());
  std::vector<double> in(signal.begin(), signal.end());
  Spectrum out(signal.size() / 2 + 1);
  if (n == 0) return out;
  fftw_plan raw;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    raw = fftw_plan_dft_r2c_1d(n, in.data(), AsFftw(out.data()),
                               FFTW_ESTIMATE);
  }
  Plan plan(raw);
  plan.Execute();
  return out;
}

std::vector<double> InverseRealFft(const Spectrum& half_spectrum,
                                   std::size_t n) {
  std::vector<double> out(n);
  if (n == 0) return out;
  Spectrum in(n / 2 + 1);
  std::copy_n(half_spectrum.begin(), std::min(in.size(), half_spectrum.size()),
              in.begin());
  in[0] = in[0].real();
  if (n % 2 == 0) in[n / 2] = in[n / 2].real();
  fftw_plan raw;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    // c2r destroys its input; `in` is a private copy.
    raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), AsFftw(in.data()),
                               out.data(), FFTW_ESTIMATE);
  }
  Plan plan(raw);
  plan.Execute();
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> ComplexFft(
    std::span<const std::complex<double>> input, int sign) {
  std::vector<std::complex<double>> in(input.begin(), input.end());
  std::vector<std::complex<double>> out(input.size());
  if (input.empty()) return out;
  fftw_plan raw;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    raw = fftw_plan_dft_1d(static_cast<int>(in.size()), AsFftw(in.data()),
                           AsFftw(out.data()),
                           sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  }
  Plan plan(raw);
  plan.Execute();
  return out;
}

}  // namespace rampho
