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

#ifndef RAMPHO_RESAMPLE_H_
#define RAMPHO_RESAMPLE_H_

#include "rampho/audio_io.h"

namespace rampho {

// Rational-ratio polyphase resampler with a Kaiser-windowed sinc kernel.
// The kernel spans 2 * kResampleZeroCrossings zero crossings of the lower of
// the two rates and cuts off at that rate's Nyquist frequency.
inline constexpr int kResampleZeroCrossings = 256;
inline constexpr double kResampleKaiserBeta = 8.0;

// Output length is round(n * target_rate / input_rate). Same-rate input is
// returned unchanged.
AudioBuffer Resample(const AudioBuffer& buffer, int target_rate);

}  // namespace rampho

#endif  // RAMPHO_RESAMPLE_H_
