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

#ifndef RAMPHO_LEVELS_H_
#define RAMPHO_LEVELS_H_

#include "rampho/audio_io.h"

namespace rampho {

// ITU-T P.56 method B constants.
inline constexpr double kEnvelopeTimeConstantS = 0.03;
inline constexpr double kHangoverS = 0.2;
inline constexpr double kMarginDb = 15.9;
inline constexpr int kThresholdCount = 16;  // c_j = 2^-j, j = 0..15
inline constexpr double kMinLevelDurationS = 0.25;

struct ActiveLevelReport {
  double active_level_db;  // dBov over speech-active samples
  double overall_rms_db;   // dBov over the whole buffer
  double activity_factor;  // fraction of samples deemed active, in (0, 1]
  double threshold_db;     // interpolated activity threshold, dBov
};

ActiveLevelReport ActiveSpeechLevel(const AudioBuffer& buffer);

// Same measurement with the signal first scaled by the power of two that
// brings its peak into [0.5, 1), and the report shifted back. Power-of-two
// scaling is exact, so the result equals ActiveSpeechLevel whenever the
// threshold crossing is inside the fixed threshold range, and stays defined
// for signals far below it (e.g. a masker calibrated 100 dB down).
ActiveLevelReport ActiveSpeechLevelAnyScale(const AudioBuffer& buffer);

struct CalibratedAudio {
  AudioBuffer audio;
  double gain_db;
  double measured_level_db;  // active level before the gain
  // Some output sample exceeds 1.0 in magnitude. Samples are never clipped.
  bool clipping_warning;
};

// Scales the buffer so that its P.56 active level equals target_db.
CalibratedAudio ApplyGainToActiveLevel(const AudioBuffer& buffer,
                                       double target_db);

}  // namespace rampho

#endif  // RAMPHO_LEVELS_H_
