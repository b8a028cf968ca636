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

#ifndef RAMPHO_MIXER_H_
#define RAMPHO_MIXER_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rampho/audio_io.h"
#include "rampho/masker.h"

namespace rampho {

enum class Condition {
  kEng,  // intelligible competing talker, unmodified
  kCs,   // the same talker after ConcentrationShield
  kSsn,  // speech-shaped noise
};

inline constexpr Condition kAllConditions[] = {Condition::kEng, Condition::kCs,
                                               Condition::kSsn};

std::string_view ConditionName(Condition condition);
std::optional<Condition> ParseCondition(std::string_view name);

// Points at or above this SNR are the pristine baseline.
inline constexpr double kPristineSnrDb = 100.0;

struct SnrGrid {
  std::vector<double> snr_points_db = {0, 5, 10, 15, 20, 100};

  // Strictly increasing, finite, non-empty.
  void Validate() const;
};

struct Mixture {
  AudioBuffer audio;
  Condition condition;
  double snr_db;
  // Re-measured on the calibrated components before summation.
  double target_active_level_db;
  double masker_active_level_db;
  AudioBuffer calibrated_target;
  AudioBuffer calibrated_masker;
};

inline constexpr double kMinMaskerDurationS = 1.0;
inline constexpr double kLoopCrossfadeS = 0.05;

// Seeded contiguous excerpt of a longer masker, or equal-power crossfaded
// loops of a shorter one; the result always has exactly target_len samples.
AudioBuffer FitMaskerLength(const AudioBuffer& masker, std::size_t target_len,
                            uint64_t rng_seed);

// Target calibrated to target_level_db, masker to target_level_db - snr_db,
// both on P.56 active levels; the mixture is their plain sum.
Mixture MixAtSnr(const AudioBuffer& target, const AudioBuffer& masker,
                 double snr_db, double target_level_db,
                 Condition condition = Condition::kEng);

struct StimulusMaskers {
  AudioBuffer eng;
  AudioBuffer cs;
  AudioBuffer ssn;

  const AudioBuffer& For(Condition condition) const;
};

// Length-fitted ENG excerpt, its shielded version, and SSN of the target's
// duration. One excerpt per condition is reused across all SNRs. The SSN
// noise seed derives from rng_seed unless given.
StimulusMaskers PrepareMaskers(const AudioBuffer& target,
                               const AudioBuffer& eng_masker,
                               const ShieldParams& shield,
                               const LtasProfile& ltas, uint64_t rng_seed,
                               std::optional<uint64_t> ssn_seed = std::nullopt);

// |grid| x 3 mixtures, condition-major in ENG, CS, SSN order.
std::vector<Mixture> BuildStimulusGrid(const AudioBuffer& target,
                                       const AudioBuffer& eng_masker,
                                       const ShieldParams& shield,
                                       const LtasProfile& ltas,
                                       const SnrGrid& grid,
                                       double target_level_db,
                                       uint64_t rng_seed);

}  // namespace rampho

#endif  // RAMPHO_MIXER_H_
