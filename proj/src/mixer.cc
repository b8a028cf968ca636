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

#include "rampho/mixer.h"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "rampho/error.h"
#include "rampho/levels.h"
#include "rampho/random.h"

namespace rampho {

std::string_view ConditionName(Condition condition) {
  switch (condition) {
    case Condition::kEng: return "ENG";
    case Condition::kCs: return "CS";
    case Condition::kSsn: return "SSN";
  }
  return "?";
}

std::optional<Condition> ParseCondition(std::string_view name) {
  for (Condition c : kAllConditions) {
    if (ConditionName(c) == name) return c;
  }
  return std::nullopt;
}

void SnrGrid::Validate() const {
  if (snr_points_db.empty()) {
    throw Error(ErrorCode::kValidationError, "SNR grid is empty");
  }
  for (std::size_t i = 0; i < snr_points_db.size(); ++i) {
    if (!std::isfinite(snr_points_db[i])) {
      throw Error(ErrorCode::kValidationError, "SNR grid has a non-finite point");
    }
    if (i > 0 && snr_points_db[i] <= snr_points_db[i - 1]) {
      throw Error(ErrorCode::kValidationError,
                  fmt::format("SNR grid must be strictly increasing ({} after {})",
                              snr_points_db[i], snr_points_db[i - 1]));
    }
  }
}

AudioBuffer FitMaskerLength(const AudioBuffer& masker, std::size_t target_len,
                            uint64_t rng_seed) {
  if (masker.duration_s() < kMinMaskerDurationS) {
    throw Error(ErrorCode::kTooShort,
                fmt::format("masker needs >= {} s, got {:.3f} s",
                            kMinMaskerDurationS, masker.duration_s()));
  }
  if (target_len == 0) {
    throw Error(ErrorCode::kInvalidArgument, "target length must be positive");
  }
  const auto src = masker.samples();
  if (src.size() == target_len) return masker;
  if (src.size() > target_len) {
    Rng rng(rng_seed);
    const auto start =
        static_cast<std::size_t>(rng.Below(src.size() - target_len + 1));
    return AudioBuffer(std::vector<double>(src.begin() + start,
                                           src.begin() + start + target_len),
                       masker.sample_rate());
  }

  const auto fade = static_cast<std::size_t>(
      std::llround(kLoopCrossfadeS * masker.sample_rate()));
  std::vector<double> out(src.begin(), src.end());
  out.reserve(target_len + src.size());
  while (out.size() < target_len) {
    const std::size_t seam = out.size() - fade;
    for (std::size_t i = 0; i < fade; ++i) {
      const double t = (i + 0.5) / fade * (std::numbers::pi / 2.0);
      out[seam + i] = out[seam + i] * std::cos(t) + src[i] * std::sin(t);
    }
    out.insert(out.end(), src.begin() + fade, src.end());
  }
  out.resize(target_len);
  return AudioBuffer(std::move(out), masker.sample_rate());
}

Mixture MixAtSnr(const AudioBuffer& target, const AudioBuffer& masker,
                 double snr_db, double target_level_db, Condition condition) {
  if (target.size() != masker.size() ||
      target.sample_rate() != masker.sample_rate()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("target ({} samples @ {} Hz) and masker ({} @ {} "
                            "Hz) differ",
                            target.size(), target.sample_rate(), masker.size(),
                            masker.sample_rate()));
  }
  CalibratedAudio t = ApplyGainToActiveLevel(target, target_level_db);
  CalibratedAudio m = ApplyGainToActiveLevel(masker, target_level_db - snr_db);

  const auto ts = t.audio.samples();
  const auto ms = m.audio.samples();
  std::vector<double> sum(ts.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = ts[i] + ms[i];

  const double target_level = ActiveSpeechLevelAnyScale(t.audio).active_level_db;
  const double masker_level = ActiveSpeechLevelAnyScale(m.audio).active_level_db;
  return Mixture{AudioBuffer(std::move(sum), target.sample_rate()),
                 condition,
                 snr_db,
                 target_level,
                 masker_level,
                 std::move(t.audio),
                 std::move(m.audio)};
}

const AudioBuffer& StimulusMaskers::For(Condition condition) const {
  switch (condition) {
    case Condition::kEng: return eng;
    case Condition::kCs: return cs;
    case Condition::kSsn: return ssn;
  }
  return eng;
}

StimulusMaskers PrepareMaskers(const AudioBuffer& target,
                               const AudioBuffer& eng_masker,
                               const ShieldParams& shield,
                               const LtasProfile& ltas, uint64_t rng_seed,
                               std::optional<uint64_t> ssn_seed) {
  if (target.sample_rate() != eng_masker.sample_rate()) {
    throw Error(ErrorCode::kLengthMismatch,
                "target and masker sample rates differ");
  }
  AudioBuffer eng =
      FitMaskerLength(eng_masker, target.size(), DeriveSeed(rng_seed, 1));
  AudioBuffer cs = ConcentrationShield(eng, shield);
  AudioBuffer ssn = SynthesizeSsn(ltas, target.duration_s(),
                                  ssn_seed.value_or(DeriveSeed(rng_seed, 2)),
                                  target.sample_rate());
  ssn = FitMaskerLength(ssn, target.size(), DeriveSeed(rng_seed, 3));
  return StimulusMaskers{std::move(eng), std::move(cs), std::move(ssn)};
}

std::vector<Mixture> BuildStimulusGrid(const AudioBuffer& target,
                                       const AudioBuffer& eng_masker,
                                       const ShieldParams& shield,
                                       const LtasProfile& ltas,
                                       const SnrGrid& grid,
                                       double target_level_db,
                                       uint64_t rng_seed) {
  grid.Validate();
  const StimulusMaskers maskers =
      PrepareMaskers(target, eng_masker, shield, ltas, rng_seed);
  std::vector<Mixture> mixtures;
  mixtures.reserve(grid.snr_points_db.size() * 3);
  for (Condition condition : kAllConditions) {
    for (double snr : grid.snr_points_db) {
      mixtures.push_back(MixAtSnr(target, maskers.For(condition), snr,
                                  target_level_db, condition));
    }
  }
  return mixtures;
}

}  // namespace rampho
