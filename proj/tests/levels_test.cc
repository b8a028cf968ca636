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

#include "rampho/levels.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rampho/error.h"
#include "test_util.h"

namespace rampho {
namespace {

constexpr double kSineRmsDb = -3.0103;  // 10 log10(0.5)

AudioBuffer Concat(const AudioBuffer& a, const AudioBuffer& b) {
  std::vector<double> x(a.samples().begin(), a.samples().end());
  x.insert(x.end(), b.samples().begin(), b.samples().end());
  return AudioBuffer(std::move(x), a.sample_rate());
}

AudioBuffer Silence(double seconds) {
  return AudioBuffer(std::vector<double>(static_cast<std::size_t>(seconds * 16000), 0.0),
                     16000);
}

AudioBuffer Scaled(const AudioBuffer& a, double gain) {
  std::vector<double> x(a.samples().begin(), a.samples().end());
  for (double& v : x) v *= gain;
  return AudioBuffer(std::move(x), a.sample_rate());
}

// Continuous-time model of a unit sine burst of length `on_s` followed by
// silence. The two-stage envelope of |x| (mean 2/pi) rises as
// E(1 - (1 + t/tau) e^(-t/tau)) and decays as E(1 + t/tau) e^(-t/tau); the
// samples counted active are those from the upward threshold crossing to the
// downward crossing plus the hangover. Solves the margin condition
// active_level - threshold = M as a fixed point.
struct BurstOracle {
  double active_level_db;
  double activity_factor;
};

BurstOracle SineBurstOracle(double on_s, double total_s) {
  const double tau = kEnvelopeTimeConstantS;
  const double e = 2.0 / std::numbers::pi;
  auto solve = [](auto f) {  // f decreasing in t, root in [0, 2]
    double lo = 0.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (lo + hi);
      (f(m) > 0 ? lo : hi) = m;
    }
    return lo;
  };
  double level = kSineRmsDb;
  double active_s = on_s;
  for (int it = 0; it < 200; ++it) {
    const double c = std::pow(10.0, (level - kMarginDb) / 20.0);
    const double t_on = solve([&](double t) {
      return c - e * (1 - (1 + t / tau) * std::exp(-t / tau));
    });
    const double t_off = solve([&](double t) {
      return e * (1 + t / tau) * std::exp(-t / tau) - c;
    });
    active_s = on_s - t_on + t_off + kHangoverS;
    level = 10.0 * std::log10(0.5 * (on_s - t_on) / active_s);
  }
  return BurstOracle{level, active_s / total_s};
}

TEST(ActiveSpeechLevel, FullScaleSine) {
  const ActiveLevelReport r =
      ActiveSpeechLevel(testing::Sine(1000.0, 5.0, 1.0));
  EXPECT_NEAR(r.active_level_db, kSineRmsDb, 0.2);
  EXPECT_GE(r.activity_factor, 0.98);
  EXPECT_NEAR(r.overall_rms_db, kSineRmsDb, 1e-3);
  EXPECT_NEAR(r.threshold_db, r.active_level_db - kMarginDb, 1e-9);
}

TEST(ActiveSpeechLevel, SineThenSilenceMatchesHangoverOracle) {
  const AudioBuffer x = Concat(testing::Sine(1000.0, 2.5, 1.0), Silence(2.5));
  const ActiveLevelReport r = ActiveSpeechLevel(x);
  const BurstOracle o = SineBurstOracle(2.5, 5.0);
  EXPECT_NEAR(r.active_level_db, o.active_level_db, 0.1);
  EXPECT_NEAR(r.activity_factor, o.activity_factor, 0.005);
  EXPECT_NEAR(r.overall_rms_db, kSineRmsDb - 3.0103, 1e-3);
  // Gating clearly works: the level sits far above the overall RMS.
  EXPECT_GT(r.active_level_db, r.overall_rms_db + 2.0);
}

TEST(ActiveSpeechLevel, Errors) {
  try {
    ActiveSpeechLevel(Silence(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoActiveSpeech);
  }
  try {
    ActiveSpeechLevel(testing::Sine(1000, 0.2, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
  // Far below the lowest threshold.
  EXPECT_THROW(ActiveSpeechLevel(testing::Sine(1000, 1.0, 1e-7)), Error);
}

TEST(ActiveSpeechLevel, ReportInvariantsOnSpeech) {
  for (uint64_t seed : {1, 2, 3}) {
    const ActiveLevelReport r = ActiveSpeechLevel(testing::SpeechLike(4.0, seed));
    EXPECT_GE(r.active_level_db, r.overall_rms_db - 1e-6);
    EXPECT_GT(r.activity_factor, 0.0);
    EXPECT_LE(r.activity_factor, 1.0);
  }
}

TEST(ActiveSpeechLevel, GainShiftProperty) {
  const AudioBuffer speech = LoadWav(testing::DataPath("arctic_a0007.wav"));
  const ActiveLevelReport base = ActiveSpeechLevel(speech);
  for (double gain_db : {-20.0, -6.0, 6.0}) {
    const ActiveLevelReport r =
        ActiveSpeechLevel(Scaled(speech, std::pow(10.0, gain_db / 20.0)));
    EXPECT_NEAR(r.active_level_db - base.active_level_db, gain_db, 0.05)
        << gain_db;
    EXPECT_NEAR(r.activity_factor, base.activity_factor, 0.02) << gain_db;
  }
}

TEST(ActiveSpeechLevel, AppendedSilenceKeepsLevel) {
  const AudioBuffer speech = LoadWav(testing::DataPath("arctic_a0007.wav"));
  const ActiveLevelReport a = ActiveSpeechLevel(speech);
  const ActiveLevelReport b = ActiveSpeechLevel(Concat(speech, Silence(3.0)));
  EXPECT_NEAR(b.active_level_db, a.active_level_db, 0.2);
  EXPECT_LT(b.overall_rms_db, a.overall_rms_db - 1.0);
}

TEST(ActiveSpeechLevelAnyScale, AgreesInRangeAndExtendsBelow) {
  const AudioBuffer speech = testing::SpeechLike(3.0, 9);
  const ActiveLevelReport a = ActiveSpeechLevel(speech);
  const ActiveLevelReport b = ActiveSpeechLevelAnyScale(speech);
  EXPECT_NEAR(a.active_level_db, b.active_level_db, 1e-9);
  EXPECT_NEAR(a.activity_factor, b.activity_factor, 1e-12);

  // Power-of-two scaling is exact: 2^-40 is -240.82 dB.
  const ActiveLevelReport deep =
      ActiveSpeechLevelAnyScale(Scaled(speech, std::ldexp(1.0, -40)));
  EXPECT_NEAR(deep.active_level_db,
              a.active_level_db + 20.0 * std::log10(std::ldexp(1.0, -40)), 1e-9);
  EXPECT_NEAR(deep.activity_factor, a.activity_factor, 1e-12);

  // Other scales move the threshold grid relative to the signal; the gain
  // property still holds.
  const ActiveLevelReport down =
      ActiveSpeechLevelAnyScale(Scaled(speech, 1e-6));
  EXPECT_NEAR(down.active_level_db, a.active_level_db - 120.0, 0.05);
  EXPECT_NEAR(down.activity_factor, a.activity_factor, 0.02);
}

TEST(ApplyGainToActiveLevel, SineToMinus26) {
  const AudioBuffer sine = testing::Sine(1000.0, 5.0, 1.0);
  const double measured = ActiveSpeechLevel(sine).active_level_db;
  const CalibratedAudio c = ApplyGainToActiveLevel(sine, -26.0);
  EXPECT_NEAR(c.gain_db, -26.0 - measured, 1e-12);
  EXPECT_NEAR(c.audio[100] / sine[100], std::pow(10.0, c.gain_db / 20.0), 1e-12);
  EXPECT_NEAR(ActiveSpeechLevel(c.audio).active_level_db, -26.0, 0.1);
  EXPECT_FALSE(c.clipping_warning);
}

TEST(ApplyGainToActiveLevel, ZeroGainIsIdentity) {
  const AudioBuffer speech = testing::SpeechLike(2.0, 4);
  const double measured = ActiveSpeechLevel(speech).active_level_db;
  const CalibratedAudio c = ApplyGainToActiveLevel(speech, measured);
  for (std::size_t i = 0; i < speech.size(); ++i) {
    ASSERT_NEAR(c.audio[i], speech[i], 1e-9);
  }
}

TEST(ApplyGainToActiveLevel, ClippingIsFlaggedNotApplied) {
  const AudioBuffer sine = testing::Sine(500.0, 1.0, 0.95);
  const double measured = ActiveSpeechLevel(sine).active_level_db;
  const CalibratedAudio c = ApplyGainToActiveLevel(sine, measured + 6.0);
  EXPECT_TRUE(c.clipping_warning);
  EXPECT_GT(PeakAbs(c.audio.samples()), 1.8);
}

TEST(ApplyGainToActiveLevel, SpeechRoundTrip) {
  const AudioBuffer speech = LoadWav(testing::DataPath("two_talker_24s.wav"));
  for (double target : {-16.0, -26.0, -46.0}) {
    const CalibratedAudio c = ApplyGainToActiveLevel(speech, target);
    EXPECT_NEAR(ActiveSpeechLevel(c.audio).active_level_db, target, 0.1);
  }
}

}  // namespace
}  // namespace rampho
