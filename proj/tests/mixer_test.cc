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

#include <gtest/gtest.h>

#include "rampho/error.h"
#include "rampho/levels.h"
#include "rampho/masker.h"
#include "test_util.h"

namespace rampho {
namespace {

class MixerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    target_ = new AudioBuffer(LoadWav(testing::DataPath("arctic_a0007.wav")));
    masker_ = new AudioBuffer(LoadWav(testing::DataPath("two_talker_24s.wav")));
    std::vector<double> ref(target_->samples().begin(), target_->samples().end());
    ref.insert(ref.end(), masker_->samples().begin(), masker_->samples().end());
    ltas_ = new LtasProfile(MeasureLtas(AudioBuffer(ref, 16000)));
  }
  static void TearDownTestSuite() {
    delete target_;
    delete masker_;
    delete ltas_;
  }
  static AudioBuffer* target_;
  static AudioBuffer* masker_;
  static LtasProfile* ltas_;
};

AudioBuffer* MixerTest::target_ = nullptr;
AudioBuffer* MixerTest::masker_ = nullptr;
LtasProfile* MixerTest::ltas_ = nullptr;

TEST(SnrGrid, DefaultAndValidation) {
  const SnrGrid g;
  EXPECT_EQ(g.snr_points_db, (std::vector<double>{0, 5, 10, 15, 20, 100}));
  EXPECT_NO_THROW(g.Validate());
  EXPECT_THROW((SnrGrid{{0, 5, 5}}.Validate()), Error);
  EXPECT_THROW((SnrGrid{{10, 5}}.Validate()), Error);
  EXPECT_THROW((SnrGrid{{}}.Validate()), Error);
  EXPECT_THROW((SnrGrid{{0, std::nan("")}}.Validate()), Error);
}

TEST(Condition, Names) {
  EXPECT_EQ(ConditionName(Condition::kEng), "ENG");
  EXPECT_EQ(ConditionName(Condition::kCs), "CS");
  EXPECT_EQ(ConditionName(Condition::kSsn), "SSN");
  EXPECT_EQ(ParseCondition("CS"), Condition::kCs);
  EXPECT_FALSE(ParseCondition("cs").has_value());
}

TEST(FitMaskerLength, EqualLengthIsIdentity) {
  const AudioBuffer m = testing::WhiteNoise(2.0, 0.1, 1);
  const AudioBuffer y = FitMaskerLength(m, m.size(), 9);
  for (std::size_t i = 0; i < m.size(); ++i) ASSERT_EQ(y[i], m[i]);
}

TEST(FitMaskerLength, ExcerptIsSeededAndContiguous) {
  const AudioBuffer m = testing::WhiteNoise(10.0, 0.1, 2);
  const std::size_t len = 4 * 16000;
  const AudioBuffer a = FitMaskerLength(m, len, 5);
  const AudioBuffer b = FitMaskerLength(m, len, 5);
  ASSERT_EQ(a.size(), len);
  for (std::size_t i = 0; i < len; ++i) ASSERT_EQ(a[i], b[i]);
  // Locate the excerpt in the source.
  std::size_t offset = m.size();
  for (std::size_t o = 0; o + len <= m.size(); ++o) {
    if (m[o] == a[0] && m[o + 1] == a[1]) offset = o;
  }
  ASSERT_LT(offset, m.size());
  for (std::size_t i = 0; i < len; ++i) ASSERT_EQ(a[i], m[offset + i]);
  // Different seeds usually pick different excerpts.
  int differing = 0;
  for (uint64_t s = 6; s < 16; ++s) differing += FitMaskerLength(m, len, s)[0] != a[0];
  EXPECT_GE(differing, 8);
}

TEST(FitMaskerLength, LoopingKeepsLevel) {
  const AudioBuffer m = testing::WhiteNoise(2.0, 0.1, 3);
  const AudioBuffer y = FitMaskerLength(m, 5 * 16000, 1);
  ASSERT_EQ(y.size(), 5u * 16000u);
  EXPECT_NEAR(RmsDb(y.samples()), RmsDb(m.samples()), 1.0);
  // Crossfades leave no block of near-zero output.
  for (std::size_t i = 0; i + 160 <= y.size(); i += 160) {
    EXPECT_GT(RmsDb(y.samples().subspan(i, 160)), RmsDb(m.samples()) - 6.0) << i;
  }
}

TEST(FitMaskerLength, Errors) {
  try {
    FitMaskerLength(testing::WhiteNoise(0.5, 0.1, 1), 16000, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
}

TEST_F(MixerTest, SumIsExactAndLevelsHold) {
  const AudioBuffer masker = FitMaskerLength(*masker_, target_->size(), 4);
  for (double snr : {0.0, 7.5, 20.0}) {
    const Mixture m = MixAtSnr(*target_, masker, snr, -26.0);
    EXPECT_NEAR(m.target_active_level_db - m.masker_active_level_db, snr, 0.5);
    EXPECT_NEAR(m.target_active_level_db, -26.0, 0.1);
    for (std::size_t i = 0; i < m.audio.size(); ++i) {
      ASSERT_EQ(m.audio[i], m.calibrated_target[i] + m.calibrated_masker[i]);
    }
    EXPECT_NEAR(ActiveSpeechLevel(m.calibrated_masker).active_level_db,
                m.masker_active_level_db, 1e-9);
  }
}

TEST_F(MixerTest, PristineCellIsTheCalibratedTarget) {
  const AudioBuffer masker = FitMaskerLength(*masker_, target_->size(), 4);
  const Mixture m = MixAtSnr(*target_, masker, 100.0, -26.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.audio.size(); ++i) {
    worst = std::max(worst, std::abs(m.audio[i] - m.calibrated_target[i]));
  }
  EXPECT_LE(worst, 1e-4);
  EXPECT_NEAR(m.target_active_level_db - m.masker_active_level_db, 100.0, 0.5);
}

TEST_F(MixerTest, Errors) {
  const AudioBuffer silent(std::vector<double>(target_->size(), 0.0), 16000);
  try {
    MixAtSnr(*target_, silent, 0.0, -26.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoActiveSpeech);
  }
  const AudioBuffer shorter = FitMaskerLength(*masker_, target_->size() - 1, 1);
  try {
    MixAtSnr(*target_, shorter, 0.0, -26.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST_F(MixerTest, GridShapeOrderAndDeterminism) {
  ShieldParams shield;
  shield.rng_seed = 17;
  const SnrGrid grid;
  const auto a = BuildStimulusGrid(*target_, *masker_, shield, *ltas_, grid, -26.0, 3);
  ASSERT_EQ(a.size(), 18u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].condition, kAllConditions[i / 6]);
    EXPECT_EQ(a[i].snr_db, grid.snr_points_db[i % 6]);
    EXPECT_EQ(a[i].audio.size(), target_->size());
    EXPECT_NEAR(a[i].target_active_level_db - a[i].masker_active_level_db,
                a[i].snr_db, 0.5);
  }
  const auto b = BuildStimulusGrid(*target_, *masker_, shield, *ltas_, grid, -26.0, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].audio.size(); ++j) {
      ASSERT_EQ(a[i].audio[j], b[i].audio[j]);
    }
  }
  EXPECT_EQ(BuildStimulusGrid(*target_, *masker_, shield, *ltas_, SnrGrid{{0}}, -26.0, 3).size(), 3u);

  // Condition parity at each SNR.
  for (int s = 0; s < 6; ++s) {
    const double eng = a[s].masker_active_level_db;
    EXPECT_NEAR(a[6 + s].masker_active_level_db, eng, 0.5);
    EXPECT_NEAR(a[12 + s].masker_active_level_db, eng, 0.5);
  }
}

TEST_F(MixerTest, CsIsTheShieldedEngExcerpt) {
  ShieldParams shield;
  shield.rng_seed = 17;
  const StimulusMaskers m = PrepareMaskers(*target_, *masker_, shield, *ltas_, 3);
  const AudioBuffer expected = ConcentrationShield(m.eng, shield);
  for (std::size_t i = 0; i < expected.size(); ++i) ASSERT_EQ(m.cs[i], expected[i]);
  EXPECT_EQ(m.ssn.size(), target_->size());
  EXPECT_LT(EnvelopeFluctuation(m.ssn), 0.5 * EnvelopeFluctuation(m.eng));
}

}  // namespace
}  // namespace rampho
