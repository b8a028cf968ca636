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

#include "rampho/audio_io.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "rampho/error.h"
#include "test_util.h"

namespace rampho {
namespace {

namespace fs = std::filesystem;

// Minimal independent WAV writer for PCM16 / float32 / arbitrary format tags.
void WriteRawWav(const fs::path& path, uint16_t format, uint16_t channels,
                 uint32_t rate, uint16_t bits, const std::string& data) {
  auto u16 = [](std::string* s, uint16_t v) {
    s->push_back(static_cast<char>(v & 0xff));
    s->push_back(static_cast<char>(v >> 8));
  };
  auto u32 = [&](std::string* s, uint32_t v) {
    u16(s, v & 0xffff);
    u16(s, v >> 16);
  };
  std::string out = "RIFF";
  u32(&out, static_cast<uint32_t>(36 + data.size()));
  out += "WAVEfmt ";
  u32(&out, 16);
  u16(&out, format);
  u16(&out, channels);
  u32(&out, rate);
  u32(&out, rate * channels * bits / 8);
  u16(&out, static_cast<uint16_t>(channels * bits / 8));
  u16(&out, bits);
  out += "data";
  u32(&out, static_cast<uint32_t>(data.size()));
  out += data;
  std::ofstream(path, std::ios::binary) << out;
}

std::string Pcm16(std::initializer_list<int16_t> v) {
  std::string s;
  for (int16_t x : v) {
    s.push_back(static_cast<char>(x & 0xff));
    s.push_back(static_cast<char>((x >> 8) & 0xff));
  }
  return s;
}

std::string Float32(std::initializer_list<float> v) {
  std::string s(v.size() * 4, '\0');
  std::memcpy(s.data(), std::data(v), s.size());
  return s;
}

class AudioIoTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::MakeTempDir("audio_io"); }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(AudioIoTest, Pcm16MonoScaling) {
  WriteRawWav(dir_ / "a.wav", 1, 1, 16000, 16, Pcm16({0, 16384, -32768}));
  const AudioBuffer b = LoadWav(dir_ / "a.wav");
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], 0.0);
  EXPECT_EQ(b[1], 0.5);
  EXPECT_EQ(b[2], -1.0);
  EXPECT_EQ(b.sample_rate(), 16000);
}

TEST_F(AudioIoTest, StereoIsAveraged) {
  WriteRawWav(dir_ / "s.wav", 3, 2, 16000, 32, Float32({1.0f, 0.0f}));
  const AudioBuffer b = LoadWav(dir_ / "s.wav");
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], 0.5);
}

TEST_F(AudioIoTest, ZeroFramesIsEmptyAudio) {
  WriteRawWav(dir_ / "e.wav", 1, 1, 16000, 16, "");
  try {
    LoadWav(dir_ / "e.wav");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyAudio);
  }
}

TEST_F(AudioIoTest, RejectsOtherFormats) {
  WriteRawWav(dir_ / "alaw.wav", 6, 1, 8000, 8, "abcd");
  WriteRawWav(dir_ / "pcm24.wav", 1, 1, 16000, 24, "abcdef");
  for (const char* name : {"alaw.wav", "pcm24.wav"}) {
    try {
      LoadWav(dir_ / name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUnsupportedFormat) << name;
    }
  }
  std::ofstream(dir_ / "junk.wav") << "not a wav file at all, clearly";
  EXPECT_THROW(LoadWav(dir_ / "junk.wav"), Error);
}

TEST_F(AudioIoTest, MissingFile) {
  try {
    LoadWav(dir_ / "nope.wav");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
  }
}

TEST_F(AudioIoTest, FloatRoundTripIsBitExact) {
  const AudioBuffer small(std::vector<double>{0.25, -0.75}, 16000);
  SaveWav(small, dir_ / "r.wav");
  const AudioBuffer back = LoadWav(dir_ / "r.wav");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], 0.25);
  EXPECT_EQ(back[1], -0.75);
  EXPECT_EQ(fs::file_size(dir_ / "r.wav"), 44u + 8u);

  // Seeded noise quantized to float32 first, as every loaded buffer is.
  const AudioBuffer noise = testing::WhiteNoise(1.0, 0.3, 11);
  std::vector<double> q(noise.samples().begin(), noise.samples().end());
  for (double& v : q) v = static_cast<float>(v);
  SaveWav(AudioBuffer(q, 16000), dir_ / "n.wav");
  const AudioBuffer n = LoadWav(dir_ / "n.wav");
  ASSERT_EQ(n.size(), q.size());
  double max_diff = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(n[i] - q[i]));
  }
  EXPECT_EQ(max_diff, 0.0);

  // And a second save of the loaded buffer is byte-identical.
  SaveWav(n, dir_ / "n2.wav");
  std::ifstream a(dir_ / "n.wav", std::ios::binary), b(dir_ / "n2.wav", std::ios::binary);
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}),
            std::string(std::istreambuf_iterator<char>(b), {}));
}

TEST_F(AudioIoTest, UnwritablePathIsIoError) {
  const AudioBuffer b(std::vector<double>{0.1}, 16000);
  try {
    SaveWav(b, dir_ / "missing_dir" / "x.wav");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST_F(AudioIoTest, LoadsBundledSamples) {
  const AudioBuffer a = LoadWav(testing::DataPath("arctic_a0007.wav"));
  EXPECT_EQ(a.sample_rate(), 16000);
  EXPECT_NEAR(a.duration_s(), 4.0, 0.01);
  const AudioBuffer t = LoadWav(testing::DataPath("two_talker_24s.wav"));
  EXPECT_NEAR(t.duration_s(), 24.0, 0.01);
}

TEST(AudioBuffer, Invariants) {
  EXPECT_THROW(AudioBuffer(std::vector<double>{}, 16000), Error);
  EXPECT_THROW(AudioBuffer(std::vector<double>{0.0}, 0), Error);
  EXPECT_THROW(AudioBuffer(std::vector<double>{
                               std::numeric_limits<double>::quiet_NaN()},
                           16000),
               Error);
  EXPECT_THROW(AudioBuffer(std::vector<double>{
                               std::numeric_limits<double>::infinity()},
                           16000),
               Error);
}

TEST(PeakNormalize, Examples) {
  const AudioBuffer b(std::vector<double>{0.5, -0.25}, 16000);
  const AudioBuffer n = PeakNormalize(b, 1.0);
  EXPECT_NEAR(n[0], 1.0, 1e-12);
  EXPECT_NEAR(n[1], -0.5, 1e-12);

  const AudioBuffer again = PeakNormalize(n, 1.0);
  for (std::size_t i = 0; i < n.size(); ++i) EXPECT_NEAR(again[i], n[i], 1e-9);

  try {
    PeakNormalize(AudioBuffer(std::vector<double>(100, 0.0), 16000), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSilentInput);
  }
  EXPECT_THROW(PeakNormalize(b, 0.0), Error);
  EXPECT_THROW(PeakNormalize(b, 1.5), Error);
}

TEST(PeakNormalize, ShapeAndPeakOnNoise) {
  const AudioBuffer x = testing::WhiteNoise(0.5, 0.1, 3);
  const AudioBuffer y = PeakNormalize(x, 0.8);
  EXPECT_NEAR(PeakAbs(y.samples()), 0.8, 1e-9);
  const double k = y[0] / x[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(y[i], k * x[i], 1e-12);
  }
}

TEST(Levels, RmsDbOfFullScaleSquare) {
  std::vector<double> sq(1600);
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = (i / 8) % 2 ? 1.0 : -1.0;
  EXPECT_NEAR(RmsDb(sq), 0.0, 1e-12);
}

}  // namespace
}  // namespace rampho
