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

#ifndef RAMPHO_LOGITS_H_
#define RAMPHO_LOGITS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rampho/audio_io.h"

namespace rampho {

struct ModelManifest {
  std::string model_id;
  std::vector<std::string> vocab;
  uint32_t blank_index = 0;
  float frame_hop_s = 0.02f;
  // Free-form lines stored after the token list (e.g. the normalization an
  // exporter applied). Preserved on round trip.
  std::vector<std::string> notes;

  std::size_t vocab_size() const { return vocab.size(); }
  std::size_t active_vocab_size() const { return vocab.size() - 1; }

  // blank_index < vocab_size, vocab_size >= 2, frame_hop_s > 0, no token or
  // note contains a newline.
  void Validate() const;

  bool operator==(const ModelManifest&) const = default;
};

// Token list of the wav2vec2-base-960h CTC head ("<pad>" is the blank).
ModelManifest DefaultManifest();

// Frames x vocab raw pre-softmax logits. Immutable once constructed.
class LogitsMatrix {
 public:
  LogitsMatrix(std::vector<float> values, std::size_t frames,
               ModelManifest manifest, std::string source_audio_id);

  std::size_t frames() const { return frames_; }
  std::size_t vocab_size() const { return manifest_.vocab_size(); }
  std::span<const float> row(std::size_t frame) const {
    return {values_.data() + frame * vocab_size(), vocab_size()};
  }
  std::span<const float> values() const { return values_; }
  const ModelManifest& manifest() const { return manifest_; }
  const std::string& source_audio_id() const { return source_audio_id_; }

 private:
  std::vector<float> values_;
  std::size_t frames_;
  ModelManifest manifest_;
  std::string source_audio_id_;
};

// Little-endian layout:
//   "W2VL" | u16 version=1 | u16 0 | u32 vocab_size | u32 frame_count |
//   f32 frame_hop_s | u32 blank_index | u32 manifest_len | manifest |
//   frame_count * vocab_size f32, frame-major.
// Manifest text: model_id '\n', then each token followed by '\n', then each
// note followed by '\n'.
inline constexpr char kLogitsMagic[4] = {'W', '2', 'V', 'L'};
inline constexpr uint16_t kLogitsVersion = 1;
inline constexpr std::size_t kLogitsHeaderBytes = 24;

std::string EncodeManifest(const ModelManifest& manifest);
std::string EncodeLogits(const LogitsMatrix& matrix);
// source_audio_id is not part of the format; pass the file name or similar.
LogitsMatrix DecodeLogits(std::span<const unsigned char> bytes,
                          const std::string& source_audio_id);

void WriteLogitsFile(const LogitsMatrix& matrix,
                     const std::filesystem::path& path);
LogitsMatrix ReadLogitsFile(const std::filesystem::path& path);

// Frames quieter than this get blank-dominant rows.
inline constexpr double kMockSilenceDb = -50.0;
inline constexpr float kMockBlankGap = 16.0f;

// Deterministic stand-in for the acoustic model: one row per 20 ms hop,
// blank-dominant rows on silent frames, otherwise a peak of height
// peakiness * (1 - spectral flatness) on a token picked by hashing the
// frame's quantized spectral centroid with the seed.
LogitsMatrix MockLogits(const AudioBuffer& buffer,
                        const ModelManifest& manifest, uint64_t rng_seed,
                        double peakiness,
                        const std::string& source_audio_id = "mock");

}  // namespace rampho

#endif  // RAMPHO_LOGITS_H_
