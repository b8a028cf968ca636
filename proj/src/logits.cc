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

#include "rampho/logits.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include <fmt/format.h>

#include "rampho/error.h"
#include "rampho/fft.h"
#include "rampho/random.h"

namespace rampho {

void ModelManifest::Validate() const {
  if (vocab.size() < 2) {
    throw Error(ErrorCode::kValidationError,
                "manifest vocabulary needs a blank and at least one token");
  }
  if (blank_index >= vocab.size()) {
    throw Error(ErrorCode::kValidationError,
                fmt::format("blank_index {} out of range for vocab_size {}",
                            blank_index, vocab.size()));
  }
  if (!(frame_hop_s > 0.0f) || !std::isfinite(frame_hop_s)) {
    throw Error(ErrorCode::kValidationError, "frame_hop_s must be positive");
  }
  auto has_newline = [](const std::string& s) {
    return s.find('\n') != std::string::npos;
  };
  if (has_newline(model_id)) {
    throw Error(ErrorCode::kValidationError, "model_id contains a newline");
  }
  for (const auto& t : vocab) {
    if (has_newline(t)) {
      throw Error(ErrorCode::kValidationError, "token contains a newline");
    }
  }
  for (const auto& n : notes) {
    if (has_newline(n)) {
      throw Error(ErrorCode::kValidationError, "note contains a newline");
    }
  }
}

ModelManifest DefaultManifest() {
  ModelManifest m;
  m.model_id = "facebook/wav2vec2-base-960h";
  m.vocab = {"<pad>", "<s>", "</s>", "<unk>", "|", "E", "T", "A",
             "O",     "N",   "I",    "H",     "S", "R", "D", "L",
             "U",     "M",   "W",    "C",     "F", "G", "Y", "P",
             "B",     "V",   "K",    "'",     "X", "J", "Q", "Z"};
  m.blank_index = 0;
  m.frame_hop_s = 0.02f;
  return m;
}

LogitsMatrix::LogitsMatrix(std::vector<float> values, std::size_t frames,
                           ModelManifest manifest, std::string source_audio_id)
    : values_(std::move(values)),
      frames_(frames),
      manifest_(std::move(manifest)),
      source_audio_id_(std::move(source_audio_id)) {
  manifest_.Validate();
  if (frames_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "logits matrix has no frames");
  }
  if (values_.size() != frames_ * manifest_.vocab_size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} values do not form {} rows of width {}",
                            values_.size(), frames_, manifest_.vocab_size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  fmt::format("non-finite logit at frame {}, token {}",
                              i / manifest_.vocab_size(),
                              i % manifest_.vocab_size()));
    }
  }
}

namespace {

void PutU16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string* out, uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out->push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

void PutF32(std::string* out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  PutU32(out, bits);
}

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  bool Has(std::size_t n) const { return bytes_.size() - pos_ >= n; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  uint16_t U16() {
    uint16_t v = static_cast<uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  uint32_t U32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  float F32() {
    uint32_t bits = U32();
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
  }
  std::string Text(std::size_t n) {
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

// Splits newline-terminated lines; a missing final terminator is tolerated.
std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::string EncodeManifest(const ModelManifest& manifest) {
  std::string text = manifest.model_id + "\n";
  for (const auto& t : manifest.vocab) text += t + "\n";
  for (const auto& n : manifest.notes) text += n + "\n";
  return text;
}

std::string EncodeLogits(const LogitsMatrix& matrix) {
  const ModelManifest& m = matrix.manifest();
  const std::string manifest = EncodeManifest(m);
  std::string out;
  out.reserve(kLogitsHeaderBytes + 4 + manifest.size() +
              matrix.values().size() * 4);
  out.append(kLogitsMagic, 4);
  PutU16(&out, kLogitsVersion);
  PutU16(&out, 0);
  PutU32(&out, static_cast<uint32_t>(m.vocab_size()));
  PutU32(&out, static_cast<uint32_t>(matrix.frames()));
  PutF32(&out, m.frame_hop_s);
  PutU32(&out, m.blank_index);
  PutU32(&out, static_cast<uint32_t>(manifest.size()));
  out += manifest;
  for (float v : matrix.values()) PutF32(&out, v);
  return out;
}

LogitsMatrix DecodeLogits(std::span<const unsigned char> bytes,
                          const std::string& source_audio_id) {
  Reader r(bytes);
  if (!r.Has(4) || std::memcmp(bytes.data(), kLogitsMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, source_audio_id + ": not a W2VL file");
  }
  r.Text(4);
  if (!r.Has(kLogitsHeaderBytes - 4 + 4)) {
    throw Error(ErrorCode::kCorruptPayload,
                source_audio_id + ": truncated header");
  }
  const uint16_t version = r.U16();
  if (version != kLogitsVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                fmt::format("{}: version {} (expected {})", source_audio_id,
                            version, kLogitsVersion));
  }
  r.U16();  // reserved
  const uint32_t vocab_size = r.U32();
  const uint32_t frame_count = r.U32();
  const float hop = r.F32();
  const uint32_t blank = r.U32();
  const uint32_t manifest_len = r.U32();
  if (!r.Has(manifest_len)) {
    throw Error(ErrorCode::kCorruptPayload,
                source_audio_id + ": truncated manifest");
  }
  const std::vector<std::string> lines = SplitLines(r.Text(manifest_len));
  if (lines.size() < 1 + static_cast<std::size_t>(vocab_size)) {
    throw Error(ErrorCode::kCorruptPayload,
                fmt::format("{}: manifest lists {} tokens, header says {}",
                            source_audio_id,
                            lines.empty() ? 0 : lines.size() - 1, vocab_size));
  }
  ModelManifest manifest;
  manifest.model_id = lines[0];
  manifest.vocab.assign(lines.begin() + 1, lines.begin() + 1 + vocab_size);
  manifest.notes.assign(lines.begin() + 1 + vocab_size, lines.end());
  manifest.blank_index = blank;
  manifest.frame_hop_s = hop;
  manifest.Validate();

  const uint64_t payload =
      static_cast<uint64_t>(frame_count) * vocab_size * 4;
  if (r.remaining() != payload) {
    throw Error(ErrorCode::kCorruptPayload,
                fmt::format("{}: payload is {} bytes, header implies {}",
                            source_audio_id, r.remaining(), payload));
  }
  std::vector<float> values(static_cast<std::size_t>(frame_count) * vocab_size);
  for (float& v : values) v = r.F32();
  return LogitsMatrix(std::move(values), frame_count, std::move(manifest),
                      source_audio_id);
}

void WriteLogitsFile(const LogitsMatrix& matrix,
                     const std::filesystem::path& path) {
  const std::string bytes = EncodeLogits(matrix);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

LogitsMatrix ReadLogitsFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return DecodeLogits(bytes, path.filename().string());
}

namespace {

struct FrameShape {
  double centroid_hz = 0.0;
  // Geometric over arithmetic mean of the power spectrum: near 0 for
  // harmonic frames, about 0.56 for white noise.
  double flatness = 1.0;
};

FrameShape AnalyzeFrame(std::span<const double> frame, double sample_rate) {
  std::vector<double> windowed(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    windowed[i] = frame[i] * (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i /
                                                   frame.size()));
  }
  const Spectrum s = RealFft(windowed);
  const double bin_hz = sample_rate / frame.size();
  double num = 0.0, den = 0.0, log_sum = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double p = std::norm(s[k]);
    num += p * k * bin_hz;
    den += p;
    log_sum += std::log(p + 1e-300);
  }
  FrameShape shape;
  if (den > 0.0) {
    const double bins = static_cast<double>(s.size() - 1);
    shape.centroid_hz = num / den;
    shape.flatness = std::clamp(std::exp(log_sum / bins) / (den / bins), 0.0, 1.0);
  }
  return shape;
}

}  // namespace

LogitsMatrix MockLogits(const AudioBuffer& buffer,
                        const ModelManifest& manifest, uint64_t rng_seed,
                        double peakiness, const std::string& source_audio_id) {
  manifest.Validate();
  if (!(peakiness >= 0.0) || !std::isfinite(peakiness)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("peakiness must be >= 0, got {}", peakiness));
  }
  const auto hop = static_cast<std::size_t>(
      std::llround(static_cast<double>(manifest.frame_hop_s) *
                   buffer.sample_rate()));
  const std::size_t frames = buffer.size() / hop;
  if (frames == 0) {
    throw Error(ErrorCode::kTooShort, "audio shorter than one logits frame");
  }
  const std::size_t width = manifest.vocab_size();
  std::vector<std::size_t> active_tokens;
  for (std::size_t t = 0; t < width; ++t) {
    if (t != manifest.blank_index) active_tokens.push_back(t);
  }

  std::vector<float> values(frames * width, 0.0f);
  const auto samples = buffer.samples();
  for (std::size_t f = 0; f < frames; ++f) {
    const std::span<const double> frame(samples.data() + f * hop, hop);
    float* row = values.data() + f * width;
    double ms = 0.0;
    for (double v : frame) ms += v * v;
    ms /= hop;
    const double level_db = ms > 0.0 ? 10.0 * std::log10(ms) : -400.0;
    if (level_db < kMockSilenceDb) {
      row[manifest.blank_index] = kMockBlankGap;
      continue;
    }
    // Quarter-octave centroid classes relative to 50 Hz pick the token;
    // tonality sets how confident the frame is.
    const FrameShape shape = AnalyzeFrame(frame, buffer.sample_rate());
    const auto centroid_class = static_cast<uint64_t>(std::max(
        0.0, std::floor(4.0 * std::log2(std::max(shape.centroid_hz, 50.0) /
                                        50.0))));
    const uint64_t pick = DeriveSeed(rng_seed, centroid_class) %
                          active_tokens.size();
    row[active_tokens[pick]] =
        static_cast<float>(peakiness * (1.0 - shape.flatness));
  }
  return LogitsMatrix(std::move(values), frames, manifest, source_audio_id);
}

}  // namespace rampho
