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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "rampho/error.h"

namespace rampho {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSilentInput: return "SilentInput";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kNoActiveSpeech: return "NoActiveSpeech";
    case ErrorCode::kBandOutOfRange: return "BandOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kCorruptPayload: return "CorruptPayload";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kDegenerateFrame: return "DegenerateFrame";
    case ErrorCode::kAllFramesExcluded: return "AllFramesExcluded";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kMissingLogits: return "MissingLogits";
    case ErrorCode::kMissingInput: return "MissingInput";
  }
  return "Unknown";
}

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate must be positive, got " +
                    std::to_string(sample_rate_));
  }
  if (samples_.empty()) {
    throw Error(ErrorCode::kEmptyAudio, "audio buffer has no samples");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "non-finite sample at index " + std::to_string(i));
    }
  }
}

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutU32(std::string* out, uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out->push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

float BitsToFloat(uint32_t bits) {
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

}  // namespace

AudioBuffer LoadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = " in " + path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "not a RIFF/WAVE file" + where);
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    std::size_t size = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) {
        throw Error(ErrorCode::kUnsupportedFormat, "short fmt chunk" + where);
      }
      const unsigned char* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) {
          throw Error(ErrorCode::kUnsupportedFormat,
                      "short extensible fmt chunk" + where);
        }
        // First two bytes of the sub-format GUID carry the format tag.
        format = ReadU16(f + 24);
      }
      rate = ReadU32(f + 4);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Some writers leave the size field at 0xFFFFFFFF for streams.
      data_size = std::min(size, available);
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || data == nullptr) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "missing fmt or data chunk" + where);
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "only PCM16 and float32 are supported (format " +
                    std::to_string(format) + ", " + std::to_string(bits) +
                    " bits)" + where);
  }
  if (channels != 1 && channels != 2) {
    throw Error(ErrorCode::kUnsupportedFormat,
                std::to_string(channels) + " channels" + where);
  }
  if (rate == 0 || rate > static_cast<uint32_t>(INT32_MAX)) {
    throw Error(ErrorCode::kUnsupportedFormat, "invalid sample rate" + where);
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) {
    throw Error(ErrorCode::kEmptyAudio, "no audio frames" + where);
  }

  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* s = data + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<int16_t>(ReadU16(s)) / 32768.0;
      } else {
        acc += BitsToFloat(ReadU32(s));
      }
    }
    samples[i] = channels == 2 ? acc * 0.5 : acc;
  }
  return AudioBuffer(std::move(samples), static_cast<int>(rate));
}

void SaveWav(const AudioBuffer& buffer, const std::filesystem::path& path) {
  const auto n = static_cast<uint32_t>(buffer.size());
  const uint32_t data_bytes = n * 4;
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  PutU32(&out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  PutU32(&out, 16);
  PutU16(&out, kFormatFloat);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(buffer.sample_rate()));
  PutU32(&out, static_cast<uint32_t>(buffer.sample_rate()) * 4);
  PutU16(&out, 4);
  PutU16(&out, 32);
  out.append("data");
  PutU32(&out, data_bytes);
  for (double s : buffer.samples()) {
    float f = static_cast<float>(s);
    uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    PutU32(&out, bits);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string() +
                                         " for writing");
  }
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) {
    throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  }
}

double PeakAbs(std::span<const double> samples) {
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  return peak;
}

double MeanSquare(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  long double acc = 0.0L;
  for (double s : samples) acc += static_cast<long double>(s) * s;
  return static_cast<double>(acc / samples.size());
}

double RmsDb(std::span<const double> samples) {
  return 10.0 * std::log10(MeanSquare(samples));
}

AudioBuffer PeakNormalize(const AudioBuffer& buffer, double peak) {
  if (!(peak > 0.0 && peak <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "peak must lie in (0, 1], got " + std::to_string(peak));
  }
  const double current = PeakAbs(buffer.samples());
  if (current == 0.0) {
    throw Error(ErrorCode::kSilentInput, "cannot peak-normalize silence");
  }
  const double gain = peak / current;
  std::vector<double> out(buffer.samples().begin(), buffer.samples().end());
  for (double& s : out) s *= gain;
  return AudioBuffer(std::move(out), buffer.sample_rate());
}

}  // namespace rampho
