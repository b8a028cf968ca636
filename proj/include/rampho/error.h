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

#ifndef RAMPHO_ERROR_H_
#define RAMPHO_ERROR_H_

#include <stdexcept>
#include <string>

namespace rampho {

enum class ErrorCode {
  kFileNotFound,
  kUnsupportedFormat,
  kEmptyAudio,
  kIoError,
  kInvalidArgument,
  kSilentInput,
  kTooShort,
  kNoActiveSpeech,
  kBandOutOfRange,
  kLengthMismatch,
  kBadMagic,
  kUnsupportedVersion,
  kCorruptPayload,
  kNonFiniteValue,
  kDegenerateFrame,
  kAllFramesExcluded,
  kInsufficientData,
  kParseError,
  kValidationError,
  kMissingLogits,
  kMissingInput,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure inside the library surfaces as an Error carrying a code, so
// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  // what() without the code prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace rampho

#endif  // RAMPHO_ERROR_H_
