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

#ifndef RAMPHO_CONFIG_H_
#define RAMPHO_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rampho/masker.h"
#include "rampho/mixer.h"

namespace rampho {

enum class SsnReference { kTarget, kMasker, kBoth, kExternal };
enum class ExportClipping { kWarn, kHardClip };

struct MockProviderConfig {
  uint64_t seed = 0;
  double peakiness = 8.0;
  // Scale peakiness by g / (1 + g), g = 10^(snr_db / 20), so mixtures with a
  // louder masker yield flatter distributions.
  bool snr_scaled = true;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> target_paths;
  std::filesystem::path eng_masker_path;
  SnrGrid snr_grid;
  double target_level_db = -26.0;
  // Peak level applied to inputs after resampling; nullopt keeps them as-is.
  std::optional<double> input_peak_normalize;
  uint64_t seed = 0;
  ShieldParams shield;
  SsnReference ssn_reference = SsnReference::kBoth;
  std::filesystem::path ssn_reference_path;
  uint64_t ssn_seed = 0;
  std::optional<MockProviderConfig> mock;
  std::optional<std::filesystem::path> logits_dir;
  double silence_exclusion_blank_prob = 0.999;
  std::filesystem::path output_dir = "rampho_out";
  ExportClipping export_clipping = ExportClipping::kWarn;

  // Which seeds were given explicitly; the rest derive from `seed`.
  bool shield_seed_explicit = false;
  bool ssn_seed_explicit = false;
  bool mock_seed_explicit = false;

  // Replaces the master seed and re-derives every seed not set explicitly.
  void SetMasterSeed(uint64_t master);

  // Stable key=value lines describing the fully resolved config.
  std::vector<std::string> Describe() const;
};

// Parses YAML config text. Relative paths are resolved against base_dir.
// Unknown keys, missing required keys and invariant violations throw
// ValidationError naming the field; malformed YAML throws ParseError with
// its line.
ExperimentConfig ValidateConfig(const std::string& text,
                                const std::filesystem::path& base_dir);

ExperimentConfig LoadConfigFile(const std::filesystem::path& path);

}  // namespace rampho

#endif  // RAMPHO_CONFIG_H_
