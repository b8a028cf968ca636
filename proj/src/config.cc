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

#include "rampho/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "rampho/error.h"
#include "rampho/random.h"

namespace rampho {

namespace {

constexpr uint64_t kShieldSeedStream = 101;
constexpr uint64_t kSsnSeedStream = 102;
constexpr uint64_t kMockSeedStream = 103;

[[noreturn]] void Invalid(const std::string& field, const YAML::Node& node,
                          const std::string& why) {
  const YAML::Mark mark = node.Mark();
  const std::string where =
      mark.is_null() ? "" : fmt::format(" (line {})", mark.line + 1);
  throw Error(ErrorCode::kValidationError,
              fmt::format("field '{}'{}: {}", field, where, why));
}

void CheckKeys(const YAML::Node& map, const std::string& prefix,
               const std::set<std::string>& allowed) {
  if (!map.IsMap()) Invalid(prefix.empty() ? "<root>" : prefix, map,
                            "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      Invalid(prefix.empty() ? key : prefix + "." + key, kv.first,
              "unknown key");
    }
  }
}

template <typename T>
T Scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) Invalid(field, node, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    Invalid(field, node, "could not convert '" + node.Scalar() + "'");
  }
}

double FiniteNumber(const YAML::Node& node, const std::string& field) {
  const auto v = Scalar<double>(node, field);
  if (!std::isfinite(v)) Invalid(field, node, "must be finite");
  return v;
}

std::filesystem::path ResolvePath(const YAML::Node& node,
                                  const std::string& field,
                                  const std::filesystem::path& base_dir) {
  std::filesystem::path p = Scalar<std::string>(node, field);
  if (p.empty()) Invalid(field, node, "empty path");
  return p.is_absolute() ? p : base_dir / p;
}

std::filesystem::path ExistingFile(const YAML::Node& node,
                                   const std::string& field,
                                   const std::filesystem::path& base_dir) {
  auto p = ResolvePath(node, field, base_dir);
  if (!std::filesystem::is_regular_file(p)) {
    Invalid(field, node, "file does not exist: " + p.string());
  }
  return p;
}

std::string SeedText(uint64_t seed, bool explicit_seed) {
  return fmt::format("{}{}", seed, explicit_seed ? "" : " (derived)");
}

}  // namespace

void ExperimentConfig::SetMasterSeed(uint64_t master) {
  seed = master;
  if (!shield_seed_explicit) shield.rng_seed = DeriveSeed(seed, kShieldSeedStream);
  if (!ssn_seed_explicit) ssn_seed = DeriveSeed(seed, kSsnSeedStream);
  if (mock && !mock_seed_explicit) mock->seed = DeriveSeed(seed, kMockSeedStream);
}

std::vector<std::string> ExperimentConfig::Describe() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < target_paths.size(); ++i) {
    out.push_back(fmt::format("target_path[{}]={}", i, target_paths[i].string()));
  }
  out.push_back("eng_masker_path=" + eng_masker_path.string());
  std::string grid;
  for (double s : snr_grid.snr_points_db) {
    grid += (grid.empty() ? "" : ",") + fmt::format("{}", s);
  }
  out.push_back("snr_points_db=" + grid);
  out.push_back(fmt::format("target_level_db={}", target_level_db));
  out.push_back("input_peak_normalize=" +
                (input_peak_normalize ? fmt::format("{}", *input_peak_normalize)
                                      : std::string("none")));
  out.push_back(fmt::format("seed={}", seed));
  out.push_back(fmt::format("shield.band_low_hz={}", shield.band_low_hz));
  out.push_back(fmt::format("shield.band_high_hz={}", shield.band_high_hz));
  out.push_back(
      fmt::format("shield.taper_half_width_hz={}", shield.taper_half_width_hz));
  out.push_back("shield.seed=" + SeedText(shield.rng_seed, shield_seed_explicit));
  switch (ssn_reference) {
    case SsnReference::kTarget: out.push_back("ssn_reference=target"); break;
    case SsnReference::kMasker: out.push_back("ssn_reference=masker"); break;
    case SsnReference::kBoth: out.push_back("ssn_reference=both"); break;
    case SsnReference::kExternal:
      out.push_back("ssn_reference=path:" + ssn_reference_path.string());
      break;
  }
  out.push_back("ssn_seed=" + SeedText(ssn_seed, ssn_seed_explicit));
  if (mock) {
    out.push_back("provider=mock");
    out.push_back("provider.mock.seed=" + SeedText(mock->seed, mock_seed_explicit));
    out.push_back(fmt::format("provider.mock.peakiness={}", mock->peakiness));
    out.push_back(fmt::format("provider.mock.snr_scaled={}", mock->snr_scaled));
  } else if (logits_dir) {
    out.push_back("provider=logits_dir");
    out.push_back("provider.logits_dir=" + logits_dir->string());
  }
  out.push_back(fmt::format("silence_exclusion_blank_prob={}",
                            silence_exclusion_blank_prob));
  out.push_back("output_dir=" + output_dir.string());
  out.push_back(std::string("export_clipping=") +
                (export_clipping == ExportClipping::kWarn ? "warn" : "hard_clip"));
  return out;
}

ExperimentConfig ValidateConfig(const std::string& text,
                                const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::kParseError,
                fmt::format("line {}, column {}: {}", e.mark.line + 1,
                            e.mark.column + 1, e.msg));
  }
  if (!root.IsDefined() || root.IsNull()) {
    throw Error(ErrorCode::kValidationError, "config is empty");
  }
  CheckKeys(root, "",
            {"target_path", "eng_masker_path", "snr_points_db",
             "target_level_db", "input_peak_normalize", "seed", "shield",
             "ssn_reference", "ssn_seed", "provider",
             "silence_exclusion_blank_prob", "output_dir", "export_clipping"});

  ExperimentConfig config;
  const YAML::Node target = root["target_path"];
  if (!target) Invalid("target_path", root, "required");
  if (target.IsSequence()) {
    if (target.size() == 0) Invalid("target_path", target, "empty list");
    for (std::size_t i = 0; i < target.size(); ++i) {
      config.target_paths.push_back(ExistingFile(
          target[i], fmt::format("target_path[{}]", i), base_dir));
    }
  } else {
    config.target_paths.push_back(ExistingFile(target, "target_path", base_dir));
  }
  std::set<std::string> stems;
  for (const auto& p : config.target_paths) {
    if (!stems.insert(p.stem().string()).second) {
      Invalid("target_path", target,
              "utterance ids (file stems) must be unique: " + p.stem().string());
    }
  }

  const YAML::Node masker = root["eng_masker_path"];
  if (!masker) Invalid("eng_masker_path", root, "required");
  config.eng_masker_path = ExistingFile(masker, "eng_masker_path", base_dir);

  if (const YAML::Node grid = root["snr_points_db"]) {
    if (!grid.IsSequence()) Invalid("snr_points_db", grid, "expected a list");
    config.snr_grid.snr_points_db.clear();
    std::set<double> seen;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v =
          FiniteNumber(grid[i], fmt::format("snr_points_db[{}]", i));
      if (!seen.insert(v).second) {
        Invalid("snr_points_db", grid[i], fmt::format("duplicate point {}", v));
      }
      config.snr_grid.snr_points_db.push_back(v);
    }
    try {
      config.snr_grid.Validate();
    } catch (const Error& e) {
      Invalid("snr_points_db", grid, e.what());
    }
  }

  if (const YAML::Node n = root["target_level_db"]) {
    config.target_level_db = FiniteNumber(n, "target_level_db");
    if (config.target_level_db > 0.0) {
      Invalid("target_level_db", n, "must be <= 0 dBov");
    }
  }
  if (const YAML::Node n = root["input_peak_normalize"]) {
    if (!(n.IsScalar() && n.Scalar() == "none")) {
      const double peak = FiniteNumber(n, "input_peak_normalize");
      if (!(peak > 0.0 && peak <= 1.0)) {
        Invalid("input_peak_normalize", n, "must lie in (0, 1] or be 'none'");
      }
      config.input_peak_normalize = peak;
    }
  }
  if (const YAML::Node n = root["seed"]) {
    config.seed = Scalar<uint64_t>(n, "seed");
  }

  if (const YAML::Node shield = root["shield"]) {
    CheckKeys(shield, "shield",
              {"band_low_hz", "band_high_hz", "taper_half_width_hz", "seed"});
    if (shield["band_low_hz"]) {
      config.shield.band_low_hz =
          FiniteNumber(shield["band_low_hz"], "shield.band_low_hz");
    }
    if (shield["band_high_hz"]) {
      config.shield.band_high_hz =
          FiniteNumber(shield["band_high_hz"], "shield.band_high_hz");
    }
    if (shield["taper_half_width_hz"]) {
      config.shield.taper_half_width_hz = FiniteNumber(
          shield["taper_half_width_hz"], "shield.taper_half_width_hz");
    }
    if (shield["seed"]) {
      config.shield.rng_seed = Scalar<uint64_t>(shield["seed"], "shield.seed");
      config.shield_seed_explicit = true;
    }
    try {
      config.shield.Validate(kCanonicalRate);
    } catch (const Error& e) {
      Invalid("shield", shield, e.what());
    }
  }

  if (const YAML::Node n = root["ssn_reference"]) {
    if (n.IsMap()) {
      CheckKeys(n, "ssn_reference", {"path"});
      if (!n["path"]) Invalid("ssn_reference.path", n, "required");
      config.ssn_reference = SsnReference::kExternal;
      config.ssn_reference_path =
          ExistingFile(n["path"], "ssn_reference.path", base_dir);
    } else {
      const auto v = Scalar<std::string>(n, "ssn_reference");
      if (v == "target") {
        config.ssn_reference = SsnReference::kTarget;
      } else if (v == "masker") {
        config.ssn_reference = SsnReference::kMasker;
      } else if (v == "both") {
        config.ssn_reference = SsnReference::kBoth;
      } else {
        Invalid("ssn_reference", n,
                "expected target, masker, both, or {path: ...}");
      }
    }
  }
  if (const YAML::Node n = root["ssn_seed"]) {
    config.ssn_seed = Scalar<uint64_t>(n, "ssn_seed");
    config.ssn_seed_explicit = true;
  }

  // Without a provider section the mock provider runs with its defaults.
  const YAML::Node provider = root["provider"];
  if (provider) CheckKeys(provider, "provider", {"mock", "logits_dir"});
  const bool has_mock = !provider || static_cast<bool>(provider["mock"]);
  const bool has_dir = provider && static_cast<bool>(provider["logits_dir"]);
  if (has_mock == has_dir) {
    Invalid("provider", provider,
            "exactly one of provider.mock and provider.logits_dir must be set");
  }
  if (has_mock) {
    MockProviderConfig mock;
    const YAML::Node m = provider ? provider["mock"] : YAML::Node();
    if (m && !m.IsNull()) {
      CheckKeys(m, "provider.mock", {"seed", "peakiness", "snr_scaled"});
      if (m["seed"]) {
        mock.seed = Scalar<uint64_t>(m["seed"], "provider.mock.seed");
        config.mock_seed_explicit = true;
      }
      if (m["peakiness"]) {
        mock.peakiness = FiniteNumber(m["peakiness"], "provider.mock.peakiness");
        if (mock.peakiness < 0.0) {
          Invalid("provider.mock.peakiness", m["peakiness"], "must be >= 0");
        }
      }
      if (m["snr_scaled"]) {
        mock.snr_scaled = Scalar<bool>(m["snr_scaled"], "provider.mock.snr_scaled");
      }
    }
    config.mock = mock;
  } else {
    config.logits_dir =
        ResolvePath(provider["logits_dir"], "provider.logits_dir", base_dir);
  }

  if (const YAML::Node n = root["silence_exclusion_blank_prob"]) {
    const double v = FiniteNumber(n, "silence_exclusion_blank_prob");
    if (!(v > 0.0 && v <= 1.0)) {
      Invalid("silence_exclusion_blank_prob", n, "must lie in (0, 1]");
    }
    config.silence_exclusion_blank_prob = v;
  }
  if (const YAML::Node n = root["output_dir"]) {
    config.output_dir = ResolvePath(n, "output_dir", base_dir);
  } else {
    config.output_dir = base_dir / config.output_dir;
  }
  if (const YAML::Node n = root["export_clipping"]) {
    const auto v = Scalar<std::string>(n, "export_clipping");
    if (v == "warn") {
      config.export_clipping = ExportClipping::kWarn;
    } else if (v == "hard_clip") {
      config.export_clipping = ExportClipping::kHardClip;
    } else {
      Invalid("export_clipping", n, "expected warn or hard_clip");
    }
  }

  config.SetMasterSeed(config.seed);
  return config;
}

ExperimentConfig LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kValidationError,
                "cannot open config " + path.string());
  }
  std::stringstream text;
  text << in.rdbuf();
  return ValidateConfig(text.str(), path.parent_path().empty()
                                        ? std::filesystem::path(".")
                                        : path.parent_path());
}

}  // namespace rampho
