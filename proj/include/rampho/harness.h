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

#ifndef RAMPHO_HARNESS_H_
#define RAMPHO_HARNESS_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rampho/config.h"
#include "rampho/entropy.h"
#include "rampho/error.h"

namespace rampho {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr const char* kResultsCsvHeader =
    "condition,snr_db,utterance_id,mean_bits,median_bits,normalized_mean,"
    "included_frames,excluded_frames,target_active_level_db,"
    "masker_active_level_db";

struct RunOptions {
  int jobs = 1;
};

// "{condition}_{snr}dB", e.g. "CS_5dB".
std::string CellStem(Condition condition, double snr_db);

// Output layout under config.output_dir. With several targets each
// utterance gets its own subdirectory below stimuli/ and logits/.
struct OutputLayout {
  std::filesystem::path root;
  bool per_utterance_dirs = false;

  std::filesystem::path stimuli_dir() const { return root / "stimuli"; }
  std::filesystem::path logits_dir() const { return root / "logits"; }
  std::filesystem::path stimuli_manifest() const {
    return stimuli_dir() / "manifest.txt";
  }
  std::filesystem::path ltas_table() const {
    return stimuli_dir() / "ssn_ltas.txt";
  }
  std::filesystem::path results_csv() const { return root / "results.csv"; }
  std::filesystem::path figure() const { return root / "figure1.svg"; }
  std::filesystem::path run_manifest() const {
    return root / "run_manifest.txt";
  }
  // Relative to root.
  std::filesystem::path StimulusRelPath(const std::string& utterance,
                                        Condition condition,
                                        double snr_db) const;
  // Relative to the logits directory in use.
  std::filesystem::path LogitsRelPath(const std::string& utterance,
                                      Condition condition,
                                      double snr_db) const;
};

OutputLayout LayoutFor(const ExperimentConfig& config);

// Phase 1: ingest audio, build the stimulus grid for every target, write
// stimuli/*.wav, stimuli/manifest.txt, stimuli/ssn_ltas.txt and the run
// manifest.
void Synthesize(const ExperimentConfig& config, const RunOptions& options = {});

// Phase 2: read the exported stimuli, obtain logits (mock provider writes
// logits/*.w2vl; logits_dir mode requires them to exist), compute entropy
// traces, and write results.csv, figure1.svg and the run manifest.
SweepResult Analyze(const ExperimentConfig& config,
                    const RunOptions& options = {});

// Synthesize followed by Analyze.
SweepResult RunExperiment(const ExperimentConfig& config, const RunOptions& options = {});

// Re-renders figure1.svg from an existing results.csv.
SweepResult PlotFromResults(const ExperimentConfig& config);

std::string FormatResultsCsv(const SweepResult& result);
SweepResult ParseResultsCsv(const std::string& text);

std::string Sha256Hex(std::span<const unsigned char> bytes);
std::string Sha256File(const std::filesystem::path& path);

// CLI exit code for a library error: 2 config, 3 missing or unreadable
// inputs/logits, 4 numeric failure, 1 anything else.
int ExitCodeFor(ErrorCode code);

}  // namespace rampho

#endif  // RAMPHO_HARNESS_H_
