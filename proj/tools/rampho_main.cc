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

// rampho: builds masked-speech stimulus grids and scores them by CTC
// posterior entropy.
//
//   rampho synthesize -c config.yaml
//   rampho analyze    -c config.yaml
//   rampho run        -c config.yaml [--jobs N]
//   rampho plot       -c config.yaml

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "rampho/config.h"
#include "rampho/error.h"
#include "rampho/harness.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<uint64_t> seed;
  int jobs = 1;
  bool verbose = false;
};

void AddCommon(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("-c,--config", args->config_path, "experiment config (YAML)")
      ->required();
  cmd->add_option("--output-dir", args->output_dir,
                  "overrides output_dir from the config");
  cmd->add_option("--seed", args->seed,
                  "overrides the master seed; derived seeds follow it");
  cmd->add_option("-j,--jobs", args->jobs, "parallel cells")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("-v,--verbose", args->verbose, "debug logging");
}

rampho::ExperimentConfig Resolve(const CommonArgs& args) {
  rampho::ExperimentConfig config = rampho::LoadConfigFile(args.config_path);
  if (args.output_dir) config.output_dir = *args.output_dir;
  if (args.seed) config.SetMasterSeed(*args.seed);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Masked-speech stimulus synthesis and entropy analysis"};
  app.set_version_flag("--version", rampho::kToolVersion);
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* synth = app.add_subcommand("synthesize", "write the stimulus grid");
  CLI::App* analyze =
      app.add_subcommand("analyze", "score exported stimuli by entropy");
  CLI::App* run = app.add_subcommand("run", "synthesize, then analyze");
  CLI::App* plot = app.add_subcommand("plot", "redraw figure from results.csv");
  for (CLI::App* cmd : {synth, analyze, run, plot}) AddCommon(cmd, &args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (args.verbose) spdlog::set_level(spdlog::level::debug);

  try {
    const rampho::ExperimentConfig config = Resolve(args);
    const rampho::RunOptions options{args.jobs};
    if (synth->parsed()) {
      rampho::Synthesize(config, options);
    } else if (analyze->parsed()) {
      rampho::Analyze(config, options);
    } else if (run->parsed()) {
      rampho::RunExperiment(config, options);
    } else {
      rampho::PlotFromResults(config);
    }
  } catch (const rampho::Error& e) {
    spdlog::error("{}", e.what());
    return rampho::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
