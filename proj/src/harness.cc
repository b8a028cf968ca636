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

#include "rampho/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "rampho/audio_io.h"
#include "rampho/levels.h"
#include "rampho/logits.h"
#include "rampho/masker.h"
#include "rampho/mixer.h"
#include "rampho/plot.h"
#include "rampho/random.h"
#include "rampho/resample.h"

namespace rampho {

namespace fs = std::filesystem;

std::string CellStem(Condition condition, double snr_db) {
  return fmt::format("{}_{}dB", ConditionName(condition), snr_db);
}

fs::path OutputLayout::StimulusRelPath(const std::string& utterance,
                                       Condition condition,
                                       double snr_db) const {
  const std::string file = CellStem(condition, snr_db) + ".wav";
  return per_utterance_dirs ? fs::path("stimuli") / utterance / file
                            : fs::path("stimuli") / file;
}

fs::path OutputLayout::LogitsRelPath(const std::string& utterance,
                                     Condition condition,
                                     double snr_db) const {
  const std::string file = CellStem(condition, snr_db) + ".w2vl";
  return per_utterance_dirs ? fs::path(utterance) / file : fs::path(file);
}

OutputLayout LayoutFor(const ExperimentConfig& config) {
  return OutputLayout{config.output_dir, config.target_paths.size() > 1};
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kValidationError:
      return 2;
    case ErrorCode::kFileNotFound:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kEmptyAudio:
    case ErrorCode::kMissingLogits:
    case ErrorCode::kMissingInput:
    case ErrorCode::kBadMagic:
    case ErrorCode::kUnsupportedVersion:
    case ErrorCode::kCorruptPayload:
      return 3;
    case ErrorCode::kIoError:
      return 1;
    default:
      return 4;
  }
}

std::string Sha256Hex(std::span<const unsigned char> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return Sha256Hex(bytes);
}

namespace {

struct CellRecord {
  std::string utterance_id;
  Condition condition;
  double snr_db;
  double target_active_level_db;
  double masker_active_level_db;
  fs::path wav_rel;
  std::string wav_sha256;
};

struct LogitsRecord {
  fs::path file;
  std::string sha256;
};

std::string UtteranceId(const fs::path& p) { return p.stem().string(); }

// Runs body(i) for i in [0, n) on up to `jobs` threads. If any call throws,
// the exception of the lowest failing index is rethrown after the join.
template <typename Body>
void ParallelFor(std::size_t n, int jobs, Body body) {
  std::vector<std::exception_ptr> errors(n);
  const auto workers = static_cast<std::size_t>(
      std::clamp<int>(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Re-throws with the (condition, SNR) cell prepended, keeping the code.
template <typename Fn>
auto InCell(const std::string& utterance, Condition condition, double snr,
            Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("cell ({}, {} dB, {}): {}",
                                      ConditionName(condition), snr, utterance,
                                      e.message()));
  }
}

AudioBuffer Ingest(const fs::path& path, const ExperimentConfig& config) {
  AudioBuffer audio = Resample(LoadWav(path), kCanonicalRate);
  if (config.input_peak_normalize) {
    audio = PeakNormalize(audio, *config.input_peak_normalize);
  }
  return audio;
}

AudioBuffer Concatenate(const std::vector<const AudioBuffer*>& parts) {
  std::vector<double> all;
  for (const AudioBuffer* p : parts) {
    all.insert(all.end(), p->samples().begin(), p->samples().end());
  }
  return AudioBuffer(std::move(all), parts.front()->sample_rate());
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::string ReadText(const fs::path& path, ErrorCode missing_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(missing_code, "cannot open " + path.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string FormatStimuliManifest(const std::vector<CellRecord>& cells) {
  std::string out =
      "# utterance\tcondition\tsnr_db\ttarget_active_level_db\t"
      "masker_active_level_db\tfile\tsha256\n";
  for (const CellRecord& c : cells) {
    out += fmt::format("{}\t{}\t{}\t{:.17g}\t{:.17g}\t{}\t{}\n", c.utterance_id,
                       ConditionName(c.condition), c.snr_db,
                       c.target_active_level_db, c.masker_active_level_db,
                       c.wav_rel.generic_string(), c.wav_sha256);
  }
  return out;
}

std::vector<CellRecord> ParseStimuliManifest(const std::string& text) {
  std::vector<CellRecord> cells;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      f.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const auto condition = f.size() == 7 ? ParseCondition(f[1]) : std::nullopt;
    if (!condition) {
      throw Error(ErrorCode::kMissingInput,
                  fmt::format("stimuli manifest line {} is malformed", line_no));
    }
    cells.push_back(CellRecord{f[0], *condition, std::stod(f[2]),
                               std::stod(f[3]), std::stod(f[4]), fs::path(f[5]),
                               f[6]});
  }
  return cells;
}

void WriteRunManifest(const ExperimentConfig& config, const OutputLayout& layout,
                      const std::string& phase,
                      const std::vector<CellRecord>& cells,
                      const std::vector<LogitsRecord>& logits) {
  std::string out = "# rampho run manifest\n";
  out += fmt::format("tool_version={}\n", kToolVersion);
  out += fmt::format("timestamp={}\n", UtcTimestamp());
  out += fmt::format("phase={}\n", phase);
  for (const std::string& line : config.Describe()) out += "config." + line + "\n";
  for (const fs::path& p : config.target_paths) {
    out += fmt::format("input.target.{}.sha256={}\n", UtteranceId(p),
                       Sha256File(p));
  }
  out += fmt::format("input.eng_masker.sha256={}\n",
                     Sha256File(config.eng_masker_path));
  if (config.ssn_reference == SsnReference::kExternal) {
    out += fmt::format("input.ssn_reference.sha256={}\n",
                       Sha256File(config.ssn_reference_path));
  }
  for (const CellRecord& c : cells) {
    out += fmt::format(
        "mixture utterance={} condition={} snr_db={} wav={} sha256={} "
        "target_active_level_db={:.6f} masker_active_level_db={:.6f}\n",
        c.utterance_id, ConditionName(c.condition), c.snr_db,
        c.wav_rel.generic_string(), c.wav_sha256, c.target_active_level_db,
        c.masker_active_level_db);
  }
  for (const LogitsRecord& l : logits) {
    out += fmt::format("logits file={} sha256={}\n", l.file.generic_string(),
                       l.sha256);
  }
  WriteText(layout.run_manifest(), out);
}

void ExportStimulus(const AudioBuffer& audio, const fs::path& path,
                    ExportClipping clipping, const std::string& label) {
  if (PeakAbs(audio.samples()) <= 1.0) {
    SaveWav(audio, path);
    return;
  }
  if (clipping == ExportClipping::kWarn) {
    spdlog::warn("{} exceeds full scale; written unclipped as float WAV",
                 label);
    SaveWav(audio, path);
    return;
  }
  std::vector<double> clipped(audio.samples().begin(), audio.samples().end());
  for (double& v : clipped) v = std::clamp(v, -1.0, 1.0);
  spdlog::warn("{} exceeds full scale; hard-clipped on export", label);
  SaveWav(AudioBuffer(std::move(clipped), audio.sample_rate()), path);
}

double MockPeakiness(const MockProviderConfig& mock, double snr_db) {
  if (!mock.snr_scaled) return mock.peakiness;
  const double g = std::pow(10.0, snr_db / 20.0);
  return mock.peakiness * g / (1.0 + g);
}

}  // namespace

void Synthesize(const ExperimentConfig& config, const RunOptions& options) {
  const OutputLayout layout = LayoutFor(config);
  std::vector<AudioBuffer> targets;
  for (const fs::path& p : config.target_paths) {
    targets.push_back(Ingest(p, config));
  }
  const AudioBuffer masker = Ingest(config.eng_masker_path, config);

  std::vector<const AudioBuffer*> reference;
  std::optional<AudioBuffer> external;
  switch (config.ssn_reference) {
    case SsnReference::kTarget:
      for (const auto& t : targets) reference.push_back(&t);
      break;
    case SsnReference::kMasker:
      reference.push_back(&masker);
      break;
    case SsnReference::kBoth:
      for (const auto& t : targets) reference.push_back(&t);
      reference.push_back(&masker);
      break;
    case SsnReference::kExternal:
      external = Ingest(config.ssn_reference_path, config);
      reference.push_back(&*external);
      break;
  }
  const LtasProfile ltas = MeasureLtas(Concatenate(reference));

  fs::create_directories(layout.stimuli_dir());
  WriteLtasTable(ltas, layout.ltas_table());

  std::vector<CellRecord> cells;
  const auto& snrs = config.snr_grid.snr_points_db;
  for (std::size_t u = 0; u < targets.size(); ++u) {
    const std::string utt = UtteranceId(config.target_paths[u]);
    const AudioBuffer& target = targets[u];
    const StimulusMaskers maskers =
        InCell(utt, Condition::kSsn, snrs.front(), [&] {
          return PrepareMaskers(target, masker, config.shield, ltas,
                                DeriveSeed(config.seed, u),
                                DeriveSeed(config.ssn_seed, u));
        });
    if (layout.per_utterance_dirs) {
      fs::create_directories(layout.stimuli_dir() / utt);
    }
    const std::size_t base = cells.size();
    cells.resize(base + 3 * snrs.size(),
                 CellRecord{utt, Condition::kEng, 0, 0, 0, {}, {}});
    ParallelFor(3 * snrs.size(), options.jobs, [&](std::size_t i) {
      const Condition condition = kAllConditions[i / snrs.size()];
      const double snr = snrs[i % snrs.size()];
      InCell(utt, condition, snr, [&] {
        const Mixture mix = MixAtSnr(target, maskers.For(condition), snr,
                                     config.target_level_db, condition);
        CellRecord& rec = cells[base + i];
        rec.condition = condition;
        rec.snr_db = snr;
        rec.target_active_level_db = mix.target_active_level_db;
        rec.masker_active_level_db = mix.masker_active_level_db;
        rec.wav_rel = layout.StimulusRelPath(utt, condition, snr);
        ExportStimulus(mix.audio, layout.root / rec.wav_rel,
                       config.export_clipping, rec.wav_rel.string());
        rec.wav_sha256 = Sha256File(layout.root / rec.wav_rel);
      });
    });
  }
  WriteText(layout.stimuli_manifest(), FormatStimuliManifest(cells));
  WriteRunManifest(config, layout, "synthesize", cells, {});
  spdlog::info("synthesized {} mixtures under {}", cells.size(),
               layout.stimuli_dir().string());
}

SweepResult Analyze(const ExperimentConfig& config, const RunOptions& options) {
  const OutputLayout layout = LayoutFor(config);
  std::vector<CellRecord> cells = ParseStimuliManifest(
      ReadText(layout.stimuli_manifest(), ErrorCode::kMissingInput));

  // Expected cells come from the config, not from whatever is on disk.
  std::map<std::tuple<std::string, Condition, double>, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    index[{cells[i].utterance_id, cells[i].condition, cells[i].snr_db}] = i;
  }
  std::vector<CellRecord> ordered;
  for (const fs::path& p : config.target_paths) {
    const std::string utt = UtteranceId(p);
    for (Condition c : kAllConditions) {
      for (double snr : config.snr_grid.snr_points_db) {
        auto it = index.find({utt, c, snr});
        if (it == index.end()) {
          throw Error(ErrorCode::kMissingInput,
                      fmt::format("no synthesized stimulus for {} in {}; run "
                                  "`synthesize` first",
                                  layout.StimulusRelPath(utt, c, snr).string(),
                                  layout.stimuli_manifest().string()));
        }
        ordered.push_back(cells[it->second]);
      }
    }
  }
  cells = std::move(ordered);

  const fs::path logits_root =
      config.logits_dir ? *config.logits_dir : layout.logits_dir();
  if (config.logits_dir) {
    for (const CellRecord& c : cells) {
      const fs::path rel = layout.LogitsRelPath(c.utterance_id, c.condition,
                                                c.snr_db);
      if (!fs::is_regular_file(logits_root / rel)) {
        throw Error(ErrorCode::kMissingLogits,
                    fmt::format("expected logits file {} in {} (run the "
                                "exporter on {})",
                                rel.generic_string(), logits_root.string(),
                                c.wav_rel.generic_string()));
      }
    }
  } else {
    fs::create_directories(logits_root);
    if (layout.per_utterance_dirs) {
      for (const fs::path& p : config.target_paths) {
        fs::create_directories(logits_root / UtteranceId(p));
      }
    }
  }

  std::vector<std::optional<SweepRow>> rows(cells.size());
  std::vector<LogitsRecord> logits(cells.size());
  ParallelFor(cells.size(), options.jobs, [&](std::size_t i) {
    CellRecord& c = cells[i];
    InCell(c.utterance_id, c.condition, c.snr_db, [&] {
      const fs::path wav = layout.root / c.wav_rel;
      if (!fs::is_regular_file(wav)) {
        throw Error(ErrorCode::kMissingInput, "missing stimulus " + wav.string());
      }
      c.wav_sha256 = Sha256File(wav);
      const fs::path rel =
          layout.LogitsRelPath(c.utterance_id, c.condition, c.snr_db);
      const fs::path logits_path = logits_root / rel;
      if (config.mock) {
        const AudioBuffer audio = LoadWav(wav);
        WriteLogitsFile(
            MockLogits(audio, DefaultManifest(), config.mock->seed,
                       MockPeakiness(*config.mock, c.snr_db), rel.string()),
            logits_path);
      }
      const LogitsMatrix matrix = ReadLogitsFile(logits_path);
      const EntropyTrace trace =
          AggregateTrace(matrix, config.silence_exclusion_blank_prob);
      logits[i] = LogitsRecord{
          config.mock ? fs::path("logits") / rel : logits_path,
          Sha256File(logits_path)};
      rows[i] = SweepRow{c.condition,          c.snr_db,
                         c.utterance_id,       trace.mean_bits,
                         trace.median_bits,    trace.normalized_mean,
                         trace.included_frames, trace.excluded_frames,
                         c.target_active_level_db, c.masker_active_level_db};
    });
  });

  SweepResult result;
  for (auto& row : rows) result.AddRow(std::move(*row));
  ComputeCrossovers(&result);
  WriteText(layout.results_csv(), FormatResultsCsv(result));
  EmitPlot(result, layout.figure());
  WriteRunManifest(config, layout, "analyze", cells, logits);
  for (const auto& [pair, snr] : result.crossover_points) {
    spdlog::info("crossover {}/{} at {:.2f} dB", ConditionName(pair.first),
                 ConditionName(pair.second), snr);
  }
  return result;
}

SweepResult RunExperiment(const ExperimentConfig& config, const RunOptions& options) {
  Synthesize(config, options);
  return Analyze(config, options);
}

SweepResult PlotFromResults(const ExperimentConfig& config) {
  const OutputLayout layout = LayoutFor(config);
  SweepResult result = ParseResultsCsv(
      ReadText(layout.results_csv(), ErrorCode::kMissingInput));
  ComputeCrossovers(&result);
  EmitPlot(result, layout.figure());
  return result;
}

std::string FormatResultsCsv(const SweepResult& result) {
  std::string out = std::string(kResultsCsvHeader) + "\n";
  for (const SweepRow& r : result.rows) {
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{},{},{:.6f},{:.6f}\n",
                       ConditionName(r.condition), r.snr_db, r.utterance_id,
                       r.mean_bits, r.median_bits, r.normalized_mean,
                       r.included_frames, r.excluded_frames,
                       r.target_active_level_db, r.masker_active_level_db);
  }
  return out;
}

SweepResult ParseResultsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kResultsCsvHeader) {
    throw Error(ErrorCode::kMissingInput, "results.csv has an unexpected header");
  }
  SweepResult result;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    const auto condition = f.size() == 10 ? ParseCondition(f[0]) : std::nullopt;
    if (!condition) {
      throw Error(ErrorCode::kMissingInput,
                  fmt::format("results.csv line {} is malformed", line_no));
    }
    result.AddRow(SweepRow{*condition, std::stod(f[1]), f[2], std::stod(f[3]),
                           std::stod(f[4]), std::stod(f[5]), std::stoul(f[6]),
                           std::stoul(f[7]), std::stod(f[8]), std::stod(f[9])});
  }
  return result;
}

}  // namespace rampho
