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

#include "rampho/plot.h"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "rampho/error.h"

namespace rampho {

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
constexpr double kPristineGap = 60;  // px between the masked range and baseline

const char* ConditionColor(Condition c) {
  switch (c) {
    case Condition::kEng: return "#d62728";
    case Condition::kCs: return "#1f77b4";
    case Condition::kSsn: return "#7f7f7f";
  }
  return "#000000";
}

// SNR -> x pixel. Masked points spread over the axis; pristine points are
// pinned to its right end.
class XAxis {
 public:
  XAxis(double min_snr, double max_snr, bool has_pristine)
      : min_(min_snr), max_(max_snr), has_pristine_(has_pristine) {
    right_ = kWidth - kRight;
    masked_right_ = has_pristine_ ? right_ - kPristineGap : right_;
  }

  double operator()(double snr) const {
    if (snr >= kPristineSnrDb) return right_;
    if (max_ <= min_) return (kLeft + masked_right_) / 2.0;
    return kLeft + (snr - min_) / (max_ - min_) * (masked_right_ - kLeft);
  }

  double masked_right() const { return masked_right_; }
  bool has_pristine() const { return has_pristine_; }

 private:
  double min_, max_;
  bool has_pristine_;
  double right_ = 0, masked_right_ = 0;
};

double YPixel(double value) {
  const double clamped = std::clamp(value, 0.0, 1.0);
  return kHeight - kBottom - clamped * (kHeight - kTop - kBottom);
}

}  // namespace

std::string RenderPlotSvg(const SweepResult& result) {
  if (result.rows.empty()) {
    throw Error(ErrorCode::kInsufficientData, "nothing to plot");
  }
  double min_snr = 0, max_snr = 0;
  bool have_masked = false, has_pristine = false;
  for (const SweepRow& r : result.rows) {
    if (r.snr_db >= kPristineSnrDb) {
      has_pristine = true;
      continue;
    }
    if (!have_masked) {
      min_snr = max_snr = r.snr_db;
      have_masked = true;
    }
    min_snr = std::min(min_snr, r.snr_db);
    max_snr = std::max(max_snr, r.snr_db);
  }
  const XAxis x(min_snr, max_snr, has_pristine);
  const double y0 = YPixel(0.0), y1 = YPixel(1.0);

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  svg += fmt::format(
      "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
      kWidth, kHeight);
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      "Informational vs. energetic masking crossover</text>\n",
      kWidth / 2.0);

  // Axes.
  svg += fmt::format(
      "<line class=\"axis\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" "
      "y2=\"{:.1f}\" stroke=\"black\"/>\n",
      kLeft, y0, x.masked_right(), y0);
  if (x.has_pristine()) {
    const double px = x(kPristineSnrDb);
    svg += fmt::format(
        "<line class=\"axis\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" "
        "y2=\"{:.1f}\" stroke=\"black\"/>\n",
        x.masked_right() + kPristineGap / 2.0, y0, px + 15.0, y0);
    for (double off : {-4.0, 4.0}) {
      const double bx = x.masked_right() + kPristineGap / 4.0 + off;
      svg += fmt::format(
          "<line class=\"axis-break\" x1=\"{:.1f}\" y1=\"{:.1f}\" "
          "x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
          bx - 3.0, y0 + 6.0, bx + 3.0, y0 - 6.0);
    }
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">pristine</text>\n",
        px, y0 + 18.0);
  }
  svg += fmt::format(
      "<line class=\"axis\" x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" "
      "y2=\"{2:.1f}\" stroke=\"black\"/>\n",
      kLeft, y0, y1);
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" "
        "stroke=\"#dddddd\"/>\n",
        kLeft, YPixel(v),
        x.has_pristine() ? x(kPristineSnrDb) : x.masked_right(), YPixel(v));
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.1f}</text>\n",
        kLeft - 6, YPixel(v) + 4, v);
  }
  std::vector<double> ticks;
  for (const SweepRow& r : result.rows) {
    if (r.snr_db < kPristineSnrDb &&
        std::find(ticks.begin(), ticks.end(), r.snr_db) == ticks.end()) {
      ticks.push_back(r.snr_db);
    }
  }
  std::sort(ticks.begin(), ticks.end());
  for (double t : ticks) {
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
        x(t), y0 + 18.0, t);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">SNR (dB)</text>\n",
      (kLeft + x.masked_right()) / 2.0, kHeight - 18.0);
  svg += fmt::format(
      "<text x=\"18\" y=\"{0:.1f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 18 {0:.1f})\">normalized phonetic entropy</text>\n",
      (y0 + y1) / 2.0);

  // Crossovers, under the curves.
  for (const auto& [pair, snr] : result.crossover_points) {
    const double cx = x(snr);
    svg += fmt::format(
        "<line class=\"crossover\" x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" "
        "y2=\"{2:.1f}\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n",
        cx, y0, y1);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" "
        "font-size=\"10\">{}/{} {:.2f} dB</text>\n",
        cx, y1 - 4.0, ConditionName(pair.first), ConditionName(pair.second),
        snr);
  }

  // Curves and legend.
  int legend_row = 0;
  for (Condition c : kAllConditions) {
    const auto curve = result.Curve(c);
    if (curve.empty()) continue;
    std::string points;
    for (const auto& [snr, value] : curve) {
      points += fmt::format("{}{:.2f},{:.2f}", points.empty() ? "" : " ",
                            x(snr), YPixel(value));
    }
    svg += fmt::format(
        "<polyline class=\"curve\" data-condition=\"{}\" points=\"{}\" "
        "fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
        ConditionName(c), points, ConditionColor(c));
    for (const auto& [snr, value] : curve) {
      svg += fmt::format(
          "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", x(snr),
          YPixel(value), ConditionColor(c));
    }
    const double ly = kTop + 10.0 + 20.0 * legend_row++;
    const double lx = kWidth - kRight + 30.0;
    svg += fmt::format(
        "<rect class=\"legend\" x=\"{:.1f}\" y=\"{:.1f}\" width=\"18\" "
        "height=\"4\" fill=\"{}\"/>\n",
        lx, ly - 2.0, ConditionColor(c));
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx + 24.0,
                       ly + 4.0, ConditionName(c));
  }
  svg += "</svg>\n";
  return svg;
}

void EmitPlot(const SweepResult& result, const std::filesystem::path& path) {
  const std::string svg = RenderPlotSvg(result);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out << svg;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace rampho
