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

#ifndef RAMPHO_PLOT_H_
#define RAMPHO_PLOT_H_

#include <filesystem>
#include <string>

#include "rampho/entropy.h"

namespace rampho {

// Entropy-vs-SNR figure as standalone SVG: normalized mean entropy on a fixed
// [0, 1] axis, one polyline plus circle markers per condition, a legend, and a
// dashed vertical line (class "crossover") per detected crossover. Pristine
// baseline points sit right of a broken-axis gap. Byte-identical for
// identical input.
std::string RenderPlotSvg(const SweepResult& result);

void EmitPlot(const SweepResult& result, const std::filesystem::path& path);

}  // namespace rampho

#endif  // RAMPHO_PLOT_H_
