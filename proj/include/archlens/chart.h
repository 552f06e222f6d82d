// Copyright 2026 The ArchLens Authors.
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

#ifndef ARCHLENS_CHART_H_
#define ARCHLENS_CHART_H_

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace archlens {

// Minimal SVG charts: axes, data marks and labels. Output depends only on
// the inputs, so identical data gives byte-identical files.

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 400;
};

struct LineSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
  bool show_markers = true;
};

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  int group = 0;
};

struct BarItem {
  std::string label;
  double value = 0.0;
};

void write_line_chart(std::span<const LineSeries> series, const ChartOptions &options,
                      std::ostream &out);

// Points coloured by group.
void write_scatter_chart(std::span<const ScatterPoint> points,
                         const ChartOptions &options, std::ostream &out);

// Horizontal bars from a zero baseline, one row per item, top to bottom.
void write_bar_chart(std::span<const BarItem> items, const ChartOptions &options,
                     std::ostream &out);

std::string xml_escape(std::string_view text);

}  // namespace archlens

#endif  // ARCHLENS_CHART_H_
