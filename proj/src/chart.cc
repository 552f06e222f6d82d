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


#include "archlens/chart.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "archlens/error.h"

namespace archlens {

namespace {

constexpr std::array<const char *, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                  "#9467bd", "#ff7f0e", "#8c564b"};
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr int kTicks = 5;

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) throw Error("chart data must be finite");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  // Widens empty or degenerate ranges and adds a small margin.
  void settle() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

class Frame {
 public:
  Frame(const ChartOptions &o, Range x, Range y) : o_(o), x_(x), y_(y) {}

  double px(double x) const {
    return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (o_.width - kLeft - kRight);
  }
  double py(double y) const {
    return o_.height - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (o_.height - kTop - kBottom);
  }

  void open(std::ostream &out) const {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o_.width
        << "\" height=\"" << o_.height << "\" viewBox=\"0 0 " << o_.width << ' '
        << o_.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!o_.title.empty()) {
      out << "<text x=\"" << coord(o_.width / 2.0) << "\" y=\"20\" text-anchor=\"middle\""
          << " font-size=\"14\">" << xml_escape(o_.title) << "</text>\n";
    }
  }

  void axes(std::ostream &out, bool x_ticks) const {
    const double x0 = kLeft;
    const double x1 = o_.width - kRight;
    const double y0 = o_.height - kBottom;
    const double y1 = kTop;
    out << "<g stroke=\"black\" fill=\"none\">\n";
    out << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\"" << coord(x1)
        << "\" y2=\"" << coord(y0) << "\"/>\n";
    out << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\"" << coord(x0)
        << "\" y2=\"" << coord(y1) << "\"/>\n";
    out << "</g>\n";
    for (int i = 0; i <= kTicks; ++i) {
      if (x_ticks) {
        const double v = x_.lo + (x_.hi - x_.lo) * i / kTicks;
        out << "<text x=\"" << coord(px(v)) << "\" y=\"" << coord(y0 + 16)
            << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
      }
      const double w = y_.lo + (y_.hi - y_.lo) * i / kTicks;
      out << "<text x=\"" << coord(x0 - 6) << "\" y=\"" << coord(py(w) + 4)
          << "\" text-anchor=\"end\">" << tick_label(w) << "</text>\n";
    }
    if (!o_.x_label.empty()) {
      out << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(o_.height - 12.0)
          << "\" text-anchor=\"middle\">" << xml_escape(o_.x_label) << "</text>\n";
    }
    if (!o_.y_label.empty()) {
      out << "<text transform=\"translate(16," << coord((y0 + y1) / 2)
          << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(o_.y_label)
          << "</text>\n";
    }
  }

  const Range &x() const { return x_; }

 private:
  const ChartOptions &o_;
  Range x_;
  Range y_;
};

void check_size(const ChartOptions &options) {
  if (options.width <= kLeft + kRight || options.height <= kTop + kBottom) {
    throw Error("chart dimensions are too small");
  }
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_line_chart(std::span<const LineSeries> series, const ChartOptions &options,
                      std::ostream &out) {
  check_size(options);
  Range xr;
  Range yr;
  for (const LineSeries &s : series) {
    for (const auto &[x, y] : s.points) {
      xr.include(x);
      yr.include(y);
    }
  }
  xr.settle();
  yr.settle();
  Frame frame(options, xr, yr);
  frame.open(out);
  frame.axes(out, true);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const LineSeries &s = series[i];
    const char *colour = kPalette[i % kPalette.size()];
    if (s.points.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      if (j > 0) out << ' ';
      out << coord(frame.px(s.points[j].first)) << ',' << coord(frame.py(s.points[j].second));
    }
    out << "\"/>\n";
    if (s.show_markers) {
      for (const auto &[x, y] : s.points) {
        out << "<circle cx=\"" << coord(frame.px(x)) << "\" cy=\"" << coord(frame.py(y))
            << "\" r=\"2.5\" fill=\"" << colour << "\"/>\n";
      }
    }
    if (!s.name.empty()) {
      out << "<text x=\"" << coord(options.width - kRight - 4) << "\" y=\""
          << coord(kTop + 14.0 * static_cast<double>(i + 1)) << "\" text-anchor=\"end\" fill=\""
          << colour << "\">" << xml_escape(s.name) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_scatter_chart(std::span<const ScatterPoint> points,
                         const ChartOptions &options, std::ostream &out) {
  check_size(options);
  Range xr;
  Range yr;
  for (const ScatterPoint &p : points) {
    xr.include(p.x);
    yr.include(p.y);
  }
  xr.settle();
  yr.settle();
  Frame frame(options, xr, yr);
  frame.open(out);
  frame.axes(out, true);
  for (const ScatterPoint &p : points) {
    const auto slot = static_cast<std::size_t>(p.group < 0 ? -p.group : p.group);
    out << "<circle cx=\"" << coord(frame.px(p.x)) << "\" cy=\"" << coord(frame.py(p.y))
        << "\" r=\"3\" fill=\"" << kPalette[slot % kPalette.size()]
        << "\" fill-opacity=\"0.7\"/>\n";
  }
  out << "</svg>\n";
}

void write_bar_chart(std::span<const BarItem> items, const ChartOptions &options,
                     std::ostream &out) {
  ChartOptions sized = options;
  sized.height = std::max(options.height,
                          static_cast<int>(kTop + kBottom) + 16 * static_cast<int>(items.size()));
  check_size(sized);
  Range xr;
  xr.include(0.0);
  for (const BarItem &item : items) xr.include(item.value);
  xr.settle();
  Range yr;
  yr.lo = 0.0;
  yr.hi = std::max<double>(1.0, static_cast<double>(items.size()));
  Frame frame(sized, xr, yr);
  frame.open(out);
  const double x0 = frame.px(0.0);
  const double band = (sized.height - kTop - kBottom) / yr.hi;
  out << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(kTop) << "\" x2=\"" << coord(x0)
      << "\" y2=\"" << coord(sized.height - kBottom) << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const BarItem &item = items[i];
    const double top = kTop + band * static_cast<double>(i) + 0.15 * band;
    const double x1 = frame.px(item.value);
    const char *colour = item.value >= 0.0 ? kPalette[0] : kPalette[1];
    out << "<rect x=\"" << coord(std::min(x0, x1)) << "\" y=\"" << coord(top)
        << "\" width=\"" << coord(std::abs(x1 - x0)) << "\" height=\"" << coord(0.7 * band)
        << "\" fill=\"" << colour << "\"/>\n";
    const bool right = item.value < 0.0;
    out << "<text x=\"" << coord(right ? x0 + 4 : x0 - 4) << "\" y=\""
        << coord(top + 0.35 * band + 4) << "\" text-anchor=\"" << (right ? "start" : "end")
        << "\">" << xml_escape(item.label) << "</text>\n";
  }
  const double y0 = sized.height - kBottom;
  for (int i = 0; i <= kTicks; ++i) {
    const double v = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    out << "<text x=\"" << coord(frame.px(v)) << "\" y=\"" << coord(y0 + 16)
        << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
  }
  if (!sized.x_label.empty()) {
    out << "<text x=\"" << coord((kLeft + sized.width - kRight) / 2) << "\" y=\""
        << coord(sized.height - 12.0) << "\" text-anchor=\"middle\">"
        << xml_escape(sized.x_label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace archlens
