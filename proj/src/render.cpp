// Copyright 2026 The synbench Authors
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

#include "synbench/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "synbench/rng.hpp"

namespace synbench {

MapMode parse_map_mode(const std::string& s) {
  if (s == "rates") return MapMode::rates;
  if (s == "calibration") return MapMode::calibration;
  throw std::invalid_argument(fmt::format("unknown map mode '{}'", s));
}

std::string percent_label(const std::optional<double>& p) {
  if (!p) return "–";
  return fmt::format("{:.1f}", *p * 100.0);
}

std::vector<LayoutPoint> device_layout(const DeviceCalibration& cal, std::uint64_t seed) {
  if (cal.layout()) return *cal.layout();

  // Fruchterman-Reingold with a fixed iteration count and seeded start.
  const std::size_t n = cal.qubit_count();
  Stream rng(derive_seed(seed, n));
  std::vector<LayoutPoint> pos(n);
  for (auto& p : pos) p = {rng.uniform() * 10.0, rng.uniform() * 10.0};
  const double k = std::sqrt(100.0 / static_cast<double>(n));
  double temperature = 1.0;
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<LayoutPoint> disp(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        double dx = pos[i].x - pos[j].x;
        double dy = pos[i].y - pos[j].y;
        const double d = std::max(1e-6, std::hypot(dx, dy));
        const double f = k * k / d;
        disp[i].x += dx / d * f;
        disp[i].y += dy / d * f;
      }
    }
    for (const auto& [edge, props] : cal.cx_gates()) {
      const double dx = pos[edge.a].x - pos[edge.b].x;
      const double dy = pos[edge.a].y - pos[edge.b].y;
      const double d = std::max(1e-6, std::hypot(dx, dy));
      const double f = d * d / k;
      disp[edge.a].x -= dx / d * f;
      disp[edge.a].y -= dy / d * f;
      disp[edge.b].x += dx / d * f;
      disp[edge.b].y += dy / d * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::max(1e-6, std::hypot(disp[i].x, disp[i].y));
      const double step = std::min(d, temperature);
      pos[i].x += disp[i].x / d * step;
      pos[i].y += disp[i].y / d * step;
    }
    temperature *= 0.985;
  }
  return pos;
}

namespace {

int channel(double value, double max) {
  if (!(max > 0.0)) return 0;
  return static_cast<int>(std::lround(255.0 * std::clamp(value / max, 0.0, 1.0)));
}

}  // namespace

std::string render_device_map(const BenchmarkReport& report, const DeviceCalibration& cal, MapMode mode) {
  const auto layout = device_layout(cal);
  double min_x = layout.front().x, max_x = min_x, min_y = layout.front().y, max_y = min_y;
  for (const auto& p : layout) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  constexpr double kScale = 90.0;
  constexpr double kMargin = 60.0;
  constexpr double kRadius = 18.0;
  auto px = [&](const LayoutPoint& p) { return kMargin + (p.x - min_x) * kScale; };
  auto py = [&](const LayoutPoint& p) { return kMargin + (p.y - min_y) * kScale; };
  const double width = 2 * kMargin + (max_x - min_x) * kScale;
  const double height = 2 * kMargin + (max_y - min_y) * kScale;

  struct Values {
    std::optional<double> bit;
    std::optional<double> phase;
  };
  std::vector<std::optional<Values>> values(cal.qubit_count());
  double max_bit = 0.0;
  double max_phase = 0.0;
  for (const auto& r : report.qubits) {
    Values v;
    if (mode == MapMode::rates) {
      if (auto it = r.rates.find(RateKind::p_bitflip); it != r.rates.end()) v.bit = it->second.estimate;
      if (auto it = r.rates.find(RateKind::p_phaseflip); it != r.rates.end()) v.phase = it->second.estimate;
    } else {
      v.bit = r.guide.p_bitflip;
      v.phase = r.guide.p_phaseflip;
    }
    if (v.bit) max_bit = std::max(max_bit, *v.bit);
    if (v.phase) max_phase = std::max(max_phase, *v.phase);
    values.at(r.qubit) = v;
  }

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" data-mode=\"{}\">\n",
      width, height, width, height, mode == MapMode::rates ? "rates" : "calibration");
  svg +=
      "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
      "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#202020\"/>"
      "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#909090\" stroke-width=\"2\"/>"
      "</pattern></defs>\n";
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#000000\"/>\n", width, height);

  for (const auto& [edge, props] : cal.cx_gates()) {
    std::string color = "#5a5a5a";
    if (mode == MapMode::calibration) {
      color = props.error > kCxGreenScale
                  ? "#808080"
                  : fmt::format("#00{:02x}00", channel(props.error, kCxGreenScale));
    }
    svg += fmt::format(
        "<line class=\"link\" data-edge=\"{}-{}\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" "
        "stroke=\"{}\" stroke-width=\"6\"/>\n",
        edge.a, edge.b, px(layout[edge.a]), py(layout[edge.a]), px(layout[edge.b]), py(layout[edge.b]), color);
  }

  for (QubitIndex q = 0; q < cal.qubit_count(); ++q) {
    const double x = px(layout[q]);
    const double y = py(layout[q]);
    if (!values[q]) {
      svg += fmt::format(
          "<circle class=\"qubit\" data-qubit=\"{}\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"{:.0f}\" "
          "fill=\"url(#hatch)\" stroke=\"#ffffff\"/>\n",
          q, x, y, kRadius);
    } else {
      const auto& v = *values[q];
      const int red = v.bit ? channel(*v.bit, max_bit) : 0;
      const int blue = v.phase ? channel(*v.phase, max_phase) : 0;
      svg += fmt::format(
          "<circle class=\"qubit\" data-qubit=\"{}\" cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"{:.0f}\" "
          "fill=\"#{:02x}00{:02x}\" stroke=\"#ffffff\"/>\n",
          q, x, y, kRadius, red, blue);
      svg += fmt::format(
          "<text class=\"values\" data-qubit=\"{}\" x=\"{:.1f}\" y=\"{:.1f}\" fill=\"#ffffff\" "
          "font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}/{}</text>\n",
          q, x, y + kRadius + 13, percent_label(v.bit), percent_label(v.phase));
    }
    svg += fmt::format(
        "<text class=\"label\" x=\"{:.1f}\" y=\"{:.1f}\" fill=\"#ffffff\" font-family=\"sans-serif\" "
        "font-size=\"12\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>\n",
        x, y, q);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace synbench
