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

#include "synbench/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "json.hpp"

namespace synbench {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

bool is_duration(double t) { return !std::isnan(t) && t > 0.0; }

}  // namespace

DeviceCalibration::DeviceCalibration(std::vector<QubitProperties> qubits,
                                     std::map<Edge, CxProperties> cx,
                                     std::optional<std::vector<LayoutPoint>> layout)
    : qubits_(std::move(qubits)), cx_(std::move(cx)), layout_(std::move(layout)) {
  if (qubits_.empty()) {
    throw CalibrationError("calibration has no qubits");
  }
  for (std::size_t q = 0; q < qubits_.size(); ++q) {
    const auto& p = qubits_[q];
    if (!is_duration(p.t1_ns) || !is_duration(p.t2_ns) || !is_duration(p.t2_star_ns) ||
        !is_duration(p.readout_ns) || !is_duration(p.x_ns) || std::isinf(p.readout_ns) ||
        std::isinf(p.x_ns)) {
      throw CalibrationError(fmt::format("qubit {}: durations must be positive", q));
    }
    if (!is_probability(p.p0)) {
      throw CalibrationError(fmt::format("qubit {}: p0 {} out of range [0, 1]", q, p.p0));
    }
    if (!is_probability(p.readout_error)) {
      throw CalibrationError(
          fmt::format("qubit {}: readout_error {} out of range [0, 1]", q, p.readout_error));
    }
    if (p.t2_star_ns > p.t2_ns) {
      throw CalibrationError(fmt::format("qubit {}: T2* ({} ns) exceeds T2 ({} ns)", q,
                                         p.t2_star_ns, p.t2_ns));
    }
    if (p.t2_ns > 2.0 * p.t1_ns) {
      warnings_.push_back(fmt::format("qubit {}: T2 ({} ns) exceeds 2*T1 ({} ns)", q,
                                      p.t2_ns, 2.0 * p.t1_ns));
    }
  }

  adjacency_.resize(qubits_.size());
  for (const auto& [edge, props] : cx_) {
    if (edge.a == edge.b) {
      throw CalibrationError(fmt::format("self-loop on qubit {}", edge.a));
    }
    if (edge.b >= qubits_.size()) {
      throw CalibrationError(fmt::format("edge ({}, {}) references unknown qubit", edge.a,
                                         edge.b));
    }
    if (!is_probability(props.error)) {
      throw CalibrationError(fmt::format("cx ({}, {}): error {} out of range [0, 1]", edge.a,
                                         edge.b, props.error));
    }
    if (!is_duration(props.duration_ns) || std::isinf(props.duration_ns)) {
      throw CalibrationError(
          fmt::format("cx ({}, {}): duration must be positive", edge.a, edge.b));
    }
    adjacency_[edge.a].push_back(edge.b);
    adjacency_[edge.b].push_back(edge.a);
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
  }

  if (layout_ && layout_->size() != qubits_.size()) {
    throw CalibrationError(fmt::format("layout has {} points for {} qubits", layout_->size(),
                                       qubits_.size()));
  }
}

const QubitProperties& DeviceCalibration::qubit(QubitIndex q) const {
  if (q >= qubits_.size()) {
    throw CalibrationError(fmt::format("unknown qubit {}", q));
  }
  return qubits_[q];
}

bool DeviceCalibration::has_edge(QubitIndex a, QubitIndex b) const {
  return a != b && cx_.contains(Edge(a, b));
}

const CxProperties& DeviceCalibration::cx(QubitIndex a, QubitIndex b) const {
  auto it = cx_.find(Edge(a, b));
  if (a == b || it == cx_.end()) {
    throw CalibrationError(fmt::format("no cx gate between {} and {}", a, b));
  }
  return it->second;
}

const std::vector<QubitIndex>& DeviceCalibration::neighbors(QubitIndex q) const {
  if (q >= adjacency_.size()) {
    throw CalibrationError(fmt::format("unknown qubit {}", q));
  }
  return adjacency_[q];
}

namespace {

using nlohmann::json;

double time_field(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  return v.get<double>();
}

DeviceCalibration parse_calibration(const json& doc) {
  const auto& qubit_docs = doc.at("qubits");
  if (!qubit_docs.is_array()) {
    throw CalibrationError("'qubits' must be an array");
  }
  const std::size_t n = qubit_docs.size();
  std::vector<QubitProperties> qubits(n);
  std::vector<bool> seen(n, false);
  for (const auto& qd : qubit_docs) {
    const auto id = qd.at("id").get<std::int64_t>();
    if (id < 0 || static_cast<std::size_t>(id) >= n || seen[id]) {
      throw CalibrationError(fmt::format("qubit ids must be unique and in [0, {}): got {}", n, id));
    }
    seen[id] = true;
    QubitProperties p;
    p.t1_ns = time_field(qd, "t1_ns");
    p.t2_ns = time_field(qd, "t2_ns");
    p.t2_star_ns = qd.contains("t2_star_ns") ? time_field(qd, "t2_star_ns") : 0.5 * p.t2_ns;
    p.p0 = qd.value("p0", 1.0);
    p.readout_error = qd.value("readout_error", 0.01);
    p.readout_ns = qd.at("readout_ns").get<double>();
    p.x_ns = qd.value("x_ns", 35.0);
    qubits[id] = p;
  }

  std::map<Edge, CxProperties> cx;
  for (const auto& gd : doc.at("cx_gates")) {
    const auto pair = gd.at("qubits").get<std::vector<std::int64_t>>();
    if (pair.size() != 2) {
      throw CalibrationError("cx 'qubits' must have exactly two entries");
    }
    if (pair[0] < 0 || pair[1] < 0 || static_cast<std::size_t>(pair[0]) >= n ||
        static_cast<std::size_t>(pair[1]) >= n) {
      throw CalibrationError(
          fmt::format("cx ({}, {}) references unknown qubit", pair[0], pair[1]));
    }
    Edge edge(static_cast<QubitIndex>(pair[0]), static_cast<QubitIndex>(pair[1]));
    CxProperties props{gd.at("error").get<double>(), gd.at("duration_ns").get<double>()};
    if (!cx.emplace(edge, props).second) {
      throw CalibrationError(fmt::format("duplicate cx ({}, {})", edge.a, edge.b));
    }
  }

  std::optional<std::vector<LayoutPoint>> layout;
  if (doc.contains("layout")) {
    std::vector<LayoutPoint> points(n);
    std::vector<bool> placed(n, false);
    for (const auto& ld : doc.at("layout")) {
      const auto id = ld.at("id").get<std::int64_t>();
      if (id < 0 || static_cast<std::size_t>(id) >= n) {
        throw CalibrationError(fmt::format("layout references unknown qubit {}", id));
      }
      points[id] = {ld.at("x").get<double>(), ld.at("y").get<double>()};
      placed[id] = true;
    }
    if (std::find(placed.begin(), placed.end(), false) != placed.end()) {
      throw CalibrationError("layout must place every qubit");
    }
    layout = std::move(points);
  }

  return DeviceCalibration(std::move(qubits), std::move(cx), std::move(layout));
}

}  // namespace

DeviceCalibration load_calibration(std::istream& source) {
  json doc;
  try {
    doc = json::parse(source);
    return parse_calibration(doc);
  } catch (const json::exception& e) {
    throw CalibrationError(fmt::format("malformed calibration: {}", e.what()));
  }
}

DeviceCalibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CalibrationError(fmt::format("cannot open calibration file {}", path.string()));
  }
  return load_calibration(in);
}

BenchLine make_line(const DeviceCalibration& cal, std::array<QubitIndex, 5> qubits) {
  std::set<QubitIndex> distinct(qubits.begin(), qubits.end());
  if (distinct.size() != qubits.size()) {
    throw CalibrationError("line qubits must be distinct");
  }
  if (qubits.front() > qubits.back()) {
    std::reverse(qubits.begin(), qubits.end());
  }
  BenchLine line;
  line.qubits = qubits;
  for (std::size_t i = 0; i + 1 < qubits.size(); ++i) {
    const double err = cal.cx(qubits[i], qubits[i + 1]).error;
    line.max_cx_all = std::max(line.max_cx_all, err);
    if (i == 1 || i == 2) {
      line.max_cx_center = std::max(line.max_cx_center, err);
    }
  }
  return line;
}

std::vector<BenchLine> enumerate_lines(const DeviceCalibration& cal, QubitIndex center) {
  std::set<std::array<QubitIndex, 5>> seen;
  std::vector<BenchLine> lines;
  const auto& around = cal.neighbors(center);
  for (QubitIndex left : around) {
    for (QubitIndex right : around) {
      if (left == right) continue;
      for (QubitIndex left_end : cal.neighbors(left)) {
        if (left_end == center || left_end == right) continue;
        for (QubitIndex right_end : cal.neighbors(right)) {
          if (right_end == center || right_end == left || right_end == left_end) continue;
          BenchLine line = make_line(cal, {left_end, left, center, right, right_end});
          if (seen.insert(line.qubits).second) {
            lines.push_back(line);
          }
        }
      }
    }
  }
  std::sort(lines.begin(), lines.end(),
            [](const BenchLine& x, const BenchLine& y) { return x.qubits < y.qubits; });
  return lines;
}

std::optional<BenchLine> select_line(const DeviceCalibration& cal,
                                     const std::vector<BenchLine>& candidates) {
  std::optional<BenchLine> best;
  for (const auto& line : candidates) {
    if (line.center() != candidates.front().center()) {
      throw CalibrationError("select_line: candidates have different centers");
    }
    bool usable = true;
    for (std::size_t i = 0; i + 1 < line.qubits.size(); ++i) {
      if (cal.cx(line.qubits[i], line.qubits[i + 1]).error > kMaxUsableCxError) {
        usable = false;
      }
    }
    if (!usable) continue;
    auto key = [](const BenchLine& l) {
      return std::tie(l.max_cx_center, l.max_cx_all, l.qubits);
    };
    if (!best || key(line) < key(*best)) {
      best = line;
    }
  }
  return best;
}

std::vector<std::optional<BenchLine>> plan_device(const DeviceCalibration& cal) {
  std::vector<std::optional<BenchLine>> plan(cal.qubit_count());
  for (QubitIndex q = 0; q < cal.qubit_count(); ++q) {
    plan[q] = select_line(cal, enumerate_lines(cal, q));
  }
  return plan;
}

}  // namespace synbench
