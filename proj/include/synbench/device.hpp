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

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace synbench {

using QubitIndex = std::size_t;

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-qubit calibration. Times are in nanoseconds; T1/T2 may be infinite.
struct QubitProperties {
  double t1_ns = 0.0;
  double t2_ns = 0.0;
  double t2_star_ns = 0.0;
  double p0 = 1.0;  // equilibrium |0> population
  double readout_error = 0.01;
  double readout_ns = 0.0;
  double x_ns = 35.0;
};

struct CxProperties {
  double error = 0.0;
  double duration_ns = 0.0;
};

/// Unordered qubit pair stored with the smaller index first.
struct Edge {
  QubitIndex a = 0;
  QubitIndex b = 0;

  Edge() = default;
  Edge(QubitIndex u, QubitIndex v) : a(u < v ? u : v), b(u < v ? v : u) {}

  auto operator<=>(const Edge&) const = default;
};

struct LayoutPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Coupling graph plus calibration data for one device. Validated on
/// construction and immutable afterwards.
class DeviceCalibration {
 public:
  DeviceCalibration(std::vector<QubitProperties> qubits, std::map<Edge, CxProperties> cx,
                    std::optional<std::vector<LayoutPoint>> layout = std::nullopt);

  std::size_t qubit_count() const { return qubits_.size(); }
  const QubitProperties& qubit(QubitIndex q) const;
  const std::map<Edge, CxProperties>& cx_gates() const { return cx_; }
  bool has_edge(QubitIndex a, QubitIndex b) const;
  /// Throws CalibrationError if (a, b) is not an edge.
  const CxProperties& cx(QubitIndex a, QubitIndex b) const;
  /// Sorted neighbor list.
  const std::vector<QubitIndex>& neighbors(QubitIndex q) const;
  std::size_t degree(QubitIndex q) const { return neighbors(q).size(); }

  const std::optional<std::vector<LayoutPoint>>& layout() const { return layout_; }

  /// Non-fatal findings, e.g. T2 > 2*T1.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<QubitProperties> qubits_;
  std::map<Edge, CxProperties> cx_;
  std::vector<std::vector<QubitIndex>> adjacency_;
  std::optional<std::vector<LayoutPoint>> layout_;
  std::vector<std::string> warnings_;
};

/// Parses the JSON calibration format. Missing optional fields take their
/// defaults: p0 = 1, t2_star_ns = t2_ns / 2, readout_error = 0.01, x_ns = 35.
DeviceCalibration load_calibration(std::istream& source);
DeviceCalibration load_calibration(const std::filesystem::path& path);

/// Five-qubit line (code, aux, code, aux, code) centered on qubits[2].
/// Canonical orientation has the smaller endpoint first.
struct BenchLine {
  std::array<QubitIndex, 5> qubits{};
  double max_cx_center = 0.0;
  double max_cx_all = 0.0;

  QubitIndex center() const { return qubits[2]; }
  bool operator==(const BenchLine& other) const { return qubits == other.qubits; }
};

/// cx errors above this value disqualify a line.
inline constexpr double kMaxUsableCxError = 0.5;

/// Builds a BenchLine from an explicit qubit sequence, canonicalizing its
/// orientation. Throws CalibrationError if consecutive qubits are not coupled
/// or the qubits are not distinct.
BenchLine make_line(const DeviceCalibration& cal, std::array<QubitIndex, 5> qubits);

/// All simple five-vertex paths centered on `center`, each listed once in
/// canonical orientation, sorted by qubit sequence.
std::vector<BenchLine> enumerate_lines(const DeviceCalibration& cal, QubitIndex center);

/// Drops lines containing a cx with error above kMaxUsableCxError, then picks
/// the minimum of (max_cx_center, max_cx_all, qubit sequence).
std::optional<BenchLine> select_line(const DeviceCalibration& cal,
                                     const std::vector<BenchLine>& candidates);

/// Selected line for every qubit (nullopt when the qubit cannot be benchmarked).
std::vector<std::optional<BenchLine>> plan_device(const DeviceCalibration& cal);

}  // namespace synbench
