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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synbench/analysis.hpp"
#include "synbench/device.hpp"

namespace synbench {

enum class MapMode { rates, calibration };

MapMode parse_map_mode(const std::string& s);

/// Full-brightness cx error in calibration mode; worse links are grey.
inline constexpr double kCxGreenScale = 0.02;

/// Device map as SVG. Qubit fill encodes p_bitflip in red and p_phaseflip in
/// blue, each scaled to its device maximum; the two values are printed as
/// "bitflip/phaseflip" percentages with one decimal. Calibration mode shows
/// the analytic guide values and colors cx links by error. Unbenchmarked
/// qubits are hatched.
std::string render_device_map(const BenchmarkReport& report, const DeviceCalibration& cal, MapMode mode);

/// Layout from the calibration when present, else a seeded force-directed one.
std::vector<LayoutPoint> device_layout(const DeviceCalibration& cal, std::uint64_t seed = 7);

/// "12.3" for 0.1234; "–" for a missing value.
std::string percent_label(const std::optional<double>& p);

}  // namespace synbench
