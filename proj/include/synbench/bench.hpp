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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synbench/analysis.hpp"
#include "synbench/circuit.hpp"
#include "synbench/device.hpp"
#include "synbench/noise.hpp"

namespace synbench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declarative run description; every field has a default so a config naming
/// only the calibration is complete.
struct RunConfig {
  std::filesystem::path calibration;
  std::size_t shots = 10000;
  std::uint64_t seed = 1;
  int rounds = 2;
  std::vector<Encoding> encodings{Encoding::bit_flip, Encoding::phase_flip};
  std::vector<int> logical_values{0, 1};
  DdScope dd_scope = DdScope::code_only;
  /// Extra delay after each measurement round as a fraction of the central
  /// qubit's T1 (bit flip) or T2 (phase flip); nullopt means no extra delay.
  std::optional<double> extra_delay_fraction;
  Nanos inter_round_gap{0};
  std::optional<Nanos> reset_duration;
  NoiseOptions noise;
  int delay_slices = 1;
  int bootstrap_resamples = 200;
  std::filesystem::path output_dir = "synbench_out";
  bool dump_shots = false;
  bool gzip_shots = false;
};

/// Parses a JSON config. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON of the noise options, as recorded in report metadata.
std::string noise_options_json(const NoiseOptions& options);

/// Worker count from SYNBENCH_WORKERS (default 1).
unsigned workers_from_env();

/// Extra delay used for a qubit's circuits of the given encoding.
Nanos extra_delay_for(const RunConfig& config, const DeviceCalibration& cal, QubitIndex center,
                      Encoding encoding);

/// Plans the device, builds/simulates/analyzes every (qubit, encoding,
/// logical value) circuit and aggregates the results. Throws BenchError when
/// nothing can be benchmarked.
BenchmarkReport run_benchmark(const RunConfig& config, const DeviceCalibration& cal,
                              unsigned workers = 1);

/// Writes report.json, report.csv, rates.svg and calibration.svg into
/// config.output_dir.
void write_artifacts(const BenchmarkReport& report, const DeviceCalibration& cal,
                     const RunConfig& config);

}  // namespace synbench
