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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "synbench/circuit.hpp"
#include "synbench/device.hpp"
#include "synbench/noise.hpp"
#include "synbench/simulator.hpp"

namespace synbench {

class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Detector of auxiliary `aux` (0-based along the line) in round 1..T+1;
/// round T+1 is inferred from the final code-qubit readout.
struct DetectorId {
  std::size_t aux = 0;
  int round = 1;

  auto operator<=>(const DetectorId&) const = default;
};

/// shots x detectors bit matrix, stored column-wise as packed 64-bit words.
class DetectionMatrix {
 public:
  DetectionMatrix(std::size_t shots, std::size_t aux_count, int syndrome_rounds);

  std::size_t shots() const { return shots_; }
  std::size_t aux_count() const { return aux_count_; }
  /// Number of detector rounds, T + 1.
  int rounds() const { return rounds_; }
  std::size_t detector_count() const { return aux_count_ * static_cast<std::size_t>(rounds_); }
  std::size_t index(DetectorId d) const;

  bool get(std::size_t shot, DetectorId d) const;
  void set(std::size_t shot, DetectorId d, bool value);
  /// Number of shots in which the detector fired.
  std::size_t count(DetectorId d) const;
  /// Number of shots in which both detectors fired.
  std::size_t coincidences(DetectorId a, DetectorId b) const;
  bool all_zero() const;

 private:
  const std::vector<std::uint64_t>& column(DetectorId d) const { return columns_[index(d)]; }

  std::size_t shots_;
  std::size_t aux_count_;
  int rounds_;
  std::vector<std::vector<std::uint64_t>> columns_;
};

/// d(a,1) = s(a,1); d(a,r) = s(a,r) ^ s(a,r-1); d(a,T+1) = s(a,T) ^ m_left ^ m_right.
DetectionMatrix detection_events(const Circuit& circuit, const ShotTable& shots);

struct RateEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t shots = 0;
  DetectorId det_i;
  DetectorId det_j;
  std::optional<Encoding> encoding;
  std::vector<std::string> flags;  // e.g. "low_shots", "anticorrelated"
};

enum class EstimatorMode { exact, first_order };

struct EstimatorOptions {
  int bootstrap_resamples = 200;
  std::uint64_t seed = 0;
  EstimatorMode mode = EstimatorMode::exact;
};

/// Below this many shots an estimate carries the "low_shots" flag.
inline constexpr std::size_t kMinReliableShots = 1000;

/// Probability of the shared flip behind two detectors, given the firing
/// rates v_i, v_j and covariance c:
///   p = 1/2 - 1/(2 sqrt(1 + 4c / ((1 - 2 v_i)(1 - 2 v_j))))
/// Throws EstimatorError when (1 - 2 v_i)(1 - 2 v_j) <= 0. A non-positive
/// radicand or negative result yields 0 and sets `clamped`.
double shared_flip_probability(double v_i, double v_j, double c, EstimatorMode mode,
                               bool* clamped = nullptr);

/// Shared-flip estimate for a detector pair with a bootstrap standard error.
RateEstimate correlation_rate(const DetectionMatrix& dm, DetectorId det_i, DetectorId det_j,
                              const EstimatorOptions& options = {});

enum class RateKind { p_0to1, p_1to0, p_bitflip, p_phaseflip };

std::string to_string(RateKind k);
RateKind parse_rate_kind(const std::string& s);

struct IdleRate {
  RateKind kind;
  RateEstimate estimate;
};

/// Idle flip probability of the central code qubit of a d=3 circuit between
/// syndrome rounds round-1 and round, from the ((0, round), (1, round)) pair.
/// Bit-flip circuits without decoupling on the center resolve the direction
/// (logical 0 -> p_0to1, logical 1 -> p_1to0).
IdleRate extract_idle_rates(const Circuit& circuit, const DetectionMatrix& dm, int round = 2,
                            const EstimatorOptions& options = {});

/// Median; even-length input averages the central pair. Throws on empty input.
double median(std::vector<double> values);

struct QubitResult {
  QubitIndex qubit = 0;
  BenchLine line;
  std::map<RateKind, RateEstimate> rates;
  /// Central-qubit idle exposure of the first inter-round window, per encoding.
  std::map<Encoding, Nanos> exposure;
  GuideValues guide;
  /// p0 inferred from p_1to0 / (p_0to1 + p_1to0) when both directions ran.
  std::optional<double> p0_estimate;
};

struct RunMetadata {
  std::uint64_t seed = 0;
  std::size_t shots = 0;
  int rounds = 2;
  DdScope dd_scope = DdScope::none;
  std::optional<double> extra_delay_fraction;  // of T1 (bit flip) / T2 (phase flip)
  std::string calibration;
  std::string noise;  // canonical JSON of the noise options
};

struct BenchmarkReport {
  RunMetadata metadata;
  std::vector<QubitResult> qubits;  // ordered by qubit index
  std::map<RateKind, double> medians;
  std::vector<QubitIndex> unbenchmarked;
  std::vector<std::string> warnings;
};

/// Orders results by qubit, attaches guide values from each qubit's idle
/// exposure and computes per-rate medians. Throws EstimatorError on empty input.
BenchmarkReport aggregate_device(std::vector<QubitResult> results, const DeviceCalibration& cal,
                                 RunMetadata metadata);

}  // namespace synbench
