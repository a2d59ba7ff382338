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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synbench/device.hpp"

namespace synbench {

/// Idle-time error probabilities of one qubit.
///
///   p_0to1(t) + p_1to0(t) = 1 - exp(-t/T1),  p_0to1 / p_1to0 = (1 - p0) / p0
///   p_phaseflip(t)         = (1 - exp(-t/T2)) / 2   (T2* when not echoed)
struct IdleChannel {
  double t1_ns;
  double t2_ns;
  double t2_star_ns;
  double p0 = 1.0;

  double decay(double t_ns) const;  // 1 - exp(-t/T1)
  double p_0to1(double t_ns) const { return (1.0 - p0) * decay(t_ns); }
  double p_1to0(double t_ns) const { return p0 * decay(t_ns); }
  double p_phaseflip(double t_ns, bool echoed) const;
};

enum class NoiseChannel { cx, readout, relaxation, dephasing, crosstalk };

std::string to_string(NoiseChannel c);
NoiseChannel parse_noise_channel(const std::string& s);

struct NoiseOptions {
  double crosstalk_eta = 1.0;
  bool enable_crosstalk = true;
  double prep_error = 0.0;
  std::set<NoiseChannel> disabled;
  /// When set, idle channels (relaxation, dephasing) act only on these qubits.
  std::optional<std::set<QubitIndex>> idle_qubits;
};

/// Per-instruction stochastic channels compiled from a calibration.
struct NoiseModel {
  std::vector<IdleChannel> idle;
  std::map<Edge, double> cx_depolarizing;  // probability of a non-identity 2q Pauli
  std::vector<double> readout_flip;
  double prep_error = 0.0;
  double crosstalk_eta = 0.0;
  bool crosstalk = false;
  std::vector<std::vector<QubitIndex>> neighbors;

  /// All channels off on a device with `qubit_count` qubits and the given graph.
  static NoiseModel zero(const DeviceCalibration& cal);

  double cx_error(QubitIndex a, QubitIndex b) const;
};

NoiseModel compile_noise(const DeviceCalibration& cal, const NoiseOptions& options = {});

struct GuideValues {
  double p_1to0 = 0.0;     // no decoupling: p0 * (1 - exp(-t/T1))
  double p_0to1 = 0.0;     // no decoupling: (1 - p0) * (1 - exp(-t/T1))
  double p_bitflip = 0.0;  // decoupled: 1 - exp(-(t/2)/T1); otherwise (p_1to0 + p_0to1) / 2
  double p_phaseflip = 0.0;  // (1 - exp(-t/T2)) / 2
};

/// Analytic idle-error expectations for `qubit` idling `t_ns`.
GuideValues guide_values(const DeviceCalibration& cal, QubitIndex qubit, double t_ns, bool dd);

}  // namespace synbench
