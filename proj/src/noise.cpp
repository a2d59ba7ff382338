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

#include "synbench/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace synbench {

namespace {

double saturation(double t_ns, double timescale_ns) {
  if (t_ns <= 0.0) return 0.0;
  return -std::expm1(-t_ns / timescale_ns);
}

}  // namespace

double IdleChannel::decay(double t_ns) const { return saturation(t_ns, t1_ns); }

double IdleChannel::p_phaseflip(double t_ns, bool echoed) const {
  return 0.5 * saturation(t_ns, echoed ? t2_ns : t2_star_ns);
}

std::string to_string(NoiseChannel c) {
  switch (c) {
    case NoiseChannel::cx:
      return "cx";
    case NoiseChannel::readout:
      return "readout";
    case NoiseChannel::relaxation:
      return "relaxation";
    case NoiseChannel::dephasing:
      return "dephasing";
    case NoiseChannel::crosstalk:
      return "crosstalk";
  }
  return "?";
}

NoiseChannel parse_noise_channel(const std::string& s) {
  for (auto c : {NoiseChannel::cx, NoiseChannel::readout, NoiseChannel::relaxation,
                 NoiseChannel::dephasing, NoiseChannel::crosstalk}) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument(fmt::format("unknown noise channel '{}'", s));
}

NoiseModel NoiseModel::zero(const DeviceCalibration& cal) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  NoiseModel m;
  m.idle.assign(cal.qubit_count(), IdleChannel{inf, inf, inf, 1.0});
  m.readout_flip.assign(cal.qubit_count(), 0.0);
  for (const auto& [edge, props] : cal.cx_gates()) m.cx_depolarizing[edge] = 0.0;
  for (QubitIndex q = 0; q < cal.qubit_count(); ++q) m.neighbors.push_back(cal.neighbors(q));
  return m;
}

double NoiseModel::cx_error(QubitIndex a, QubitIndex b) const {
  auto it = cx_depolarizing.find(Edge(a, b));
  return it == cx_depolarizing.end() ? 0.0 : it->second;
}

NoiseModel compile_noise(const DeviceCalibration& cal, const NoiseOptions& options) {
  if (!(options.crosstalk_eta >= 0.0 && options.crosstalk_eta <= 1.0)) {
    throw std::invalid_argument("crosstalk_eta must be in [0, 1]");
  }
  if (!(options.prep_error >= 0.0 && options.prep_error <= 1.0)) {
    throw std::invalid_argument("prep_error must be in [0, 1]");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto off = [&](NoiseChannel c) { return options.disabled.contains(c); };

  NoiseModel m = NoiseModel::zero(cal);
  for (QubitIndex q = 0; q < cal.qubit_count(); ++q) {
    const auto& p = cal.qubit(q);
    const bool idle_here = !options.idle_qubits || options.idle_qubits->contains(q);
    IdleChannel ch{inf, inf, inf, p.p0};
    if (idle_here && !off(NoiseChannel::relaxation)) ch.t1_ns = p.t1_ns;
    if (idle_here && !off(NoiseChannel::dephasing)) {
      ch.t2_ns = p.t2_ns;
      ch.t2_star_ns = p.t2_star_ns;
    }
    m.idle[q] = ch;
    if (!off(NoiseChannel::readout)) m.readout_flip[q] = p.readout_error;
  }
  if (!off(NoiseChannel::cx)) {
    for (const auto& [edge, props] : cal.cx_gates()) m.cx_depolarizing[edge] = props.error;
  }
  m.prep_error = options.prep_error;
  m.crosstalk = options.enable_crosstalk && !off(NoiseChannel::crosstalk);
  m.crosstalk_eta = m.crosstalk ? options.crosstalk_eta : 0.0;
  return m;
}

GuideValues guide_values(const DeviceCalibration& cal, QubitIndex qubit, double t_ns, bool dd) {
  if (t_ns < 0.0) throw std::invalid_argument("guide_values: negative idle time");
  const auto& p = cal.qubit(qubit);
  const IdleChannel ch{p.t1_ns, p.t2_ns, p.t2_star_ns, p.p0};
  GuideValues g;
  g.p_1to0 = ch.p_1to0(t_ns);
  g.p_0to1 = ch.p_0to1(t_ns);
  g.p_bitflip = dd ? ch.decay(0.5 * t_ns) : 0.5 * (g.p_1to0 + g.p_0to1);
  g.p_phaseflip = ch.p_phaseflip(t_ns, true);
  return g;
}

}  // namespace synbench
