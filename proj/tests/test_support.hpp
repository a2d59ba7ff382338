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

// Reference implementations used to cross-check the library in tests.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "synbench/analysis.hpp"
#include "synbench/circuit.hpp"
#include "synbench/device.hpp"
#include "synbench/noise.hpp"

namespace synbench::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(SYNBENCH_DATA_DIR) / name;
}

inline const DeviceCalibration& falcon() {
  static const DeviceCalibration cal = load_calibration(data_path("falcon27.json"));
  return cal;
}

struct UniformParams {
  double t1_ns = 100000.0;
  double t2_ns = 80000.0;
  double t2_star_ns = 60000.0;
  double p0 = 1.0;
  double readout_ns = 50.0;
  double readout_error = 0.0;
  double x_ns = 35.0;
  double cx_ns = 300.0;
  double cx_error = 0.0;
};

/// Path graph 0-1-...-(n-1) with identical qubits and couplers.
inline DeviceCalibration uniform_path(std::size_t n, const UniformParams& u = {}) {
  std::vector<QubitProperties> qubits(n);
  for (auto& q : qubits) {
    q.t1_ns = u.t1_ns;
    q.t2_ns = u.t2_ns;
    q.t2_star_ns = u.t2_star_ns;
    q.p0 = u.p0;
    q.readout_ns = u.readout_ns;
    q.readout_error = u.readout_error;
    q.x_ns = u.x_ns;
  }
  std::map<Edge, CxProperties> cx;
  for (std::size_t i = 0; i + 1 < n; ++i) cx[Edge(i, i + 1)] = {u.cx_error, u.cx_ns};
  return DeviceCalibration(std::move(qubits), std::move(cx));
}

/// Random connected-ish graph; some couplers exceed the usable error bound.
inline DeviceCalibration random_graph(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<QubitProperties> qubits(n);
  for (auto& q : qubits) {
    q.t1_ns = 50000.0 + 100000.0 * unit(rng);
    q.t2_ns = q.t1_ns;
    q.t2_star_ns = q.t2_ns;
    q.readout_ns = 4000.0;
  }
  std::map<Edge, CxProperties> cx;
  const double density = 0.15 + 0.3 * unit(rng);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (unit(rng) < density) {
        // Coarse values so ties occur.
        double err = std::round(unit(rng) * 8.0) / 200.0;
        if (unit(rng) < 0.08) err = 0.51 + 0.4 * unit(rng);
        cx[Edge(a, b)] = {err, 300.0};
      }
    }
  }
  return DeviceCalibration(std::move(qubits), std::move(cx));
}

/// All simple 5-paths centered on `center`, by brute force over vertex tuples.
inline std::set<std::array<QubitIndex, 5>> brute_force_lines(const DeviceCalibration& cal,
                                                             QubitIndex center) {
  std::set<std::array<QubitIndex, 5>> out;
  const std::size_t n = cal.qubit_count();
  for (QubitIndex a = 0; a < n; ++a)
    for (QubitIndex b = 0; b < n; ++b)
      for (QubitIndex d = 0; d < n; ++d)
        for (QubitIndex e = 0; e < n; ++e) {
          std::array<QubitIndex, 5> p{a, b, center, d, e};
          std::set<QubitIndex> distinct(p.begin(), p.end());
          if (distinct.size() != 5) continue;
          bool path = true;
          for (int i = 0; i < 4; ++i) path = path && cal.has_edge(p[i], p[i + 1]);
          if (!path) continue;
          if (p[0] > p[4]) std::reverse(p.begin(), p.end());
          out.insert(p);
        }
  return out;
}

/// Selection by explicit ranking of the brute-force set.
inline std::optional<std::array<QubitIndex, 5>> brute_force_select(const DeviceCalibration& cal,
                                                                   QubitIndex center) {
  std::optional<std::tuple<double, double, std::array<QubitIndex, 5>>> best;
  for (const auto& p : brute_force_lines(cal, center)) {
    double all = 0.0;
    double mid = 0.0;
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      const double e = cal.cx(p[i], p[i + 1]).error;
      ok = ok && e <= kMaxUsableCxError;
      all = std::max(all, e);
      if (i == 1 || i == 2) mid = std::max(mid, e);
    }
    if (!ok) continue;
    auto key = std::make_tuple(mid, all, p);
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return std::get<2>(*best);
}

/// Exact moments of the shared-fault model: a shared flip with probability p
/// plus independent flips q_i, q_j on each detector.
struct Moments {
  double v_i = 0.0;
  double v_j = 0.0;
  double c = 0.0;  // covariance
};

inline Moments shared_fault_moments(double p, double q_i, double q_j) {
  double v_i = 0.0;
  double v_j = 0.0;
  double both = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double w = (s ? p : 1 - p) * (a ? q_i : 1 - q_i) * (b ? q_j : 1 - q_j);
        const int di = s ^ a;
        const int dj = s ^ b;
        v_i += di * w;
        v_j += dj * w;
        both += di * dj * w;
      }
  return {v_i, v_j, both - v_i * v_j};
}

/// Samples a 2-detector DetectionMatrix from the shared-fault model.
inline DetectionMatrix sample_shared_fault(std::mt19937_64& rng, std::size_t shots, double p,
                                           double q_i, double q_j) {
  std::bernoulli_distribution shared(p), fi(q_i), fj(q_j);
  DetectionMatrix dm(shots, 2, 2);
  for (std::size_t s = 0; s < shots; ++s) {
    const bool x = shared(rng);
    dm.set(s, {0, 2}, x ^ fi(rng));
    dm.set(s, {1, 2}, x ^ fj(rng));
  }
  return dm;
}

/// Idle time of `qubit` in the round-th inter-round window, computed as
/// window length minus the qubit's non-idle instruction time inside it.
inline Nanos walk_idle_exposure(const Circuit& c, QubitIndex qubit, int round) {
  Nanos start = Nanos::max();
  for (const auto& ins : c.instructions()) {
    if (ins.kind != OpKind::measure) continue;
    for (std::size_t k = 0; k < c.aux_count(); ++k) {
      if (ins.slot == c.aux_slot(k, round)) start = std::min(start, ins.start);
    }
  }
  Nanos end = c.total_duration();
  const bool code = c.role(qubit) == QubitRole::code;
  for (const auto& ins : c.instructions()) {
    if (ins.start < start) continue;
    if (std::find(ins.qubits.begin(), ins.qubits.end(), qubit) == ins.qubits.end()) continue;
    if (ins.kind == OpKind::cx || (code && ins.kind == OpKind::measure)) {
      end = ins.start;
      break;
    }
  }
  Nanos busy{0};
  for (const auto& ins : c.instructions()) {
    if (ins.kind == OpKind::delay) continue;
    if (std::find(ins.qubits.begin(), ins.qubits.end(), qubit) == ins.qubits.end()) continue;
    const Nanos lo = std::max(ins.start, start);
    const Nanos hi = std::min(ins.end(), end);
    if (hi > lo) busy += hi - lo;
  }
  // Before the qubit's first instruction inside the window it may still be busy
  // with an operation that started earlier; that is counted above via clipping.
  return (end - start) - busy;
}

/// Exact probability that `qubit` ends the interval [from, to) in a state
/// different from the noise-free one, by propagating a two-state Markov chain
/// through its delays and x pulses.
inline double markov_flip(const Circuit& c, const IdleChannel& ch, QubitIndex qubit, Nanos from,
                          Nanos to, int initial, bool x_basis) {
  std::array<double, 2> prob{0.0, 0.0};
  prob[initial] = 1.0;
  int ideal = initial;
  for (const auto& ins : c.instructions()) {
    if (ins.qubits.empty() || ins.qubits[0] != qubit) continue;
    if (ins.start < from || ins.start >= to) continue;
    if (ins.kind == OpKind::x && !x_basis) {
      std::swap(prob[0], prob[1]);
      ideal ^= 1;
    } else if (ins.kind == OpKind::delay) {
      const double d = static_cast<double>((std::min(ins.end(), to) - ins.start).count());
      std::array<double, 2> next{};
      if (x_basis) {
        const double f = ch.p_phaseflip(d, ins.echoed);
        next[0] = prob[0] * (1 - f) + prob[1] * f;
        next[1] = prob[1] * (1 - f) + prob[0] * f;
      } else {
        const double up = ch.p_0to1(d);
        const double down = ch.p_1to0(d);
        next[0] = prob[0] * (1 - up) + prob[1] * down;
        next[1] = prob[1] * (1 - down) + prob[0] * up;
      }
      prob = next;
    }
  }
  return prob[ideal ^ 1];
}

/// End of the last cx on `qubit` before `t` and start of the first cx after it.
inline std::pair<Nanos, Nanos> cx_bracket(const Circuit& c, QubitIndex qubit, Nanos t) {
  Nanos lo{0};
  Nanos hi = c.total_duration();
  for (const auto& ins : c.instructions()) {
    if (ins.kind != OpKind::cx) continue;
    if (std::find(ins.qubits.begin(), ins.qubits.end(), qubit) == ins.qubits.end()) continue;
    if (ins.end() <= t) lo = std::max(lo, ins.end());
    if (ins.start >= t && ins.start < hi) hi = ins.start;
  }
  return {lo, hi};
}

}  // namespace synbench::testing
