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

#include "synbench/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "synbench/rng.hpp"

namespace synbench {

DetectionMatrix::DetectionMatrix(std::size_t shots, std::size_t aux_count, int syndrome_rounds)
    : shots_(shots),
      aux_count_(aux_count),
      rounds_(syndrome_rounds + 1),
      columns_(aux_count * static_cast<std::size_t>(syndrome_rounds + 1),
               std::vector<std::uint64_t>((shots + 63) / 64, 0)) {}

std::size_t DetectionMatrix::index(DetectorId d) const {
  if (d.aux >= aux_count_ || d.round < 1 || d.round > rounds_) {
    throw EstimatorError(fmt::format("no detector (aux {}, round {})", d.aux, d.round));
  }
  return d.aux * static_cast<std::size_t>(rounds_) + static_cast<std::size_t>(d.round - 1);
}

bool DetectionMatrix::get(std::size_t shot, DetectorId d) const {
  return (column(d)[shot / 64] >> (shot % 64)) & 1U;
}

void DetectionMatrix::set(std::size_t shot, DetectorId d, bool value) {
  auto& word = columns_[index(d)][shot / 64];
  const std::uint64_t mask = std::uint64_t{1} << (shot % 64);
  word = value ? (word | mask) : (word & ~mask);
}

std::size_t DetectionMatrix::count(DetectorId d) const {
  std::size_t n = 0;
  for (auto w : column(d)) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t DetectionMatrix::coincidences(DetectorId a, DetectorId b) const {
  const auto& x = column(a);
  const auto& y = column(b);
  std::size_t n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) n += static_cast<std::size_t>(std::popcount(x[k] & y[k]));
  return n;
}

bool DetectionMatrix::all_zero() const {
  for (const auto& col : columns_) {
    for (auto w : col) {
      if (w != 0) return false;
    }
  }
  return true;
}

DetectionMatrix detection_events(const Circuit& circuit, const ShotTable& shots) {
  if (shots.slots() != circuit.slot_count()) {
    throw EstimatorError(fmt::format("shot records have {} slots, circuit has {}", shots.slots(),
                                     circuit.slot_count()));
  }
  const int T = circuit.rounds();
  DetectionMatrix dm(shots.shots(), circuit.aux_count(), T);
  for (std::size_t s = 0; s < shots.shots(); ++s) {
    const ShotResult bits = shots[s];
    for (std::size_t k = 0; k < circuit.aux_count(); ++k) {
      std::uint8_t prev = 0;
      for (int r = 1; r <= T; ++r) {
        const std::uint8_t cur = bits[circuit.aux_slot(k, r)];
        if (cur != prev) dm.set(s, {k, r}, true);
        prev = cur;
      }
      const std::uint8_t inferred = bits[circuit.final_slot(k)] ^ bits[circuit.final_slot(k + 1)];
      if (inferred != prev) dm.set(s, {k, T + 1}, true);
    }
  }
  return dm;
}

double shared_flip_probability(double v_i, double v_j, double c, EstimatorMode mode, bool* clamped) {
  const double den = (1.0 - 2.0 * v_i) * (1.0 - 2.0 * v_j);
  if (!(v_i < 0.5 && v_j < 0.5 && den > 0.0)) {
    throw EstimatorError(fmt::format(
        "detector rates ({:.4f}, {:.4f}) at or above 1/2; the data does not fit the flip model", v_i,
        v_j));
  }
  if (clamped) *clamped = false;
  double p = 0.0;
  if (mode == EstimatorMode::first_order) {
    p = c / den;
  } else {
    const double radicand = 1.0 + 4.0 * c / den;
    if (!(radicand > 0.0)) {
      if (clamped) *clamped = true;
      return 0.0;
    }
    p = 0.5 - 0.5 / std::sqrt(radicand);
  }
  if (p < 0.0) {
    if (clamped) *clamped = true;
    return 0.0;
  }
  return std::min(p, 0.5);
}

namespace {

struct PairCounts {
  std::int64_t n = 0;
  std::int64_t n11 = 0;
  std::int64_t n10 = 0;
  std::int64_t n01 = 0;

  double estimate(EstimatorMode mode, bool* clamped) const {
    const double total = static_cast<double>(n);
    const double v_i = static_cast<double>(n11 + n10) / total;
    const double v_j = static_cast<double>(n11 + n01) / total;
    const double c = static_cast<double>(n11) / total - v_i * v_j;
    return shared_flip_probability(v_i, v_j, c, mode, clamped);
  }
};

// Nonparametric bootstrap over shots. The statistic depends only on the four
// joint outcome counts, so resampling shots with replacement is a multinomial
// draw over those counts.
double bootstrap_std_error(const PairCounts& counts, const EstimatorOptions& options,
                           std::uint64_t stream, int* valid_out) {
  Stream rng(derive_seed(options.seed, stream));
  const double total = static_cast<double>(counts.n);
  const double q11 = counts.n11 / total;
  const double q10 = counts.n10 / total;
  const double q01 = counts.n01 / total;
  std::vector<double> draws;
  for (int b = 0; b < options.bootstrap_resamples; ++b) {
    PairCounts rs;
    rs.n = counts.n;
    std::int64_t left = counts.n;
    double mass = 1.0;
    auto take = [&](double q) -> std::int64_t {
      if (left <= 0 || q <= 0.0) return 0;
      const double p = std::min(1.0, q / mass);
      mass -= q;
      std::binomial_distribution<std::int64_t> dist(left, p);
      const std::int64_t k = dist(rng.engine());
      left -= k;
      return k;
    };
    rs.n11 = take(q11);
    rs.n10 = take(q10);
    rs.n01 = take(q01);
    try {
      draws.push_back(rs.estimate(options.mode, nullptr));
    } catch (const EstimatorError&) {
      // resample fell outside the model; it carries no spread information
    }
  }
  *valid_out = static_cast<int>(draws.size());
  if (draws.size() < 2) return 0.0;
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  return std::sqrt(ss / static_cast<double>(draws.size() - 1));
}

}  // namespace

RateEstimate correlation_rate(const DetectionMatrix& dm, DetectorId det_i, DetectorId det_j,
                              const EstimatorOptions& options) {
  if (det_i == det_j) throw EstimatorError("correlation_rate needs two distinct detectors");
  if (dm.shots() == 0) throw EstimatorError("correlation_rate needs at least one shot");
  PairCounts counts;
  counts.n = static_cast<std::int64_t>(dm.shots());
  counts.n11 = static_cast<std::int64_t>(dm.coincidences(det_i, det_j));
  counts.n10 = static_cast<std::int64_t>(dm.count(det_i)) - counts.n11;
  counts.n01 = static_cast<std::int64_t>(dm.count(det_j)) - counts.n11;

  RateEstimate out;
  out.shots = dm.shots();
  out.det_i = det_i;
  out.det_j = det_j;
  bool clamped = false;
  out.estimate = counts.estimate(options.mode, &clamped);
  if (clamped) out.flags.push_back("anticorrelated");
  if (dm.shots() < kMinReliableShots) out.flags.push_back("low_shots");

  int valid = 0;
  const std::uint64_t stream = dm.index(det_i) * dm.detector_count() + dm.index(det_j);
  out.std_error = bootstrap_std_error(counts, options, stream, &valid);
  if (options.bootstrap_resamples > 0 && valid < 2) out.flags.push_back("bootstrap_degenerate");
  return out;
}

std::string to_string(RateKind k) {
  switch (k) {
    case RateKind::p_0to1:
      return "p_0to1";
    case RateKind::p_1to0:
      return "p_1to0";
    case RateKind::p_bitflip:
      return "p_bitflip";
    case RateKind::p_phaseflip:
      return "p_phaseflip";
  }
  return "?";
}

RateKind parse_rate_kind(const std::string& s) {
  for (auto k : {RateKind::p_0to1, RateKind::p_1to0, RateKind::p_bitflip, RateKind::p_phaseflip}) {
    if (to_string(k) == s) return k;
  }
  throw EstimatorError(fmt::format("unknown rate kind '{}'", s));
}

IdleRate extract_idle_rates(const Circuit& circuit, const DetectionMatrix& dm, int round,
                            const EstimatorOptions& options) {
  if (circuit.code_count() != 3) {
    throw EstimatorError("idle-rate extraction needs a distance-3 circuit");
  }
  if (round < 2 || round > circuit.rounds()) {
    throw EstimatorError(fmt::format("round {} outside [2, {}]", round, circuit.rounds()));
  }
  IdleRate rate;
  rate.estimate = correlation_rate(dm, {0, round}, {1, round}, options);
  rate.estimate.encoding = circuit.encoding();
  if (circuit.encoding() == Encoding::phase_flip) {
    rate.kind = RateKind::p_phaseflip;
  } else if (circuit.dd_scope() != DdScope::none) {
    rate.kind = RateKind::p_bitflip;
  } else {
    rate.kind = circuit.logical_value() == 0 ? RateKind::p_0to1 : RateKind::p_1to0;
  }
  return rate;
}

double median(std::vector<double> values) {
  if (values.empty()) throw EstimatorError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchmarkReport aggregate_device(std::vector<QubitResult> results, const DeviceCalibration& cal,
                                 RunMetadata metadata) {
  if (results.empty()) throw EstimatorError("no benchmarked qubits to aggregate");
  std::sort(results.begin(), results.end(),
            [](const QubitResult& a, const QubitResult& b) { return a.qubit < b.qubit; });

  const bool dd = metadata.dd_scope != DdScope::none;
  BenchmarkReport report;
  std::map<RateKind, std::vector<double>> columns;
  std::vector<bool> benchmarked(cal.qubit_count(), false);
  for (auto& r : results) {
    benchmarked.at(r.qubit) = true;
    if (!r.exposure.empty()) {
      auto pick = [&](Encoding e) {
        auto it = r.exposure.find(e);
        return static_cast<double>((it != r.exposure.end() ? it->second : r.exposure.begin()->second).count());
      };
      r.guide = guide_values(cal, r.qubit, pick(Encoding::bit_flip), dd);
      r.guide.p_phaseflip = guide_values(cal, r.qubit, pick(Encoding::phase_flip), dd).p_phaseflip;
    }
    for (const auto& [kind, est] : r.rates) columns[kind].push_back(est.estimate);
  }
  for (auto& [kind, values] : columns) report.medians[kind] = median(values);
  for (QubitIndex q = 0; q < cal.qubit_count(); ++q) {
    if (!benchmarked[q]) report.unbenchmarked.push_back(q);
  }
  report.metadata = std::move(metadata);
  report.qubits = std::move(results);
  return report;
}

}  // namespace synbench
