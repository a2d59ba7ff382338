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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <string>

#include <fmt/format.h>

#include "synbench/analysis.hpp"
#include "synbench/bench.hpp"
#include "synbench/report.hpp"
#include "synbench/simulator.hpp"
#include "test_support.hpp"

namespace synbench {
namespace {

using testing::falcon;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

// 1 ------------------------------------------------------------------------

struct GuideCase {
  const char* name;
  Encoding encoding;
  DdScope dd;
  std::vector<int> logicals;
  NoiseChannel channel;
  double nominal;
};

Outcome guide_values_case(const GuideCase& gc) {
  Outcome out;
  const auto cal = testing::uniform_path(5);
  const std::array<QubitIndex, 5> path{0, 1, 2, 3, 4};
  const auto& q = cal.qubit(2);
  const double timescale = gc.encoding == Encoding::bit_flip ? q.t1_ns : q.t2_ns;

  NoiseOptions no;
  no.enable_crosstalk = false;
  for (auto ch : {NoiseChannel::cx, NoiseChannel::readout, NoiseChannel::relaxation,
                  NoiseChannel::dephasing, NoiseChannel::crosstalk}) {
    if (ch != gc.channel) no.disabled.insert(ch);
  }
  const auto noise = compile_noise(cal, no);

  double est = 0.0, var = 0.0, exact = 0.0, closed = 0.0;
  for (int v : gc.logicals) {
    BuildOptions o;
    o.encoding = gc.encoding;
    o.logical_value = v;
    o.dd_scope = gc.dd;
    o.extra_delay = Nanos(std::llround(timescale / 8));
    const auto c = build_repetition_circuit(path, cal, o);
    const auto dm = detection_events(c, run_shots(c, noise, 1000000, 2024 + v));
    EstimatorOptions eo;
    eo.seed = 99 + v;
    const auto rate = extract_idle_rates(c, dm, 2, eo).estimate;
    est += rate.estimate;
    var += rate.std_error * rate.std_error;

    const auto [from, to] = testing::cx_bracket(c, 2, idle_window(c, 2, 1).start);
    const bool x_basis = gc.encoding == Encoding::phase_flip;
    exact += testing::markov_flip(c, noise.idle[2], 2, from, to, v, x_basis);
    const double t = static_cast<double>(idle_exposure(c, 2)[0].count());
    const auto g = guide_values(cal, 2, t, gc.dd != DdScope::none);
    closed += x_basis ? g.p_phaseflip : (gc.dd != DdScope::none ? g.p_bitflip : g.p_1to0);
  }
  const double n = static_cast<double>(gc.logicals.size());
  est /= n;
  exact /= n;
  closed /= n;
  const double se = std::sqrt(var) / n;

  out.note(fmt::format("{}: estimate {:.4f} +/- {:.4f}, exact {:.4f}, closed form {:.4f}, nominal {:.3f}",
                       gc.name, est, se, exact, closed, gc.nominal));
  out.require(std::abs(est - exact) <= 3 * se, "not within 3 SE of the exact channel value");
  out.require(std::abs(est - closed) <= 0.05 * closed, "not within 5% of the closed form");
  out.require(std::abs(est - gc.nominal) <= 0.05 * gc.nominal, "not within 5% of the nominal value");
  return out;
}

Outcome criterion_guide_values() {
  Outcome all;
  const GuideCase cases[] = {
      {"P_1to0", Encoding::bit_flip, DdScope::none, {1}, NoiseChannel::relaxation, 0.118},
      {"P_0<->1", Encoding::bit_flip, DdScope::code_only, {0, 1}, NoiseChannel::relaxation, 0.061},
      {"P_+<->-", Encoding::phase_flip, DdScope::code_only, {0}, NoiseChannel::dephasing, 0.059},
  };
  for (const auto& gc : cases) {
    const auto r = guide_values_case(gc);
    all.pass = all.pass && r.pass;
    all.note(r.detail);
  }
  return all;
}

// 2 ------------------------------------------------------------------------

Outcome criterion_estimator() {
  Outcome out;
  double worst = 0.0;
  for (int a = 0; a <= 30; ++a)
    for (int b = 0; b <= 30; ++b)
      for (int c = 0; c <= 30; ++c) {
        const double p = a / 100.0;
        const auto m = testing::shared_fault_moments(p, b / 100.0, c / 100.0);
        worst = std::max(worst, std::abs(shared_flip_probability(m.v_i, m.v_j, m.c, EstimatorMode::exact) - p));
      }
  out.note(fmt::format("max moment-grid error {:.1e}", worst));
  out.require(worst <= 1e-12, "moment grid error above 1e-12");

  std::mt19937_64 rng(2);
  int inside = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const auto dm = testing::sample_shared_fault(rng, 1000000, 0.05, 0.02, 0.03);
    EstimatorOptions o;
    o.seed = 1000 + t;
    const auto r = correlation_rate(dm, {0, 2}, {1, 2}, o);
    if (std::abs(r.estimate - 0.05) <= 4 * r.std_error) ++inside;
  }
  out.note(fmt::format("{}/{} sampled trials within 4 SE", inside, trials));
  out.require(inside >= 95, "fewer than 95 trials within 4 SE");
  return out;
}

// 3 ------------------------------------------------------------------------

Outcome criterion_line_selection() {
  Outcome out;
  const auto plan = plan_device(falcon());
  out.require(plan[7] && plan[7]->qubits == std::array<QubitIndex, 5>{1, 4, 7, 10, 12},
              "qubit 7 line differs");
  std::set<std::array<QubitIndex, 5>> got;
  for (const auto& l : enumerate_lines(falcon(), 22)) got.insert(l.qubits);
  const std::set<std::array<QubitIndex, 5>> want{
      {16, 19, 22, 25, 24}, {16, 19, 22, 25, 26}, {20, 19, 22, 25, 24}, {20, 19, 22, 25, 26}};
  std::set<std::array<QubitIndex, 5>> canon;
  for (auto l : want) {
    if (l[0] > l[4]) std::reverse(l.begin(), l.end());
    canon.insert(l);
  }
  out.require(got == canon, "qubit 22 candidates differ");
  int leaves = 0;
  for (QubitIndex q = 0; q < falcon().qubit_count(); ++q) {
    if (falcon().degree(q) == 1) {
      ++leaves;
      out.require(!plan[q], fmt::format("leaf {} has a line", q));
    }
  }

  std::mt19937_64 rng(100);
  int graphs = 0;
  bool bad_selected = false;
  for (; graphs < 100; ++graphs) {
    const auto cal = testing::random_graph(rng, 6 + graphs % 7);
    for (QubitIndex c = 0; c < cal.qubit_count(); ++c) {
      std::set<std::array<QubitIndex, 5>> mine;
      for (const auto& l : enumerate_lines(cal, c)) mine.insert(l.qubits);
      if (mine != testing::brute_force_lines(cal, c)) {
        out.require(false, fmt::format("enumeration mismatch on graph {}", graphs));
      }
      const auto sel = select_line(cal, enumerate_lines(cal, c));
      const auto ref = testing::brute_force_select(cal, c);
      if (sel.has_value() != ref.has_value() || (sel && sel->qubits != *ref)) {
        out.require(false, fmt::format("selection mismatch on graph {}", graphs));
      }
      if (sel && sel->max_cx_all > kMaxUsableCxError) bad_selected = true;
    }
  }
  // Explicit 0.51 coupler on the otherwise best candidate.
  std::vector<QubitProperties> qs(7, QubitProperties{1e5, 1e5, 5e4, 1, 0.01, 4000, 35});
  std::map<Edge, CxProperties> cx{{Edge(0, 1), {0.001, 300}}, {Edge(1, 2), {0.001, 300}},
                                  {Edge(2, 3), {0.001, 300}}, {Edge(3, 4), {0.51, 300}},
                                  {Edge(2, 5), {0.04, 300}},  {Edge(5, 6), {0.04, 300}}};
  DeviceCalibration cal(qs, cx);
  const auto sel = select_line(cal, enumerate_lines(cal, 2));
  bad_selected = bad_selected || !sel || sel->qubits == std::array<QubitIndex, 5>{0, 1, 2, 3, 4};
  out.require(!bad_selected, "a candidate with a cx error above 0.5 was selected");
  out.note(fmt::format("qubit 7 -> 1-4-7-10-12, qubit 22 -> {} candidates, {} leaves excluded, {} random graphs checked",
                       got.size(), leaves, graphs));
  return out;
}

// 4 ------------------------------------------------------------------------

struct MedianWithError {
  double median = 0.0;
  double sigma = 0.0;
};

MedianWithError phase_median(DdScope dd, bool crosstalk) {
  RunConfig cfg;
  cfg.shots = 100000;
  cfg.seed = 31;
  cfg.encodings = {Encoding::phase_flip};
  cfg.logical_values = {0};
  cfg.dd_scope = dd;
  cfg.extra_delay_fraction = 0.125;
  cfg.noise.enable_crosstalk = crosstalk;
  cfg.noise.crosstalk_eta = 1.0;
  const auto report = run_benchmark(cfg, falcon(), workers_from_env());
  std::vector<std::pair<double, double>> rows;
  for (const auto& q : report.qubits) {
    const auto& e = q.rates.at(RateKind::p_phaseflip);
    rows.push_back({e.estimate, e.std_error});
  }
  std::sort(rows.begin(), rows.end());
  const std::size_t n = rows.size();
  MedianWithError m;
  if (n % 2 == 1) {
    m.median = rows[n / 2].first;
    m.sigma = rows[n / 2].second;
  } else {
    m.median = 0.5 * (rows[n / 2 - 1].first + rows[n / 2].first);
    m.sigma = 0.5 * std::hypot(rows[n / 2 - 1].second, rows[n / 2].second);
  }
  return m;
}

Outcome criterion_dd_anomaly() {
  Outcome out;
  const auto all_on = phase_median(DdScope::all_qubits, true);
  const auto code_on = phase_median(DdScope::code_only, true);
  const double ratio = all_on.median / code_on.median;
  out.note(fmt::format("crosstalk on: all_qubits {:.2f}% vs code_only {:.2f}% (ratio {:.2f})",
                       100 * all_on.median, 100 * code_on.median, ratio));
  out.require(all_on.median > code_on.median, "ordering violated");
  out.require(ratio >= 1.5, "ratio below 1.5");

  const auto all_off = phase_median(DdScope::all_qubits, false);
  const auto code_off = phase_median(DdScope::code_only, false);
  const double sigma = std::hypot(all_off.sigma, code_off.sigma);
  out.note(fmt::format("crosstalk off: {:.2f}% vs {:.2f}% (diff {:.2f} sigma)", 100 * all_off.median,
                       100 * code_off.median, std::abs(all_off.median - code_off.median) / sigma));
  out.require(std::abs(all_off.median - code_off.median) <= 3 * sigma, "medians differ by more than 3 sigma");
  return out;
}

// 5 ------------------------------------------------------------------------

Outcome criterion_noise_free() {
  Outcome out;
  const auto zero = NoiseModel::zero(falcon());
  int variants = 0;
  for (auto e : {Encoding::bit_flip, Encoding::phase_flip})
    for (int v : {0, 1})
      for (auto dd : {DdScope::code_only, DdScope::all_qubits}) {
        BuildOptions o{e, v, 2, Nanos(std::llround(falcon().qubit(7).t1_ns / 8)), dd};
        const auto c = build_repetition_circuit(*plan_device(falcon())[7], falcon(), o);
        const auto dm = detection_events(c, run_shots(c, zero, 10000, 5));
        out.require(dm.all_zero(), fmt::format("{} logical {} {} fired", to_string(e), v, to_string(dd)));
        ++variants;
      }
  out.note(fmt::format("{} variants x 10^4 shots all-zero", variants));
  return out;
}

// 6 ------------------------------------------------------------------------

Outcome criterion_fault_injection() {
  Outcome out;
  const auto zero = NoiseModel::zero(falcon());
  int variants = 0;
  for (auto e : {Encoding::bit_flip, Encoding::phase_flip})
    for (int v : {0, 1})
      for (auto dd : {DdScope::none, DdScope::code_only, DdScope::all_qubits}) {
        BuildOptions o{e, v, 2, Nanos(10000), dd};
        const auto c = build_repetition_circuit(*plan_device(falcon())[7], falcon(), o);
        const Nanos at = testing::cx_bracket(c, 7, idle_window(c, 7, 1).start).first;
        const auto f = inject_fault(c, 7, at, e == Encoding::bit_flip ? Pauli::X : Pauli::Z);
        const auto dm = detection_events(f, run_shots(f, zero, 1000, 6));
        const bool pair = dm.count({0, 2}) == dm.shots() && dm.count({1, 2}) == dm.shots();
        std::size_t others = 0;
        for (std::size_t k = 0; k < 2; ++k)
          for (int r : {1, 3}) others += dm.count({k, r});
        out.require(pair && others == 0,
                    fmt::format("{} logical {} {}: wrong detectors", to_string(e), v, to_string(dd)));
        ++variants;
      }
  out.note(fmt::format("{} variants, round-2 pair in 100% of shots", variants));
  return out;
}

// 7 ------------------------------------------------------------------------

Outcome criterion_determinism() {
  Outcome out;
  RunConfig cfg;
  cfg.calibration = testing::data_path("falcon27.json");
  cfg.shots = 5000;
  cfg.seed = 8;
  cfg.extra_delay_fraction = 0.125;
  const auto a = report_to_json(run_benchmark(cfg, falcon(), 1));
  const auto b = report_to_json(run_benchmark(cfg, falcon(), 1));
  const auto c = report_to_json(run_benchmark(cfg, falcon(), 4));
  out.require(a == b, "repeat run differs");
  out.require(a == c, "worker count changes the report");
  out.note(fmt::format("report {} bytes identical across repeats and 1/4 workers", a.size()));
  return out;
}

// 8 ------------------------------------------------------------------------

Outcome criterion_identities() {
  Outcome out;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  auto rel = [](double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); };
  for (int i = 0; i < 100000; ++i) {
    const double t1 = 1e3 + 1e6 * u(rng);
    const double t2 = 2 * t1 * std::max(u(rng), 1e-3);
    const double p0 = std::max(u(rng), 1e-9);
    const double t = 1e6 * u(rng);
    IdleChannel ch{t1, t2, 0.5 * t2, p0};
    worst = std::max(worst, rel(ch.p_0to1(t) + ch.p_1to0(t), -std::expm1(-t / t1)));
    if (p0 < 1.0 && t > 0) worst = std::max(worst, rel(ch.p_0to1(t) / ch.p_1to0(t), (1 - p0) / p0));
    worst = std::max(worst, rel(ch.p_phaseflip(t, true), -0.5 * std::expm1(-t / t2)));
    worst = std::max(worst, rel(ch.p_phaseflip(t, false), -0.5 * std::expm1(-t / (0.5 * t2))));
  }
  IdleChannel ch{5e4, 6e4, 3e4, 0.97};
  const double lim = std::max({std::abs(ch.p_1to0(1e12) - 0.97), std::abs(ch.p_0to1(1e12) - 0.03),
                               std::abs(ch.p_phaseflip(1e12, true) - 0.5)});
  out.note(fmt::format("max relative identity error {:.1e}, limit error {:.1e}", worst, lim));
  out.require(worst <= 1e-12, "identity error above 1e-12");
  out.require(lim <= 1e-12, "long-time limits not reached");
  return out;
}

}  // namespace
}  // namespace synbench

int main() {
  using namespace synbench;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"guide-value reproduction", criterion_guide_values},
      {"estimator oracle", criterion_estimator},
      {"line selection fixtures", criterion_line_selection},
      {"dd-scope anomaly ordering", criterion_dd_anomaly},
      {"noise-free soundness", criterion_noise_free},
      {"fault-injection sensitivity", criterion_fault_injection},
      {"determinism", criterion_determinism},
      {"idle channel identities", criterion_identities},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("[{}] {}. {} ({:.1f}s): {}", o.pass ? "PASS" : "FAIL", index, name, secs,
                             o.detail)
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << fmt::format("{}/{} criteria passed", index - failed, index) << std::endl;
  return failed == 0 ? 0 : 1;
}
