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

#include "synbench/report.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace synbench {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "synbench-report/1";

json estimate_json(const RateEstimate& e) {
  json j;
  j["estimate"] = e.estimate;
  j["std_error"] = e.std_error;
  j["shots"] = e.shots;
  j["detectors"] = json::array({json::array({e.det_i.aux, e.det_i.round}),
                                json::array({e.det_j.aux, e.det_j.round})});
  j["encoding"] = e.encoding ? json(to_string(*e.encoding)) : json(nullptr);
  j["flags"] = e.flags;
  return j;
}

RateEstimate estimate_from_json(const json& j) {
  RateEstimate e;
  e.estimate = j.at("estimate").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.shots = j.at("shots").get<std::size_t>();
  const auto& dets = j.at("detectors");
  e.det_i = {dets.at(0).at(0).get<std::size_t>(), dets.at(0).at(1).get<int>()};
  e.det_j = {dets.at(1).at(0).get<std::size_t>(), dets.at(1).at(1).get<int>()};
  if (!j.at("encoding").is_null()) e.encoding = parse_encoding(j.at("encoding").get<std::string>());
  e.flags = j.at("flags").get<std::vector<std::string>>();
  return e;
}

}  // namespace

double guide_for(const GuideValues& guide, RateKind kind) {
  switch (kind) {
    case RateKind::p_0to1:
      return guide.p_0to1;
    case RateKind::p_1to0:
      return guide.p_1to0;
    case RateKind::p_bitflip:
      return guide.p_bitflip;
    case RateKind::p_phaseflip:
      return guide.p_phaseflip;
  }
  return 0.0;
}

std::string report_to_json(const BenchmarkReport& report) {
  json doc;
  doc["format"] = kFormat;
  const auto& m = report.metadata;
  json meta;
  meta["seed"] = m.seed;
  meta["shots"] = m.shots;
  meta["rounds"] = m.rounds;
  meta["dd_scope"] = to_string(m.dd_scope);
  meta["extra_delay_fraction"] = m.extra_delay_fraction ? json(*m.extra_delay_fraction) : json(nullptr);
  meta["calibration"] = m.calibration;
  meta["noise"] = m.noise.empty() ? json::object() : json::parse(m.noise);
  doc["metadata"] = meta;

  json qubits = json::array();
  for (const auto& r : report.qubits) {
    json q;
    q["qubit"] = r.qubit;
    q["line"] = r.line.qubits;
    q["max_cx_center"] = r.line.max_cx_center;
    q["max_cx_all"] = r.line.max_cx_all;
    json exposure = json::object();
    for (const auto& [enc, t] : r.exposure) exposure[to_string(enc)] = t.count();
    q["exposure_ns"] = exposure;
    q["guide"] = {{"p_0to1", r.guide.p_0to1},
                  {"p_1to0", r.guide.p_1to0},
                  {"p_bitflip", r.guide.p_bitflip},
                  {"p_phaseflip", r.guide.p_phaseflip}};
    json rates = json::object();
    for (const auto& [kind, est] : r.rates) rates[to_string(kind)] = estimate_json(est);
    q["rates"] = rates;
    q["p0_estimate"] = r.p0_estimate ? json(*r.p0_estimate) : json(nullptr);
    qubits.push_back(q);
  }
  doc["qubits"] = qubits;
  json medians = json::object();
  for (const auto& [kind, v] : report.medians) medians[to_string(kind)] = v;
  doc["medians"] = medians;
  doc["unbenchmarked"] = report.unbenchmarked;
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

BenchmarkReport report_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != kFormat) {
      throw EstimatorError("not a synbench report");
    }
    BenchmarkReport report;
    const auto& meta = doc.at("metadata");
    report.metadata.seed = meta.at("seed").get<std::uint64_t>();
    report.metadata.shots = meta.at("shots").get<std::size_t>();
    report.metadata.rounds = meta.at("rounds").get<int>();
    report.metadata.dd_scope = parse_dd_scope(meta.at("dd_scope").get<std::string>());
    if (!meta.at("extra_delay_fraction").is_null()) {
      report.metadata.extra_delay_fraction = meta.at("extra_delay_fraction").get<double>();
    }
    report.metadata.calibration = meta.at("calibration").get<std::string>();
    report.metadata.noise = meta.at("noise").dump();
    for (const auto& q : doc.at("qubits")) {
      QubitResult r;
      r.qubit = q.at("qubit").get<QubitIndex>();
      r.line.qubits = q.at("line").get<std::array<QubitIndex, 5>>();
      r.line.max_cx_center = q.at("max_cx_center").get<double>();
      r.line.max_cx_all = q.at("max_cx_all").get<double>();
      for (const auto& [enc, t] : q.at("exposure_ns").items()) {
        r.exposure[parse_encoding(enc)] = Nanos(t.get<std::int64_t>());
      }
      const auto& g = q.at("guide");
      r.guide = {g.at("p_1to0").get<double>(), g.at("p_0to1").get<double>(),
                 g.at("p_bitflip").get<double>(), g.at("p_phaseflip").get<double>()};
      for (const auto& [kind, est] : q.at("rates").items()) {
        r.rates[parse_rate_kind(kind)] = estimate_from_json(est);
      }
      if (!q.at("p0_estimate").is_null()) r.p0_estimate = q.at("p0_estimate").get<double>();
      report.qubits.push_back(std::move(r));
    }
    for (const auto& [kind, v] : doc.at("medians").items()) {
      report.medians[parse_rate_kind(kind)] = v.get<double>();
    }
    report.unbenchmarked = doc.at("unbenchmarked").get<std::vector<QubitIndex>>();
    report.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return report;
  } catch (const json::exception& e) {
    throw EstimatorError(fmt::format("malformed report: {}", e.what()));
  }
}

BenchmarkReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw EstimatorError(fmt::format("cannot open report {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

std::string report_to_csv(const BenchmarkReport& report) {
  std::string out = "qubit,encoding,rate,estimate,std_error,guide,exposure_ns\n";
  for (const auto& r : report.qubits) {
    for (const auto& [kind, est] : r.rates) {
      const Encoding enc = est.encoding.value_or(
          kind == RateKind::p_phaseflip ? Encoding::phase_flip : Encoding::bit_flip);
      auto it = r.exposure.find(enc);
      const long long exposure = it == r.exposure.end() ? 0 : it->second.count();
      out += fmt::format("{},{},{},{},{},{},{}\n", r.qubit, to_string(enc), to_string(kind),
                         est.estimate, est.std_error, guide_for(r.guide, kind), exposure);
    }
  }
  return out;
}

}  // namespace synbench
