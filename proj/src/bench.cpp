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

#include "synbench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "json.hpp"
#include "synbench/render.hpp"
#include "synbench/report.hpp"
#include "synbench/rng.hpp"
#include "synbench/simulator.hpp"

namespace synbench {

using nlohmann::json;

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  try {
    const json doc = json::parse(text);
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    if (doc.contains("calibration")) cfg.calibration = resolve(doc.at("calibration").get<std::string>());
    if (doc.contains("shots")) {
      const auto shots = doc.at("shots").get<std::int64_t>();
      if (shots < 1) throw ConfigError("shots must be >= 1");
      cfg.shots = static_cast<std::size_t>(shots);
    }
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.rounds = doc.value("rounds", cfg.rounds);
    if (cfg.rounds < 2) throw ConfigError("rounds must be >= 2");
    if (doc.contains("encodings")) {
      cfg.encodings.clear();
      for (const auto& e : doc.at("encodings")) cfg.encodings.push_back(parse_encoding(e.get<std::string>()));
    }
    if (doc.contains("logical_values")) {
      cfg.logical_values = doc.at("logical_values").get<std::vector<int>>();
      for (int v : cfg.logical_values) {
        if (v != 0 && v != 1) throw ConfigError("logical values must be 0 or 1");
      }
    }
    if (cfg.encodings.empty() || cfg.logical_values.empty()) {
      throw ConfigError("encodings and logical_values must be non-empty");
    }
    if (doc.contains("dd_scope")) cfg.dd_scope = parse_dd_scope(doc.at("dd_scope").get<std::string>());
    if (doc.contains("extra_delay")) {
      const auto& ed = doc.at("extra_delay");
      if (ed.is_string() && ed.get<std::string>() == "none") {
        cfg.extra_delay_fraction.reset();
      } else if (ed.is_string() && ed.get<std::string>() == "fraction") {
        cfg.extra_delay_fraction = 0.125;
      } else if (ed.is_object()) {
        const double f = ed.value("fraction", 0.125);
        if (!(f >= 0.0)) throw ConfigError("extra_delay fraction must be >= 0");
        cfg.extra_delay_fraction = f;
      } else {
        throw ConfigError(R"(extra_delay must be "none", "fraction" or {"fraction": f})");
      }
    }
    cfg.inter_round_gap = Nanos(doc.value("inter_round_gap_ns", std::int64_t{0}));
    if (cfg.inter_round_gap < Nanos(0)) throw ConfigError("inter_round_gap_ns must be >= 0");
    if (doc.contains("reset_ns")) cfg.reset_duration = Nanos(doc.at("reset_ns").get<std::int64_t>());
    if (doc.contains("noise")) {
      const auto& n = doc.at("noise");
      cfg.noise.crosstalk_eta = n.value("crosstalk_eta", cfg.noise.crosstalk_eta);
      cfg.noise.enable_crosstalk = n.value("enable_crosstalk", cfg.noise.enable_crosstalk);
      cfg.noise.prep_error = n.value("prep_error", cfg.noise.prep_error);
      if (n.contains("disable")) {
        for (const auto& c : n.at("disable")) cfg.noise.disabled.insert(parse_noise_channel(c.get<std::string>()));
      }
      if (!(cfg.noise.crosstalk_eta >= 0.0 && cfg.noise.crosstalk_eta <= 1.0)) {
        throw ConfigError("noise.crosstalk_eta must be in [0, 1]");
      }
      if (!(cfg.noise.prep_error >= 0.0 && cfg.noise.prep_error <= 1.0)) {
        throw ConfigError("noise.prep_error must be in [0, 1]");
      }
    }
    cfg.delay_slices = doc.value("delay_slices", cfg.delay_slices);
    if (cfg.delay_slices < 1) throw ConfigError("delay_slices must be >= 1");
    cfg.bootstrap_resamples = doc.value("bootstrap_resamples", cfg.bootstrap_resamples);
    if (cfg.bootstrap_resamples < 0) throw ConfigError("bootstrap_resamples must be >= 0");
    if (doc.contains("output_dir")) cfg.output_dir = resolve(doc.at("output_dir").get<std::string>());
    cfg.dump_shots = doc.value("dump_shots", cfg.dump_shots);
    cfg.gzip_shots = doc.value("gzip_shots", cfg.gzip_shots);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const CircuitError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.parent_path());
}

std::string noise_options_json(const NoiseOptions& options) {
  json n;
  n["crosstalk_eta"] = options.crosstalk_eta;
  n["enable_crosstalk"] = options.enable_crosstalk;
  n["prep_error"] = options.prep_error;
  json disabled = json::array();
  for (auto c : options.disabled) disabled.push_back(to_string(c));
  n["disable"] = disabled;
  return n.dump();
}

unsigned workers_from_env() {
  const char* env = std::getenv("SYNBENCH_WORKERS");
  if (env == nullptr) return 1;
  try {
    const long v = std::stol(env);
    return v < 1 ? 1u : static_cast<unsigned>(v);
  } catch (const std::exception&) {
    return 1;
  }
}

Nanos extra_delay_for(const RunConfig& config, const DeviceCalibration& cal, QubitIndex center,
                      Encoding encoding) {
  if (!config.extra_delay_fraction) return Nanos(0);
  const auto& p = cal.qubit(center);
  const double timescale = encoding == Encoding::bit_flip ? p.t1_ns : p.t2_ns;
  const double t = *config.extra_delay_fraction * timescale;
  if (!std::isfinite(t)) {
    throw BenchError(fmt::format("qubit {}: extra delay is not finite", center));
  }
  return Nanos(std::llround(t));
}

namespace {

struct Job {
  QubitIndex qubit;
  BenchLine line;
  Encoding encoding;
  int logical;
};

struct JobResult {
  std::optional<IdleRate> rate;
  Nanos exposure{0};
  std::string warning;
};

std::uint64_t job_key(const Job& j) {
  return (static_cast<std::uint64_t>(j.qubit) << 8) |
         (static_cast<std::uint64_t>(j.encoding == Encoding::phase_flip) << 1) |
         static_cast<std::uint64_t>(j.logical);
}

JobResult run_job(const Job& job, const RunConfig& config, const DeviceCalibration& cal,
                  const NoiseModel& noise) {
  BuildOptions opts;
  opts.encoding = job.encoding;
  opts.logical_value = job.logical;
  opts.rounds = config.rounds;
  opts.extra_delay = extra_delay_for(config, cal, job.qubit, job.encoding);
  opts.dd_scope = config.dd_scope;
  opts.inter_round_gap = config.inter_round_gap;
  opts.reset_duration = config.reset_duration;
  const Circuit circuit = build_repetition_circuit(job.line, cal, opts);

  const std::uint64_t key = job_key(job);
  SimulatorOptions sim;
  sim.delay_slices = config.delay_slices;
  const ShotTable shots = run_shots(circuit, noise, config.shots, derive_seed(config.seed, key), sim);
  if (config.dump_shots) {
    auto name = fmt::format("shots_q{}_{}_{}.txt{}", job.qubit, to_string(job.encoding), job.logical,
                            config.gzip_shots ? ".gz" : "");
    write_shot_dump(shots, config.output_dir / name, config.gzip_shots);
  }
  const DetectionMatrix dm = detection_events(circuit, shots);

  JobResult out;
  out.exposure = idle_exposure(circuit, job.qubit).front();
  EstimatorOptions est;
  est.bootstrap_resamples = config.bootstrap_resamples;
  est.seed = derive_seed(config.seed ^ 0x5bd1e995ULL, key);
  const std::string where =
      fmt::format("qubit {} ({}, logical {})", job.qubit, to_string(job.encoding), job.logical);
  try {
    out.rate = extract_idle_rates(circuit, dm, 2, est);
    if (!out.rate->estimate.flags.empty()) {
      out.warning = fmt::format("{}: {}", where, fmt::join(out.rate->estimate.flags, ", "));
    }
  } catch (const EstimatorError& e) {
    if (config.shots >= kMinReliableShots) throw BenchError(fmt::format("{}: {}", where, e.what()));
    out.warning = fmt::format("{}: no estimate ({})", where, e.what());
  }
  return out;
}

// Mean of estimates for the same quantity from independent runs.
RateEstimate pool(const std::vector<const RateEstimate*>& parts) {
  RateEstimate out = *parts.front();
  double sum = 0.0;
  double var = 0.0;
  std::size_t shots = 0;
  std::vector<std::string> flags;
  for (const RateEstimate* p : parts) {
    sum += p->estimate;
    var += p->std_error * p->std_error;
    shots += p->shots;
    for (const auto& f : p->flags) {
      if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
    }
  }
  const double n = static_cast<double>(parts.size());
  out.estimate = sum / n;
  out.std_error = std::sqrt(var) / n;
  out.shots = shots;
  out.flags = flags;
  return out;
}

}  // namespace

BenchmarkReport run_benchmark(const RunConfig& config, const DeviceCalibration& cal, unsigned workers) {
  const auto plan = plan_device(cal);
  std::vector<Job> jobs;
  for (QubitIndex q = 0; q < plan.size(); ++q) {
    if (!plan[q]) continue;
    for (Encoding enc : config.encodings) {
      for (int logical : config.logical_values) jobs.push_back({q, *plan[q], enc, logical});
    }
  }
  if (jobs.empty()) throw BenchError("no benchmarkable qubits on this device");
  if (config.dump_shots) std::filesystem::create_directories(config.output_dir);

  const NoiseModel noise = compile_noise(cal, config.noise);
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_job(jobs[i], config, cal, noise);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::string> warnings;
  std::map<QubitIndex, QubitResult> per_qubit;
  std::map<QubitIndex, std::map<RateKind, std::vector<const RateEstimate*>>> parts;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    QubitResult& r = per_qubit[job.qubit];
    r.qubit = job.qubit;
    r.line = job.line;
    r.exposure[job.encoding] = results[i].exposure;
    if (!results[i].warning.empty()) warnings.push_back(results[i].warning);
    if (results[i].rate) parts[job.qubit][results[i].rate->kind].push_back(&results[i].rate->estimate);
  }
  std::vector<QubitResult> collected;
  for (auto& [q, r] : per_qubit) {
    for (const auto& [kind, list] : parts[q]) r.rates[kind] = pool(list);
    // Without decoupling the two logical values isolate the two directions;
    // their mean is the symmetric flip probability.
    const auto up = r.rates.find(RateKind::p_0to1);
    const auto down = r.rates.find(RateKind::p_1to0);
    if (up != r.rates.end() && down != r.rates.end()) {
      r.rates[RateKind::p_bitflip] = pool({&up->second, &down->second});
      const double total = up->second.estimate + down->second.estimate;
      if (total > 0.0) r.p0_estimate = down->second.estimate / total;
    } else if (up != r.rates.end() || down != r.rates.end()) {
      r.rates[RateKind::p_bitflip] = (up != r.rates.end() ? up : down)->second;
    }
    collected.push_back(std::move(r));
  }

  RunMetadata meta;
  meta.seed = config.seed;
  meta.shots = config.shots;
  meta.rounds = config.rounds;
  meta.dd_scope = config.dd_scope;
  meta.extra_delay_fraction = config.extra_delay_fraction;
  meta.calibration = config.calibration.empty() ? "" : std::filesystem::absolute(config.calibration).lexically_normal().string();
  meta.noise = noise_options_json(config.noise);
  BenchmarkReport report = aggregate_device(std::move(collected), cal, std::move(meta));
  report.warnings = std::move(warnings);
  for (const auto& w : cal.warnings()) report.warnings.push_back(w);
  return report;
}

void write_artifacts(const BenchmarkReport& report, const DeviceCalibration& cal, const RunConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  auto write = [&](const char* name, const std::string& content) {
    std::ofstream out(config.output_dir / name, std::ios::binary);
    if (!out) throw BenchError(fmt::format("cannot write {}", (config.output_dir / name).string()));
    out << content;
    if (!out) throw BenchError(fmt::format("error writing {}", (config.output_dir / name).string()));
  };
  write("report.json", report_to_json(report));
  write("report.csv", report_to_csv(report));
  write("rates.svg", render_device_map(report, cal, MapMode::rates));
  write("calibration.svg", render_device_map(report, cal, MapMode::calibration));
}

}  // namespace synbench
