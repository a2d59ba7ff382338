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

// synbench command line: plan lines, run benchmarks, render device maps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "synbench/bench.hpp"
#include "synbench/render.hpp"
#include "synbench/report.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int cmd_plan(const std::string& cal_path) {
  const auto cal = synbench::load_calibration(std::filesystem::path(cal_path));
  const auto plan = synbench::plan_device(cal);
  std::size_t count = 0;
  fmt::print("qubit  line                 max_cx_center  max_cx_all\n");
  for (std::size_t q = 0; q < plan.size(); ++q) {
    if (plan[q]) {
      ++count;
      fmt::print("{:>5}  {:<19}  {:>13.4f}  {:>10.4f}\n", q, fmt::format("{}", fmt::join(plan[q]->qubits, "-")),
                 plan[q]->max_cx_center, plan[q]->max_cx_all);
    } else {
      fmt::print("{:>5}  {:<19}\n", q, "-");
    }
  }
  fmt::print("{} of {} qubits benchmarkable\n", count, plan.size());
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& cal_path, std::optional<std::uint64_t> seed,
            std::optional<std::size_t> shots, const std::string& out_dir) {
  synbench::RunConfig config;
  if (!config_path.empty()) config = synbench::load_run_config(config_path);
  if (!cal_path.empty()) config.calibration = cal_path;
  if (config.calibration.empty()) throw synbench::ConfigError("no calibration given (--cal or config 'calibration')");
  if (seed) config.seed = *seed;
  if (shots) {
    if (*shots < 1) throw synbench::ConfigError("--shots must be >= 1");
    config.shots = *shots;
  }
  if (!out_dir.empty()) config.output_dir = out_dir;

  const auto cal = synbench::load_calibration(config.calibration);
  const auto report = synbench::run_benchmark(config, cal, synbench::workers_from_env());
  synbench::write_artifacts(report, cal, config);

  for (const auto& w : report.warnings) fmt::print(stderr, "warning: {}\n", w);
  fmt::print("benchmarked {} qubits, {} unbenchmarkable\n", report.qubits.size(), report.unbenchmarked.size());
  for (const auto& [kind, value] : report.medians) {
    fmt::print("median {:<12} {:.2f}%\n", synbench::to_string(kind), value * 100.0);
  }
  fmt::print("artifacts written to {}\n", config.output_dir.string());
  return 0;
}

int cmd_render(const std::string& report_path, const std::string& mode_name, const std::string& cal_path,
               const std::string& out_path) {
  const auto mode = synbench::parse_map_mode(mode_name);
  const auto report = synbench::load_report(report_path);
  const std::string cal_file = cal_path.empty() ? report.metadata.calibration : cal_path;
  if (cal_file.empty()) throw synbench::ConfigError("report does not name its calibration; pass --cal");
  const auto cal = synbench::load_calibration(std::filesystem::path(cal_file));
  const std::string svg = synbench::render_device_map(report, cal, mode);
  if (out_path.empty()) {
    std::cout << svg;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << svg;
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", out_path));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Syndrome-derived idle error rates from simulated repetition codes"};
  app.require_subcommand(1);

  std::string cal_path;
  auto* plan = app.add_subcommand("plan", "Select the five-qubit line for every qubit");
  plan->add_option("--cal", cal_path, "Calibration JSON")->required();

  std::string config_path;
  std::string run_cal;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  auto* run = app.add_subcommand("run", "Run the full benchmark and write report artifacts");
  run->add_option("--config", config_path, "Run config JSON");
  run->add_option("--cal", run_cal, "Calibration JSON (overrides the config)");
  run->add_option("--seed", seed, "Root seed");
  run->add_option("--shots", shots, "Shots per circuit");
  run->add_option("--out", out_dir, "Output directory");

  std::string report_path;
  std::string mode = "rates";
  std::string render_cal;
  std::string render_out;
  auto* render = app.add_subcommand("render", "Render a report as an SVG device map");
  render->add_option("--report", report_path, "Report JSON")->required();
  render->add_option("--mode", mode, "rates | calibration")->check(CLI::IsMember({"rates", "calibration"}));
  render->add_option("--cal", render_cal, "Calibration JSON (default: the one named in the report)");
  render->add_option("--out", render_out, "Output SVG (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*plan) return cmd_plan(cal_path);
    if (*run) return cmd_run(config_path, run_cal, seed, shots, out_dir);
    if (*render) return cmd_render(report_path, mode, render_cal, render_out);
  } catch (const synbench::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const synbench::CalibrationError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
