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

#include <filesystem>
#include <string>

#include "synbench/analysis.hpp"

namespace synbench {

/// Report JSON (format tag "synbench-report/1"); keys are emitted sorted so
/// identical reports serialize to identical bytes.
std::string report_to_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const std::string& text);
BenchmarkReport load_report(const std::filesystem::path& path);

/// Flat CSV: qubit,encoding,rate,estimate,std_error,guide,exposure_ns
std::string report_to_csv(const BenchmarkReport& report);

/// Guide value matching a rate kind.
double guide_for(const GuideValues& guide, RateKind kind);

}  // namespace synbench
