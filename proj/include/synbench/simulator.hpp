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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "synbench/circuit.hpp"
#include "synbench/noise.hpp"

namespace synbench {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measurement record of one shot, indexed by slot.
using ShotResult = std::span<const std::uint8_t>;

/// Row-major shots x slots bit table (one byte per bit).
class ShotTable {
 public:
  ShotTable(std::size_t shots, std::size_t slots) : shots_(shots), slots_(slots), bits_(shots * slots) {}

  std::size_t shots() const { return shots_; }
  std::size_t slots() const { return slots_; }
  ShotResult operator[](std::size_t shot) const { return {bits_.data() + shot * slots_, slots_}; }
  std::span<std::uint8_t> row(std::size_t shot) { return {bits_.data() + shot * slots_, slots_}; }

  bool operator==(const ShotTable&) const = default;

 private:
  std::size_t shots_;
  std::size_t slots_;
  std::vector<std::uint8_t> bits_;
};

/// Shots are grouped in fixed blocks; each block draws from its own stream
/// seeded by (seed, block index), so results do not depend on worker count.
inline constexpr std::size_t kShotBlock = 1024;

struct SimulatorOptions {
  unsigned workers = 1;
  /// Relaxation/dephasing sub-steps per delay instruction.
  int delay_slices = 1;
};

/// Throws SimulationError if the circuit leaves the tracked-basis contract:
/// cx targets and measured qubits must be in the Z basis.
void check_basis_contract(const Circuit& circuit);

/// Samples `shots` measurement records. Each qubit is tracked as a classical
/// bit in its current basis (Z after preparation, toggled by h); errors flip
/// the bit when they anticommute with that basis.
ShotTable run_shots(const Circuit& circuit, const NoiseModel& noise, std::size_t shots,
                    std::uint64_t seed, const SimulatorOptions& options = {});

/// One line of '0'/'1' per shot in slot order; gzip-compressed when requested.
void write_shot_dump(const ShotTable& table, const std::filesystem::path& path, bool gzip);

}  // namespace synbench
