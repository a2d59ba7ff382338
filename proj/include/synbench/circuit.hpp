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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "synbench/device.hpp"

namespace synbench {

/// Circuit times are integer nanoseconds.
using Nanos = std::chrono::nanoseconds;

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Encoding { bit_flip, phase_flip };
enum class DdScope { none, all_qubits, code_only };
enum class QubitRole { code, auxiliary };
enum class Pauli { X, Y, Z };

enum class OpKind {
  prepare_z0,
  x,
  h,
  cx,  // qubits = {control, target}
  measure,
  reset,
  delay,
  pauli,  // injected deterministic fault marker
};

std::string to_string(Encoding e);
std::string to_string(DdScope s);
std::string to_string(OpKind k);
std::string to_string(Pauli p);
Encoding parse_encoding(const std::string& s);
DdScope parse_dd_scope(const std::string& s);

struct Instruction {
  OpKind kind = OpKind::delay;
  std::vector<QubitIndex> qubits;
  Nanos start{0};
  Nanos duration{0};
  int slot = -1;         // measure only
  bool echoed = false;   // delay only: sub-delay of a CPMG sequence
  bool decoupling = false;  // x only: pulse inserted by dynamical decoupling
  Pauli pauli = Pauli::X;   // pauli only

  Nanos end() const { return start + duration; }
};

struct BuildOptions {
  Encoding encoding = Encoding::bit_flip;
  int logical_value = 0;
  int rounds = 2;
  Nanos extra_delay{0};
  DdScope dd_scope = DdScope::none;
  Nanos inter_round_gap{0};
  /// Reset duration; defaults to each auxiliary's x gate duration.
  std::optional<Nanos> reset_duration;
};

/// Timed repetition-code circuit on a line of physical qubits
/// (code, aux, code, ..., aux, code).
///
/// Round r (1-based) consists of: reset of the auxiliaries (r > 1 only), two
/// cx layers (aux k couples to code k, then to code k+1), auxiliary
/// measurement, the extra delay and the inter-round gap. The circuit ends with
/// a transversal code-qubit measurement. Auxiliary slots are numbered
/// (r-1)*aux_count + k, final code slots follow.
class Circuit {
 public:
  const std::vector<Instruction>& instructions() const { return instructions_; }
  const std::vector<QubitIndex>& line() const { return line_; }
  std::vector<QubitIndex> code_qubits() const;
  std::vector<QubitIndex> aux_qubits() const;
  std::size_t code_count() const { return (line_.size() + 1) / 2; }
  std::size_t aux_count() const { return line_.size() / 2; }
  bool contains(QubitIndex q) const;
  QubitRole role(QubitIndex q) const;
  /// Position of q along the line.
  std::size_t position(QubitIndex q) const;

  int rounds() const { return rounds_; }
  Encoding encoding() const { return encoding_; }
  int logical_value() const { return logical_value_; }
  DdScope dd_scope() const { return dd_scope_; }
  Nanos extra_delay() const { return extra_delay_; }
  Nanos total_duration() const { return total_duration_; }

  std::size_t slot_count() const { return aux_count() * rounds_ + code_count(); }
  /// Slot of auxiliary k (0-based along the line) in round r (1-based).
  int aux_slot(std::size_t k, int round) const;
  /// Slot of code qubit j's final readout.
  int final_slot(std::size_t j) const;

 private:
  friend Circuit build_repetition_circuit(std::span<const QubitIndex>, const DeviceCalibration&,
                                          const BuildOptions&);
  friend Circuit insert_dynamical_decoupling(const Circuit&, const DeviceCalibration&, DdScope);
  friend Circuit inject_fault(const Circuit&, QubitIndex, Nanos, Pauli);

  std::vector<Instruction> instructions_;
  std::vector<QubitIndex> line_;
  int rounds_ = 2;
  Encoding encoding_ = Encoding::bit_flip;
  int logical_value_ = 0;
  DdScope dd_scope_ = DdScope::none;
  Nanos extra_delay_{0};
  Nanos total_duration_{0};
};

/// Builds the repetition-code circuit along `line` (odd length >= 5). Idle
/// gaps are materialized as delays; dynamical decoupling is applied when
/// options.dd_scope is not none.
Circuit build_repetition_circuit(std::span<const QubitIndex> line, const DeviceCalibration& cal,
                                 const BuildOptions& options);
Circuit build_repetition_circuit(const BenchLine& line, const DeviceCalibration& cal,
                                 const BuildOptions& options);

/// Replaces every in-scope delay(t) by delay(t'/4) x delay(t'/2) x delay(t'/4),
/// t' = t - 2*x_ns, rounding the quarters down and giving the remainder to the
/// middle segment. Delays with t' < 4 ns are left alone.
Circuit insert_dynamical_decoupling(const Circuit& circuit, const DeviceCalibration& cal,
                                    DdScope scope);

/// Inserts a deterministic Pauli on `qubit` at `time`, which must be an
/// instruction boundary on that qubit. The marker runs before any instruction
/// starting at `time`.
Circuit inject_fault(const Circuit& circuit, QubitIndex qubit, Nanos time, Pauli pauli);

struct TimeWindow {
  Nanos start{0};
  Nanos end{0};
};

/// Window from the start of round `round`'s auxiliary measurement to the
/// qubit's first cx of the next round (or to its final measurement / the end
/// of the circuit after the last round).
TimeWindow idle_window(const Circuit& circuit, QubitIndex qubit, int round);

/// Summed delay time inside idle_window for each round 1..T.
std::vector<Nanos> idle_exposure(const Circuit& circuit, QubitIndex qubit);

/// Throws CircuitError unless every line qubit has a gap-free, non-overlapping
/// timeline covering [0, total_duration), auxiliaries are measured once per
/// round, code qubits once at the end, and slots are dense.
void validate_timeline(const Circuit& circuit);

/// One line per instruction: start, kind, qubits, duration, echoed flag.
std::string dump_circuit(const Circuit& circuit);

}  // namespace synbench
