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

#include "synbench/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace synbench {

std::string to_string(Encoding e) { return e == Encoding::bit_flip ? "bit_flip" : "phase_flip"; }

std::string to_string(DdScope s) {
  switch (s) {
    case DdScope::none:
      return "none";
    case DdScope::all_qubits:
      return "all_qubits";
    case DdScope::code_only:
      return "code_only";
  }
  return "none";
}

std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::prepare_z0:
      return "prepare_z0";
    case OpKind::x:
      return "x";
    case OpKind::h:
      return "h";
    case OpKind::cx:
      return "cx";
    case OpKind::measure:
      return "measure";
    case OpKind::reset:
      return "reset";
    case OpKind::delay:
      return "delay";
    case OpKind::pauli:
      return "pauli";
  }
  return "?";
}

std::string to_string(Pauli p) {
  switch (p) {
    case Pauli::X:
      return "X";
    case Pauli::Y:
      return "Y";
    case Pauli::Z:
      return "Z";
  }
  return "?";
}

Encoding parse_encoding(const std::string& s) {
  if (s == "bit_flip") return Encoding::bit_flip;
  if (s == "phase_flip") return Encoding::phase_flip;
  throw CircuitError(fmt::format("unknown encoding '{}'", s));
}

DdScope parse_dd_scope(const std::string& s) {
  if (s == "none") return DdScope::none;
  if (s == "all_qubits") return DdScope::all_qubits;
  if (s == "code_only") return DdScope::code_only;
  throw CircuitError(fmt::format("unknown dd scope '{}'", s));
}

std::vector<QubitIndex> Circuit::code_qubits() const {
  std::vector<QubitIndex> out;
  for (std::size_t i = 0; i < line_.size(); i += 2) out.push_back(line_[i]);
  return out;
}

std::vector<QubitIndex> Circuit::aux_qubits() const {
  std::vector<QubitIndex> out;
  for (std::size_t i = 1; i < line_.size(); i += 2) out.push_back(line_[i]);
  return out;
}

bool Circuit::contains(QubitIndex q) const {
  return std::find(line_.begin(), line_.end(), q) != line_.end();
}

std::size_t Circuit::position(QubitIndex q) const {
  auto it = std::find(line_.begin(), line_.end(), q);
  if (it == line_.end()) {
    throw CircuitError(fmt::format("qubit {} is not part of the circuit", q));
  }
  return static_cast<std::size_t>(it - line_.begin());
}

QubitRole Circuit::role(QubitIndex q) const {
  return position(q) % 2 == 0 ? QubitRole::code : QubitRole::auxiliary;
}

int Circuit::aux_slot(std::size_t k, int round) const {
  if (k >= aux_count() || round < 1 || round > rounds_) {
    throw CircuitError(fmt::format("no auxiliary slot for ({}, round {})", k, round));
  }
  return static_cast<int>((round - 1) * aux_count() + k);
}

int Circuit::final_slot(std::size_t j) const {
  if (j >= code_count()) {
    throw CircuitError(fmt::format("no final slot for code qubit {}", j));
  }
  return static_cast<int>(rounds_ * aux_count() + j);
}

namespace {

Nanos to_nanos(double ns) { return Nanos(std::max<long long>(1, std::llround(ns))); }

// Accumulates layered operations; each layer starts when the previous ends.
class Scheduler {
 public:
  Nanos now() const { return now_; }
  void advance(Nanos dt) { now_ += dt; }

  void layer(std::vector<Instruction> ops) {
    Nanos longest{0};
    for (auto& op : ops) {
      op.start = now_;
      longest = std::max(longest, op.duration);
      ops_.push_back(std::move(op));
    }
    now_ += longest;
  }

  // Emits ops plus one delay per idle gap, ordered by (start, creation order).
  std::vector<Instruction> materialize(const std::vector<QubitIndex>& line, Nanos end) const {
    struct Keyed {
      Nanos start;
      std::size_t seq;
      int minor;
      Instruction ins;
    };
    // Zero-duration h layers do not shift the order of anything else, so both
    // encodings share one instruction order.
    std::vector<std::size_t> rank(ops_.size());
    std::vector<int> minor(ops_.size(), 0);
    std::size_t counted = 0;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      if (ops_[i].kind == OpKind::h) {
        rank[i] = counted == 0 ? 0 : counted - 1;
        minor[i] = 1;
      } else {
        rank[i] = counted++;
      }
    }
    std::vector<Keyed> out;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      out.push_back({ops_[i].start, rank[i], minor[i], ops_[i]});
    }

    for (QubitIndex q : line) {
      std::vector<std::size_t> mine;
      for (std::size_t i = 0; i < ops_.size(); ++i) {
        const auto& qs = ops_[i].qubits;
        if (std::find(qs.begin(), qs.end(), q) != qs.end()) mine.push_back(i);
      }
      std::stable_sort(mine.begin(), mine.end(),
                       [&](std::size_t a, std::size_t b) { return ops_[a].start < ops_[b].start; });
      Nanos cursor{0};
      std::size_t prev = 0;
      auto gap = [&](Nanos until) {
        if (until > cursor) {
          Instruction d;
          d.kind = OpKind::delay;
          d.qubits = {q};
          d.start = cursor;
          d.duration = until - cursor;
          out.push_back({cursor, rank[prev], 2, std::move(d)});
        }
      };
      for (std::size_t i : mine) {
        gap(ops_[i].start);
        cursor = std::max(cursor, ops_[i].end());
        prev = i;
      }
      gap(end);
    }
    std::stable_sort(out.begin(), out.end(), [](const Keyed& a, const Keyed& b) {
      return std::tie(a.start, a.seq, a.minor) < std::tie(b.start, b.seq, b.minor);
    });
    std::vector<Instruction> result;
    result.reserve(out.size());
    for (auto& k : out) result.push_back(std::move(k.ins));
    return result;
  }

 private:
  Nanos now_{0};
  std::vector<Instruction> ops_;
};

Instruction single(OpKind kind, QubitIndex q, Nanos duration) {
  Instruction ins;
  ins.kind = kind;
  ins.qubits = {q};
  ins.duration = duration;
  return ins;
}

}  // namespace

Circuit build_repetition_circuit(std::span<const QubitIndex> line, const DeviceCalibration& cal,
                                 const BuildOptions& options) {
  if (line.size() < 5 || line.size() % 2 == 0) {
    throw CircuitError(fmt::format("line must have odd length >= 5, got {}", line.size()));
  }
  if (options.rounds < 2) {
    throw CircuitError(fmt::format("at least 2 rounds are required, got {}", options.rounds));
  }
  if (options.logical_value != 0 && options.logical_value != 1) {
    throw CircuitError("logical value must be 0 or 1");
  }
  if (options.extra_delay < Nanos(0) || options.inter_round_gap < Nanos(0)) {
    throw CircuitError("delays must be non-negative");
  }
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] >= cal.qubit_count()) {
      throw CircuitError(fmt::format("line qubit {} is not on the device", line[i]));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (line[i] == line[j]) throw CircuitError("line qubits must be distinct");
    }
    if (i > 0 && !cal.has_edge(line[i - 1], line[i])) {
      throw CircuitError(fmt::format("line qubits {} and {} are not coupled", line[i - 1], line[i]));
    }
  }

  Circuit c;
  c.line_.assign(line.begin(), line.end());
  c.rounds_ = options.rounds;
  c.encoding_ = options.encoding;
  c.logical_value_ = options.logical_value;
  c.extra_delay_ = options.extra_delay;

  const auto code = c.code_qubits();
  const auto aux = c.aux_qubits();
  const bool phase = options.encoding == Encoding::phase_flip;

  Scheduler s;
  {
    std::vector<Instruction> prep;
    for (QubitIndex q : line) prep.push_back(single(OpKind::prepare_z0, q, Nanos(0)));
    s.layer(std::move(prep));
  }
  if (options.logical_value == 1) {
    std::vector<Instruction> flips;
    for (QubitIndex q : code) flips.push_back(single(OpKind::x, q, to_nanos(cal.qubit(q).x_ns)));
    s.layer(std::move(flips));
  }
  if (phase) {
    std::vector<Instruction> hs;
    for (QubitIndex q : code) hs.push_back(single(OpKind::h, q, Nanos(0)));
    s.layer(std::move(hs));
  }

  int slot = 0;
  for (int r = 1; r <= options.rounds; ++r) {
    for (std::size_t side = 0; side < 2; ++side) {
      std::vector<Instruction> cxs;
      for (std::size_t k = 0; k < aux.size(); ++k) {
        Instruction g;
        g.kind = OpKind::cx;
        g.qubits = {code[k + side], aux[k]};
        g.duration = to_nanos(cal.cx(code[k + side], aux[k]).duration_ns);
        cxs.push_back(std::move(g));
      }
      s.layer(std::move(cxs));
    }
    std::vector<Instruction> meas;
    for (QubitIndex q : aux) {
      Instruction m = single(OpKind::measure, q, to_nanos(cal.qubit(q).readout_ns));
      m.slot = slot++;
      meas.push_back(std::move(m));
    }
    s.layer(std::move(meas));
    std::vector<Instruction> resets;
    for (QubitIndex q : aux) {
      resets.push_back(single(OpKind::reset, q,
                              options.reset_duration.value_or(to_nanos(cal.qubit(q).x_ns))));
    }
    s.layer(std::move(resets));
    s.advance(options.extra_delay);
    s.advance(options.inter_round_gap);
  }

  if (phase) {
    std::vector<Instruction> hs;
    for (QubitIndex q : code) hs.push_back(single(OpKind::h, q, Nanos(0)));
    s.layer(std::move(hs));
  }
  {
    std::vector<Instruction> meas;
    for (QubitIndex q : code) {
      Instruction m = single(OpKind::measure, q, to_nanos(cal.qubit(q).readout_ns));
      m.slot = slot++;
      meas.push_back(std::move(m));
    }
    s.layer(std::move(meas));
  }

  c.total_duration_ = s.now();
  c.instructions_ = s.materialize(c.line_, c.total_duration_);
  if (options.dd_scope != DdScope::none) {
    return insert_dynamical_decoupling(c, cal, options.dd_scope);
  }
  return c;
}

Circuit build_repetition_circuit(const BenchLine& line, const DeviceCalibration& cal,
                                 const BuildOptions& options) {
  return build_repetition_circuit(std::span<const QubitIndex>(line.qubits), cal, options);
}

Circuit insert_dynamical_decoupling(const Circuit& circuit, const DeviceCalibration& cal,
                                    DdScope scope) {
  Circuit out = circuit;
  out.dd_scope_ = scope;
  if (scope == DdScope::none) return out;

  std::vector<Instruction> result;
  for (const auto& ins : circuit.instructions_) {
    const bool in_scope =
        ins.kind == OpKind::delay && !ins.echoed &&
        (scope == DdScope::all_qubits || circuit.role(ins.qubits[0]) == QubitRole::code);
    if (!in_scope) {
      result.push_back(ins);
      continue;
    }
    const QubitIndex q = ins.qubits[0];
    const Nanos pulse = to_nanos(cal.qubit(q).x_ns);
    const Nanos free = ins.duration - 2 * pulse;
    if (free < Nanos(4)) {
      result.push_back(ins);
      continue;
    }
    const Nanos quarter = free / 4;
    const Nanos middle = free - 2 * quarter;
    Nanos t = ins.start;
    auto emit = [&](OpKind kind, Nanos dur) {
      Instruction piece = single(kind, q, dur);
      piece.start = t;
      if (kind == OpKind::delay) piece.echoed = true;
      if (kind == OpKind::x) piece.decoupling = true;
      result.push_back(std::move(piece));
      t += dur;
    };
    emit(OpKind::delay, quarter);
    emit(OpKind::x, pulse);
    emit(OpKind::delay, middle);
    emit(OpKind::x, pulse);
    emit(OpKind::delay, quarter);
  }
  std::stable_sort(result.begin(), result.end(),
                   [](const Instruction& a, const Instruction& b) { return a.start < b.start; });
  out.instructions_ = std::move(result);
  return out;
}

Circuit inject_fault(const Circuit& circuit, QubitIndex qubit, Nanos time, Pauli pauli) {
  if (!circuit.contains(qubit)) {
    throw CircuitError(fmt::format("fault location: qubit {} not in circuit", qubit));
  }
  bool boundary = false;
  for (const auto& ins : circuit.instructions_) {
    if (ins.qubits[0] != qubit && (ins.qubits.size() < 2 || ins.qubits[1] != qubit)) continue;
    if (ins.start == time || ins.end() == time) boundary = true;
  }
  if (!boundary) {
    throw CircuitError(fmt::format("fault location: t={} ns is not an instruction boundary on qubit {}",
                                   time.count(), qubit));
  }
  Circuit out = circuit;
  Instruction marker = single(OpKind::pauli, qubit, Nanos(0));
  marker.start = time;
  marker.pauli = pauli;
  auto pos = std::find_if(out.instructions_.begin(), out.instructions_.end(),
                          [&](const Instruction& ins) { return ins.start >= time; });
  out.instructions_.insert(pos, std::move(marker));
  return out;
}

namespace {

bool touches(const Instruction& ins, QubitIndex q) {
  return std::find(ins.qubits.begin(), ins.qubits.end(), q) != ins.qubits.end();
}

}  // namespace

TimeWindow idle_window(const Circuit& circuit, QubitIndex qubit, int round) {
  const std::size_t pos = circuit.position(qubit);
  if (round < 1 || round > circuit.rounds()) {
    throw CircuitError(fmt::format("round {} out of range", round));
  }
  std::optional<Nanos> start;
  for (const auto& ins : circuit.instructions()) {
    if (ins.kind != OpKind::measure) continue;
    for (std::size_t k = 0; k < circuit.aux_count(); ++k) {
      if (ins.slot == circuit.aux_slot(k, round)) {
        start = start ? std::min(*start, ins.start) : ins.start;
      }
    }
  }
  if (!start) throw CircuitError("circuit has no measurements for the requested round");

  Nanos end = circuit.total_duration();
  for (const auto& ins : circuit.instructions()) {
    if (!touches(ins, qubit) || ins.start < *start) continue;
    if (round < circuit.rounds() && ins.kind == OpKind::cx) {
      end = ins.start;
      break;
    }
    if (round == circuit.rounds() && pos % 2 == 0 && ins.kind == OpKind::measure) {
      end = ins.start;
      break;
    }
  }
  return {*start, end};
}

std::vector<Nanos> idle_exposure(const Circuit& circuit, QubitIndex qubit) {
  std::vector<Nanos> per_round;
  for (int r = 1; r <= circuit.rounds(); ++r) {
    const TimeWindow w = idle_window(circuit, qubit, r);
    Nanos total{0};
    for (const auto& ins : circuit.instructions()) {
      if (ins.kind != OpKind::delay || ins.qubits[0] != qubit) continue;
      const Nanos lo = std::max(ins.start, w.start);
      const Nanos hi = std::min(ins.end(), w.end);
      if (hi > lo) total += hi - lo;
    }
    per_round.push_back(total);
  }
  return per_round;
}

void validate_timeline(const Circuit& circuit) {
  if (circuit.rounds() < 2) throw CircuitError("circuit has fewer than 2 rounds");
  const auto& ins = circuit.instructions();
  for (std::size_t i = 1; i < ins.size(); ++i) {
    if (ins[i].start < ins[i - 1].start) {
      throw CircuitError(fmt::format("instruction {} is out of time order", i));
    }
  }
  std::map<QubitIndex, Nanos> cursor;
  for (QubitIndex q : circuit.line()) cursor[q] = Nanos(0);
  std::vector<int> slot_uses(circuit.slot_count(), 0);
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const auto& op = ins[i];
    if (op.duration < Nanos(0)) throw CircuitError(fmt::format("instruction {} has negative duration", i));
    for (QubitIndex q : op.qubits) {
      auto it = cursor.find(q);
      if (it == cursor.end()) {
        throw CircuitError(fmt::format("instruction {} acts on foreign qubit {}", i, q));
      }
      if (op.start != it->second) {
        throw CircuitError(fmt::format("qubit {}: instruction {} starts at {} ns but timeline is at {} ns",
                                       q, i, op.start.count(), it->second.count()));
      }
      it->second = op.end();
    }
    if (op.kind == OpKind::measure) {
      if (op.slot < 0 || static_cast<std::size_t>(op.slot) >= slot_uses.size()) {
        throw CircuitError(fmt::format("measurement slot {} out of range", op.slot));
      }
      ++slot_uses[op.slot];
      const std::size_t pos = circuit.position(op.qubits[0]);
      const bool expected =
          pos % 2 == 0 ? op.slot == circuit.final_slot(pos / 2)
                       : op.slot >= circuit.aux_slot(pos / 2, 1) &&
                             op.slot <= circuit.aux_slot(pos / 2, circuit.rounds()) &&
                             (op.slot - circuit.aux_slot(pos / 2, 1)) %
                                     static_cast<int>(circuit.aux_count()) ==
                                 0;
      if (!expected) {
        throw CircuitError(fmt::format("qubit {} measured into unexpected slot {}", op.qubits[0], op.slot));
      }
    }
  }
  for (const auto& [q, t] : cursor) {
    if (t != circuit.total_duration()) {
      throw CircuitError(fmt::format("qubit {} timeline ends at {} ns, circuit at {} ns", q, t.count(),
                                     circuit.total_duration().count()));
    }
  }
  for (std::size_t s = 0; s < slot_uses.size(); ++s) {
    if (slot_uses[s] != 1) {
      throw CircuitError(fmt::format("slot {} written {} times", s, slot_uses[s]));
    }
  }
}

std::string dump_circuit(const Circuit& circuit) {
  std::string out;
  for (const auto& ins : circuit.instructions()) {
    std::string kind = to_string(ins.kind);
    if (ins.kind == OpKind::measure) kind += fmt::format("[{}]", ins.slot);
    if (ins.kind == OpKind::pauli) kind += "_" + to_string(ins.pauli);
    out += fmt::format("{} {} {} {} {}\n", ins.start.count(), kind, fmt::join(ins.qubits, ","),
                       ins.duration.count(), ins.echoed ? 1 : 0);
  }
  return out;
}

}  // namespace synbench
