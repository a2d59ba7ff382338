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

#include "synbench/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <zlib.h>

#include "synbench/rng.hpp"

namespace synbench {

namespace {

enum class Basis : std::uint8_t { Z, X };

// Instruction lowered to local qubit indices with its channel probabilities.
struct Step {
  OpKind kind;
  std::uint32_t q0 = 0;
  std::uint32_t q1 = 0;
  int slot = -1;
  Pauli pauli = Pauli::X;
  double p_err = 0.0;    // cx depolarizing / readout flip / preparation flip
  double p_down = 0.0;   // per slice 1 -> 0
  double p_up = 0.0;     // per slice 0 -> 1
  double p_phase = 0.0;  // per slice X-basis flip
  std::vector<std::size_t> crosstalk_targets;  // delay steps on coupled neighbors
};

struct Program {
  std::vector<Step> steps;
  std::size_t qubits = 0;
  std::size_t slots = 0;
  int slices = 1;
  double eta = 0.0;
};

Program compile(const Circuit& circuit, const NoiseModel& noise, int slices) {
  Program prog;
  prog.qubits = circuit.line().size();
  prog.slots = circuit.slot_count();
  prog.slices = slices;
  prog.eta = noise.crosstalk ? noise.crosstalk_eta : 0.0;
  const auto& ins = circuit.instructions();
  for (const auto& op : ins) {
    Step st;
    st.kind = op.kind;
    st.q0 = static_cast<std::uint32_t>(circuit.position(op.qubits[0]));
    const QubitIndex phys = op.qubits[0];
    switch (op.kind) {
      case OpKind::cx:
        st.q1 = static_cast<std::uint32_t>(circuit.position(op.qubits[1]));
        st.p_err = noise.cx_error(op.qubits[0], op.qubits[1]);
        break;
      case OpKind::measure:
        st.slot = op.slot;
        st.p_err = noise.readout_flip.at(phys);
        break;
      case OpKind::prepare_z0:
        st.p_err = noise.prep_error;
        break;
      case OpKind::delay: {
        const double slice = static_cast<double>(op.duration.count()) / slices;
        const auto& ch = noise.idle.at(phys);
        st.p_down = ch.p_1to0(slice);
        st.p_up = ch.p_0to1(slice);
        st.p_phase = ch.p_phaseflip(slice, op.echoed);
        break;
      }
      case OpKind::pauli:
        st.pauli = op.pauli;
        break;
      default:
        break;
    }
    prog.steps.push_back(std::move(st));
  }

  if (prog.eta > 0.0) {
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (ins[i].kind != OpKind::delay) continue;
      for (QubitIndex n : noise.neighbors.at(ins[i].qubits[0])) {
        if (!circuit.contains(n)) continue;
        for (std::size_t j = 0; j < ins.size(); ++j) {
          const auto& other = ins[j];
          if (other.kind == OpKind::delay && other.qubits[0] == n && other.start < ins[i].end() &&
              other.end() > ins[i].start) {
            prog.steps[i].crosstalk_targets.push_back(j);
            break;
          }
        }
      }
    }
  }
  return prog;
}

struct Frame {
  std::vector<Basis> basis;
  std::vector<std::uint8_t> bit;
  std::vector<std::uint16_t> pending;
  std::vector<std::size_t> pending_steps;

  void apply_pauli(std::uint32_t q, int pauli) {  // 1 = X, 2 = Y, 3 = Z
    const bool flips = basis[q] == Basis::Z ? (pauli == 1 || pauli == 2) : (pauli == 3 || pauli == 2);
    bit[q] ^= flips ? 1 : 0;
  }
};

int pauli_code(Pauli p) {
  switch (p) {
    case Pauli::X:
      return 1;
    case Pauli::Y:
      return 2;
    case Pauli::Z:
      return 3;
  }
  return 0;
}

void kick(Frame& f, std::uint32_t q, double eta, Stream& rng) {
  if (f.basis[q] == Basis::X && rng.bernoulli(eta)) f.bit[q] ^= 1;
}

void run_one(const Program& prog, Frame& f, std::span<std::uint8_t> out, Stream& rng) {
  std::fill(f.basis.begin(), f.basis.end(), Basis::Z);
  std::fill(f.bit.begin(), f.bit.end(), 0);
  for (std::size_t i = 0; i < prog.steps.size(); ++i) {
    const Step& st = prog.steps[i];
    const auto q = st.q0;
    switch (st.kind) {
      case OpKind::prepare_z0:
        f.basis[q] = Basis::Z;
        f.bit[q] = rng.bernoulli(st.p_err) ? 1 : 0;
        break;
      case OpKind::reset:
        f.basis[q] = Basis::Z;
        f.bit[q] = 0;
        break;
      case OpKind::x:
        if (f.basis[q] == Basis::Z) f.bit[q] ^= 1;
        break;
      case OpKind::h:
        f.basis[q] = f.basis[q] == Basis::Z ? Basis::X : Basis::Z;
        break;
      case OpKind::pauli:
        f.apply_pauli(q, pauli_code(st.pauli));
        break;
      case OpKind::cx:
        f.bit[st.q1] ^= f.bit[q];
        if (rng.bernoulli(st.p_err)) {
          const auto which = static_cast<int>(rng.below(15)) + 1;
          f.apply_pauli(q, which / 4);
          f.apply_pauli(st.q1, which % 4);
        }
        break;
      case OpKind::measure:
        out[st.slot] = f.bit[q] ^ (rng.bernoulli(st.p_err) ? 1 : 0);
        break;
      case OpKind::delay: {
        for (int s = 0; s < prog.slices; ++s) {
          if (f.basis[q] == Basis::Z) {
            if (f.bit[q] == 1) {
              if (rng.bernoulli(st.p_down)) {
                f.bit[q] = 0;
                for (std::size_t target : st.crosstalk_targets) {
                  if (target < i) {
                    kick(f, prog.steps[target].q0, prog.eta, rng);
                  } else {
                    if (f.pending[target]++ == 0) f.pending_steps.push_back(target);
                  }
                }
              }
            } else if (rng.bernoulli(st.p_up)) {
              f.bit[q] = 1;
            }
          } else if (rng.bernoulli(st.p_phase)) {
            f.bit[q] ^= 1;
          }
        }
        for (; f.pending[i] > 0; --f.pending[i]) kick(f, q, prog.eta, rng);
        break;
      }
    }
  }
  for (std::size_t s : f.pending_steps) f.pending[s] = 0;
  f.pending_steps.clear();
}

}  // namespace

void check_basis_contract(const Circuit& circuit) {
  std::vector<Basis> basis(circuit.line().size(), Basis::Z);
  for (const auto& op : circuit.instructions()) {
    const auto q = circuit.position(op.qubits[0]);
    switch (op.kind) {
      case OpKind::prepare_z0:
      case OpKind::reset:
        basis[q] = Basis::Z;
        break;
      case OpKind::h:
        basis[q] = basis[q] == Basis::Z ? Basis::X : Basis::Z;
        break;
      case OpKind::cx: {
        const auto t = circuit.position(op.qubits[1]);
        if (basis[t] != Basis::Z) {
          throw SimulationError(fmt::format(
              "basis contract: cx target {} is not in the Z basis at t={} ns", op.qubits[1],
              op.start.count()));
        }
        break;
      }
      case OpKind::measure:
        if (basis[q] != Basis::Z) {
          throw SimulationError(fmt::format("basis contract: qubit {} measured outside the Z basis",
                                            op.qubits[0]));
        }
        break;
      default:
        break;
    }
  }
}

ShotTable run_shots(const Circuit& circuit, const NoiseModel& noise, std::size_t shots,
                    std::uint64_t seed, const SimulatorOptions& options) {
  if (shots == 0) throw SimulationError("shots must be >= 1");
  if (options.delay_slices < 1) throw SimulationError("delay_slices must be >= 1");
  check_basis_contract(circuit);
  const Program prog = compile(circuit, noise, options.delay_slices);
  ShotTable table(shots, prog.slots);

  const std::size_t blocks = (shots + kShotBlock - 1) / kShotBlock;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    Frame f;
    f.basis.resize(prog.qubits);
    f.bit.resize(prog.qubits);
    f.pending.assign(prog.steps.size(), 0);
    for (std::size_t b = next++; b < blocks; b = next++) {
      Stream rng(derive_seed(seed, b));
      const std::size_t hi = std::min(shots, (b + 1) * kShotBlock);
      for (std::size_t s = b * kShotBlock; s < hi; ++s) run_one(prog, f, table.row(s), rng);
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers == 0 ? std::thread::hardware_concurrency()
                                                          : options.workers,
                                      static_cast<unsigned>(blocks)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return table;
}

void write_shot_dump(const ShotTable& table, const std::filesystem::path& path, bool gzip) {
  std::string line(table.slots() + 1, '\n');
  if (gzip) {
    gzFile gz = gzopen(path.string().c_str(), "wb");
    if (gz == nullptr) throw SimulationError(fmt::format("cannot write {}", path.string()));
    for (std::size_t s = 0; s < table.shots(); ++s) {
      const auto row = table[s];
      for (std::size_t k = 0; k < row.size(); ++k) line[k] = row[k] ? '1' : '0';
      gzwrite(gz, line.data(), static_cast<unsigned>(line.size()));
    }
    if (gzclose(gz) != Z_OK) throw SimulationError(fmt::format("error writing {}", path.string()));
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationError(fmt::format("cannot write {}", path.string()));
  for (std::size_t s = 0; s < table.shots(); ++s) {
    const auto row = table[s];
    for (std::size_t k = 0; k < row.size(); ++k) line[k] = row[k] ? '1' : '0';
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

}  // namespace synbench
