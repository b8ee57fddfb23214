// Copyright 2026 The q2fmm Authors
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

#include "q2fmm/fixed_point.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace q2fmm {

using Qubit = std::uint32_t;

enum class GateKind : std::uint8_t { Not, Cnot, Toffoli, Swap, Phase, CPhase, Fanout };

[[nodiscard]] std::string_view gate_name(GateKind k);
[[nodiscard]] GateKind gate_kind_from_name(std::string_view name);
[[nodiscard]] int gate_arity(GateKind k);

/// One gate. Operands are positional: NOT t; CNOT c t; TOFFOLI c1 c2 t;
/// SWAP a b; PHASE q; CPHASE a b. FANOUT stores its control in q[0] and a
/// slice of the circuit's target pool in q[1] (offset) and q[2] (count).
struct Gate {
  GateKind kind = GateKind::Not;
  std::uint32_t q[3] = {0, 0, 0};
  double angle = 0.0;
};

enum class RegisterRole : std::uint8_t {
  System,
  BoxSum,
  Copy,
  Product,
  MomentReal,
  MomentImag,
  Energy,
  Scratch,
};

[[nodiscard]] std::string_view role_name(RegisterRole r);
[[nodiscard]] RegisterRole role_from_name(std::string_view name);

struct Register {
  std::string name;
  RegisterRole role = RegisterRole::Scratch;
  FixedPointFormat format;
  std::vector<Qubit> qubits;  ///< LSB first
  int level = -1;             ///< hierarchy level of the owning box, -1 if none
  int box = -1;               ///< linear box id within the level, -1 if none
};

enum class BlockKind : std::uint8_t {
  Direct,
  Merge,
  Adder,
  Multiplier,
  Copy,
  Ladder,
  Load,
  Evo,
  M2M,
  PairEnergy,
  Onsite,
  Uncompute,
};

[[nodiscard]] std::string_view block_name(BlockKind k);
[[nodiscard]] BlockKind block_from_name(std::string_view name);

/// Annotated gate range [begin, end). Blocks nest; the cost model may
/// re-cost Adder and Multiplier ranges as a whole.
struct Block {
  BlockKind kind = BlockKind::Direct;
  std::size_t begin = 0;
  std::size_t end = 0;
  int width = 0;  ///< operand width in bits for arithmetic blocks
  int level = -1;
};

/// Gates [begin, end) act on operands from distant boxes: `moved` qubits
/// travel next to `dest` before gate `begin` and return after gate end - 1.
struct RouteHint {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<Qubit> moved;
  Qubit dest = 0;
  int level = -1;
};

/// Gate-level reversible circuit with a register table and cost annotations.
class Circuit {
public:
  [[nodiscard]] std::uint32_t num_qubits() const { return num_qubits_; }
  [[nodiscard]] const std::vector<Gate>& gates() const { return gates_; }
  [[nodiscard]] std::size_t size() const { return gates_.size(); }
  [[nodiscard]] const std::vector<Register>& registers() const { return registers_; }
  [[nodiscard]] const Register& reg(std::size_t id) const { return registers_.at(id); }
  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
  [[nodiscard]] const std::vector<RouteHint>& route_hints() const { return hints_; }
  [[nodiscard]] const std::vector<Qubit>& fanout_pool() const { return fanout_pool_; }
  [[nodiscard]] std::span<const Qubit> fanout_targets(const Gate& g) const;

  /// Allocates fresh qubits for a new register and returns its id.
  std::size_t add_register(std::string name, RegisterRole role, FixedPointFormat format,
                           int level = -1, int box = -1);
  /// Registers an existing set of qubits (used for system views).
  std::size_t add_register_view(std::string name, RegisterRole role, FixedPointFormat format,
                                std::vector<Qubit> qubits, int level = -1, int box = -1);

  void x(Qubit t);
  void cnot(Qubit c, Qubit t);
  void toffoli(Qubit c1, Qubit c2, Qubit t);
  void swap(Qubit a, Qubit b);
  void phase(Qubit q, double angle);
  void cphase(Qubit a, Qubit b, double angle);
  void fanout(Qubit c, std::span<const Qubit> targets);
  void push(const Gate& g, std::span<const Qubit> fanout_targets = {});

  /// Opens a block at the current gate position; close with end_block.
  std::size_t begin_block(BlockKind kind, int width = 0, int level = -1);
  void end_block(std::size_t id);
  void add_route_hint(std::size_t begin, std::vector<Qubit> moved, Qubit dest, int level);

  /// Appends the inverse of gates [begin, end) (reverse order, negated
  /// angles) together with mirrored blocks and route hints.
  void append_inverse(std::size_t begin, std::size_t end);

  /// Qubits not owned by a System register.
  [[nodiscard]] std::vector<bool> ancilla_mask() const;

  // Low-level access for deserialization.
  void set_num_qubits(std::uint32_t n) { num_qubits_ = n; }
  void add_block(const Block& b) { blocks_.push_back(b); }
  void add_route_hint_at(RouteHint h) { hints_.push_back(std::move(h)); }
  void add_register_raw(Register r) { registers_.push_back(std::move(r)); }

private:
  void check_qubit(Qubit q) const;

  std::uint32_t num_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<Qubit> fanout_pool_;
  std::vector<Register> registers_;
  std::vector<Block> blocks_;
  std::vector<RouteHint> hints_;
};

/// Same registers; gates reversed and inverted.
[[nodiscard]] Circuit invert(const Circuit& c);

struct GateCounts {
  std::size_t not_ = 0;
  std::size_t cnot = 0;
  std::size_t toffoli = 0;
  std::size_t swap = 0;
  std::size_t phase = 0;
  std::size_t cphase = 0;
  std::size_t fanout = 0;
  [[nodiscard]] std::size_t total() const { return not_ + cnot + toffoli + swap + phase + cphase + fanout; }
};

[[nodiscard]] GateCounts count_gates(const Circuit& c);

}  // namespace q2fmm
