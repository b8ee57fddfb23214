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

#include "q2fmm/circuit.hpp"

#include "q2fmm/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace q2fmm {

namespace {

constexpr std::array<std::string_view, 7> kGateNames = {"NOT",    "CNOT",   "TOFFOLI", "SWAP",
                                                        "PHASE",  "CPHASE", "FANOUT"};
constexpr std::array<std::string_view, 8> kRoleNames = {
    "system", "box_sum", "copy", "product", "moment_real", "moment_imag", "energy", "scratch"};
constexpr std::array<std::string_view, 12> kBlockNames = {
    "direct", "merge", "adder", "multiplier", "copy", "ladder",
    "load",   "evo",   "m2m",   "pair_energy", "onsite", "uncompute"};

template <class E, std::size_t N>
E lookup(const std::array<std::string_view, N>& names, std::string_view name, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) {
      return static_cast<E>(i);
    }
  }
  throw ValidationError(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

}  // namespace

std::string_view gate_name(GateKind k) { return kGateNames[static_cast<std::size_t>(k)]; }
GateKind gate_kind_from_name(std::string_view name) {
  return lookup<GateKind>(kGateNames, name, "gate kind");
}
int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::Not:
    case GateKind::Phase:
      return 1;
    case GateKind::Cnot:
    case GateKind::Swap:
    case GateKind::CPhase:
      return 2;
    case GateKind::Toffoli:
      return 3;
    case GateKind::Fanout:
      return -1;
  }
  return 0;
}

std::string_view role_name(RegisterRole r) { return kRoleNames[static_cast<std::size_t>(r)]; }
RegisterRole role_from_name(std::string_view name) {
  return lookup<RegisterRole>(kRoleNames, name, "register role");
}
std::string_view block_name(BlockKind k) { return kBlockNames[static_cast<std::size_t>(k)]; }
BlockKind block_from_name(std::string_view name) {
  return lookup<BlockKind>(kBlockNames, name, "block kind");
}

std::span<const Qubit> Circuit::fanout_targets(const Gate& g) const {
  if (g.kind != GateKind::Fanout) {
    return {};
  }
  return std::span<const Qubit>(fanout_pool_).subspan(g.q[1], g.q[2]);
}

std::size_t Circuit::add_register(std::string name, RegisterRole role, FixedPointFormat format,
                                  int level, int box) {
  Register r;
  r.name = std::move(name);
  r.role = role;
  r.format = format;
  r.level = level;
  r.box = box;
  const int w = format.width();
  r.qubits.reserve(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) {
    r.qubits.push_back(num_qubits_++);
  }
  registers_.push_back(std::move(r));
  return registers_.size() - 1;
}

std::size_t Circuit::add_register_view(std::string name, RegisterRole role,
                                       FixedPointFormat format, std::vector<Qubit> qubits,
                                       int level, int box) {
  for (Qubit q : qubits) {
    if (q >= num_qubits_) {
      num_qubits_ = q + 1;
    }
  }
  registers_.push_back({std::move(name), role, format, std::move(qubits), level, box});
  return registers_.size() - 1;
}

void Circuit::check_qubit(Qubit q) const {
  if (q >= num_qubits_) {
    throw ValidationError("gate operand " + std::to_string(q) + " is not an allocated qubit");
  }
}

void Circuit::push(const Gate& g, std::span<const Qubit> targets) {
  const int arity = gate_arity(g.kind);
  if (g.kind == GateKind::Fanout) {
    check_qubit(g.q[0]);
    Gate f = g;
    f.q[1] = static_cast<std::uint32_t>(fanout_pool_.size());
    f.q[2] = static_cast<std::uint32_t>(targets.size());
    for (Qubit t : targets) {
      check_qubit(t);
      if (t == g.q[0]) {
        throw ValidationError("fan-out target equals its control");
      }
    }
    fanout_pool_.insert(fanout_pool_.end(), targets.begin(), targets.end());
    gates_.push_back(f);
    return;
  }
  for (int i = 0; i < arity; ++i) {
    check_qubit(g.q[i]);
    for (int j = 0; j < i; ++j) {
      if (g.q[i] == g.q[j]) {
        throw ValidationError(std::string(gate_name(g.kind)) + " with repeated qubit " +
                              std::to_string(g.q[i]));
      }
    }
  }
  if (!std::isfinite(g.angle)) {
    throw ValidationError("non-finite gate angle");
  }
  gates_.push_back(g);
}

void Circuit::x(Qubit t) { push({GateKind::Not, {t, 0, 0}, 0.0}); }
void Circuit::cnot(Qubit c, Qubit t) { push({GateKind::Cnot, {c, t, 0}, 0.0}); }
void Circuit::toffoli(Qubit c1, Qubit c2, Qubit t) { push({GateKind::Toffoli, {c1, c2, t}, 0.0}); }
void Circuit::swap(Qubit a, Qubit b) { push({GateKind::Swap, {a, b, 0}, 0.0}); }
void Circuit::phase(Qubit q, double angle) { push({GateKind::Phase, {q, 0, 0}, angle}); }
void Circuit::cphase(Qubit a, Qubit b, double angle) { push({GateKind::CPhase, {a, b, 0}, angle}); }
void Circuit::fanout(Qubit c, std::span<const Qubit> targets) {
  push({GateKind::Fanout, {c, 0, 0}, 0.0}, targets);
}

std::size_t Circuit::begin_block(BlockKind kind, int width, int level) {
  blocks_.push_back({kind, gates_.size(), gates_.size(), width, level});
  return blocks_.size() - 1;
}

void Circuit::end_block(std::size_t id) { blocks_.at(id).end = gates_.size(); }

void Circuit::add_route_hint(std::size_t begin, std::vector<Qubit> moved, Qubit dest, int level) {
  if (begin >= gates_.size()) {
    throw ValidationError("route hint must cover at least one gate");
  }
  hints_.push_back({begin, gates_.size(), std::move(moved), dest, level});
}

void Circuit::append_inverse(std::size_t begin, std::size_t end) {
  if (begin > end || end > gates_.size()) {
    throw ValidationError("append_inverse: bad gate range");
  }
  const std::size_t base = gates_.size();
  gates_.reserve(base + (end - begin));
  for (std::size_t k = end; k-- > begin;) {
    Gate g = gates_[k];
    if (g.kind == GateKind::Phase || g.kind == GateKind::CPhase) {
      g.angle = -g.angle;
    }
    gates_.push_back(g);  // fan-out pool slices are shared with the original
  }
  const std::size_t nblocks = blocks_.size();
  for (std::size_t b = 0; b < nblocks; ++b) {
    const Block blk = blocks_[b];
    if (blk.begin >= begin && blk.end <= end && blk.end > blk.begin) {
      blocks_.push_back({blk.kind, base + (end - blk.end), base + (end - blk.begin), blk.width, blk.level});
    }
  }
  const std::size_t nhints = hints_.size();
  for (std::size_t h = 0; h < nhints; ++h) {
    if (hints_[h].begin >= begin && hints_[h].end <= end) {
      RouteHint r = hints_[h];
      r.begin = base + (end - hints_[h].end);
      r.end = base + (end - hints_[h].begin);
      hints_.push_back(std::move(r));
    }
  }
}

std::vector<bool> Circuit::ancilla_mask() const {
  std::vector<bool> anc(num_qubits_, true);
  for (const auto& r : registers_) {
    if (r.role == RegisterRole::System) {
      for (Qubit q : r.qubits) {
        anc[q] = false;
      }
    }
  }
  return anc;
}

Circuit invert(const Circuit& c) {
  Circuit out = c;
  const std::size_t n = c.size();
  out.append_inverse(0, n);
  // Keep only the appended half, shifting annotations back by n.
  Circuit inv;
  inv.set_num_qubits(c.num_qubits());
  for (const auto& r : c.registers()) {
    inv.add_register_raw(r);
  }
  for (std::size_t k = n; k < out.size(); ++k) {
    const Gate& g = out.gates()[k];
    inv.push(g, out.fanout_targets(g));
  }
  for (const auto& b : out.blocks()) {
    if (b.begin >= n) {
      inv.add_block({b.kind, b.begin - n, b.end - n, b.width, b.level});
    }
  }
  for (const auto& h : out.route_hints()) {
    if (h.begin >= n) {
      RouteHint r = h;
      r.begin -= n;
      r.end -= n;
      inv.add_route_hint_at(std::move(r));
    }
  }
  return inv;
}

GateCounts count_gates(const Circuit& c) {
  GateCounts n;
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Not: ++n.not_; break;
      case GateKind::Cnot: ++n.cnot; break;
      case GateKind::Toffoli: ++n.toffoli; break;
      case GateKind::Swap: ++n.swap; break;
      case GateKind::Phase: ++n.phase; break;
      case GateKind::CPhase: ++n.cphase; break;
      case GateKind::Fanout: ++n.fanout; break;
    }
  }
  return n;
}

}  // namespace q2fmm
