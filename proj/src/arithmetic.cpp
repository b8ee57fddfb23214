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

#include "q2fmm/arithmetic.hpp"

#include "q2fmm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace q2fmm {

namespace {

constexpr Qubit kNone = std::numeric_limits<Qubit>::max();

Qubit addend_bit(const Operand& a, std::size_t i) {
  if (i < a.bits.size()) {
    return a.bits[i];
  }
  return (a.is_signed && !a.bits.empty()) ? a.bits.back() : kNone;
}

void tof(Circuit& c, Qubit c1, Qubit c2, Qubit t) {
  if (c1 == kNone || c2 == kNone) {
    return;
  }
  c.toffoli(c1, c2, t);
}

void cx(Circuit& c, Qubit ctl, Qubit t) {
  if (ctl != kNone) {
    c.cnot(ctl, t);
  }
}

}  // namespace

std::vector<Qubit> alloc_scratch(Circuit& c, int n, const char* name, int level) {
  if (n <= 0) {
    return {};
  }
  const auto id = c.add_register(name, RegisterRole::Scratch, {n, 0, false}, level);
  return c.reg(id).qubits;
}

void add_in_place(Circuit& c, const Operand& addend, std::span<const Qubit> target,
                  std::span<const Qubit> carries) {
  const std::size_t n = target.size();
  if (n == 0 || addend.bits.empty()) {
    return;
  }
  if (addend.bits.size() > n) {
    throw ValidationError("adder: addend wider than target");
  }
  std::vector<Qubit> own;
  if (carries.empty() && n > 1) {
    own = alloc_scratch(c, static_cast<int>(n - 1), "carry");
    carries = own;
  }
  if (carries.size() + 1 < n) {
    throw ValidationError("adder: carry register too small");
  }
  // carry(i) is the carry into bit i; the carry into bit 0 is zero.
  auto carry = [&](std::size_t i) { return i == 0 ? kNone : carries[i - 1]; };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Qubit a = addend_bit(addend, i);
    tof(c, a, target[i], carry(i + 1));
    cx(c, a, target[i]);
    tof(c, carry(i), target[i], carry(i + 1));
  }
  cx(c, addend_bit(addend, n - 1), target[n - 1]);
  cx(c, carry(n - 1), target[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    const Qubit a = addend_bit(addend, i);
    tof(c, carry(i), target[i], carry(i + 1));
    cx(c, a, target[i]);
    tof(c, a, target[i], carry(i + 1));
    cx(c, a, target[i]);
    cx(c, carry(i), target[i]);
  }
}

void sub_in_place(Circuit& c, const Operand& addend, std::span<const Qubit> target,
                  std::span<const Qubit> carries) {
  for (Qubit q : target) {
    c.x(q);
  }
  add_in_place(c, addend, target, carries);
  for (Qubit q : target) {
    c.x(q);
  }
}

void add_scaled(Circuit& c, const Operand& x, std::int64_t w, std::span<const Qubit> target,
                std::span<const Qubit> carries) {
  if (w == 0) {
    return;
  }
  std::vector<Qubit> own;
  if (carries.empty() && target.size() > 1) {
    own = alloc_scratch(c, static_cast<int>(target.size() - 1), "carry");
    carries = own;
  }
  const bool negative = w < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-w) : static_cast<std::uint64_t>(w);
  for (int s = 0; s < 63; ++s) {
    if (((mag >> s) & 1U) == 0) {
      continue;
    }
    if (static_cast<std::size_t>(s) >= target.size()) {
      throw ValidationError("add_scaled: constant shift exceeds the accumulator");
    }
    const auto slice = target.subspan(static_cast<std::size_t>(s));
    Operand trimmed = x;
    if (trimmed.bits.size() > slice.size()) {
      trimmed.bits.resize(slice.size());
    }
    if (negative) {
      sub_in_place(c, trimmed, slice, carries);
    } else {
      add_in_place(c, trimmed, slice, carries);
    }
  }
}

void build_adder(Circuit& c, std::size_t a_id, std::size_t b_id, std::size_t out_id, int level) {
  const Operand a = Operand::of(c.reg(a_id));
  const Operand b = Operand::of(c.reg(b_id));
  const Register out = c.reg(out_id);
  const auto& fa = c.reg(a_id).format;
  const auto& fb = c.reg(b_id).format;
  if (fa.fraction_bits != fb.fraction_bits || fa.fraction_bits != out.format.fraction_bits) {
    throw ValidationError("adder operands must share fraction bits");
  }
  const std::size_t need = std::max(a.bits.size(), b.bits.size()) + 1;
  if (out.qubits.size() < need) {
    throw ValidationError("adder output '" + out.name + "' has " +
                          std::to_string(out.qubits.size()) + " bits, needs " +
                          std::to_string(need));
  }
  const auto blk = c.begin_block(BlockKind::Adder, static_cast<int>(out.qubits.size()), level);
  for (std::size_t i = 0; i < out.qubits.size(); ++i) {
    cx(c, addend_bit(a, i), out.qubits[i]);
  }
  add_in_place(c, b, out.qubits);
  c.end_block(blk);
}

void build_multiplier(Circuit& c, std::size_t a_id, std::size_t b_id, std::size_t out_id, int level,
                      std::span<const Qubit> partial_bits, std::span<const Qubit> carry_bits) {
  const Register a = c.reg(a_id);
  const Register b = c.reg(b_id);
  const Register out = c.reg(out_id);
  const std::size_t na = a.qubits.size();
  const std::size_t nb = b.qubits.size();
  const std::size_t no = out.qubits.size();
  if (no < na + nb) {
    throw ValidationError("multiplier output '" + out.name + "' has " + std::to_string(no) +
                          " bits, needs " + std::to_string(na + nb));
  }
  if (out.format.fraction_bits != a.format.fraction_bits + b.format.fraction_bits) {
    throw ValidationError("multiplier output fraction bits must equal fa + fb");
  }
  const auto blk = c.begin_block(BlockKind::Multiplier, static_cast<int>(std::max(na, nb)), level);
  std::vector<Qubit> t(partial_bits.begin(), partial_bits.end());
  std::vector<Qubit> carries(carry_bits.begin(), carry_bits.end());
  if (t.empty()) {
    t = alloc_scratch(c, static_cast<int>(na), "mul_partial", level);
  } else if (t.size() != na) {
    throw ValidationError("multiplier partial scratch must hold " + std::to_string(na) + " bits");
  }
  if (carries.empty()) {
    carries = alloc_scratch(c, static_cast<int>(no - 1), "mul_carry", level);
  } else if (carries.size() < no - 1) {
    throw ValidationError("multiplier carry scratch must hold " + std::to_string(no - 1) + " bits");
  }
  const Operand partial{t, a.format.is_signed};
  const std::span<const Qubit> out_bits(out.qubits);
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t k = 0; k < na; ++k) {
      c.toffoli(b.qubits[i], a.qubits[k], t[k]);
    }
    const auto slice = out_bits.subspan(i);
    const auto add = c.begin_block(BlockKind::Adder, static_cast<int>(slice.size()), level);
    if (b.format.is_signed && i + 1 == nb) {
      sub_in_place(c, partial, slice, carries);
    } else {
      add_in_place(c, partial, slice, carries);
    }
    c.end_block(add);
    for (std::size_t k = 0; k < na; ++k) {
      c.toffoli(b.qubits[i], a.qubits[k], t[k]);
    }
  }
  c.end_block(blk);
}

void build_const_load(Circuit& c, Qubit control, std::int64_t raw, std::size_t target, int level) {
  const Register& r = c.reg(target);
  const std::uint64_t pattern = r.format.encode(raw);
  const auto blk = c.begin_block(BlockKind::Load, r.format.width(), level);
  for (std::size_t b = 0; b < r.qubits.size(); ++b) {
    if ((pattern >> b) & 1U) {
      c.cnot(control, r.qubits[b]);
    }
  }
  c.end_block(blk);
}

void build_phase_ladder(Circuit& c, std::size_t reg_id, double t_eff, int level) {
  const Register r = c.reg(reg_id);
  const auto blk = c.begin_block(BlockKind::Ladder, static_cast<int>(r.qubits.size()), level);
  const int f = r.format.fraction_bits;
  for (std::size_t b = 0; b < r.qubits.size(); ++b) {
    double weight = std::ldexp(1.0, static_cast<int>(b) - f);
    if (r.format.is_signed && b + 1 == r.qubits.size()) {
      weight = -weight;
    }
    c.phase(r.qubits[b], -t_eff * weight);
  }
  c.end_block(blk);
}

void build_copy(Circuit& c, std::size_t src, std::span<const std::size_t> dests, bool use_fanout,
                int level) {
  const Register s = c.reg(src);
  for (auto d : dests) {
    if (c.reg(d).qubits.size() != s.qubits.size()) {
      throw ValidationError("copy destination '" + c.reg(d).name + "' width differs from source");
    }
  }
  if (dests.empty()) {
    return;
  }
  const auto blk = c.begin_block(BlockKind::Copy, static_cast<int>(s.qubits.size()), level);
  if (use_fanout) {
    std::vector<Qubit> targets(dests.size());
    for (std::size_t b = 0; b < s.qubits.size(); ++b) {
      for (std::size_t k = 0; k < dests.size(); ++k) {
        targets[k] = c.reg(dests[k]).qubits[b];
      }
      c.fanout(s.qubits[b], targets);
    }
  } else {
    // Every register that already holds the value feeds one new copy per round.
    std::vector<std::size_t> holders{src};
    std::size_t next = 0;
    while (next < dests.size()) {
      const std::size_t round = std::min(holders.size(), dests.size() - next);
      for (std::size_t h = 0; h < round; ++h) {
        const Register& from = c.reg(holders[h]);
        const Register& to = c.reg(dests[next + h]);
        for (std::size_t b = 0; b < from.qubits.size(); ++b) {
          c.cnot(from.qubits[b], to.qubits[b]);
        }
      }
      for (std::size_t h = 0; h < round; ++h) {
        holders.push_back(dests[next + h]);
      }
      next += round;
    }
  }
  c.end_block(blk);
}

}  // namespace q2fmm
