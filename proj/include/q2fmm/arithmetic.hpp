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

#include "q2fmm/circuit.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace q2fmm {

/// Bits of a value held in qubits, LSB first.
struct Operand {
  std::vector<Qubit> bits;
  bool is_signed = false;

  static Operand of(const Register& r) { return {r.qubits, r.format.is_signed}; }
};

/// target += addend (mod 2^|target|) with a ripple-carry adder. A shorter
/// addend is zero- or sign-extended. `carries` must hold |target| - 1 zeroed
/// qubits; an empty span allocates a fresh scratch register.
void add_in_place(Circuit& c, const Operand& addend, std::span<const Qubit> target,
                  std::span<const Qubit> carries = {});
/// target -= addend (mod 2^|target|).
void sub_in_place(Circuit& c, const Operand& addend, std::span<const Qubit> target,
                  std::span<const Qubit> carries = {});
/// target += w * x for an integer constant w via shifted additions.
void add_scaled(Circuit& c, const Operand& x, std::int64_t w, std::span<const Qubit> target,
                std::span<const Qubit> carries = {});

/// out = a + b for a zero-initialized out with matching fraction bits and
/// width >= max(|a|, |b|) + 1.
void build_adder(Circuit& c, std::size_t a, std::size_t b, std::size_t out, int level = -1);

/// out = a * b by shift-and-add; out must be zero-initialized with width >=
/// |a| + |b| and fraction bits fa + fb. Scratch (|a| partial bits, |out| - 1
/// carries, all zero) may be supplied for reuse; empty spans allocate it.
void build_multiplier(Circuit& c, std::size_t a, std::size_t b, std::size_t out, int level = -1,
                      std::span<const Qubit> partial = {}, std::span<const Qubit> carries = {});

/// target ^= control * pattern(raw), i.e. loads raw into a zeroed target
/// when the control is set.
void build_const_load(Circuit& c, Qubit control, std::int64_t raw, std::size_t target,
                      int level = -1);

/// One PHASE per bit so that a basis value v picks up exp(-i t_eff v).
void build_phase_ladder(Circuit& c, std::size_t reg, double t_eff, int level = -1);

/// Copies src into each zeroed destination; a doubling tree of transversal
/// CNOTs, or one FANOUT per bit.
void build_copy(Circuit& c, std::size_t src, std::span<const std::size_t> dests, bool use_fanout,
                int level = -1);

/// Allocates a scratch register of n qubits and returns its qubits.
std::vector<Qubit> alloc_scratch(Circuit& c, int n, const char* name, int level = -1);

}  // namespace q2fmm
