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
#include "q2fmm/hierarchy.hpp"
#include "q2fmm/quantization.hpp"

#include <iosfwd>
#include <vector>

namespace q2fmm {

/// Phase per unit product of box occupancies for one unordered box pair:
/// delta_t / |center_A - center_B| (the 1/2 of the ordered double sum is
/// absorbed by enumerating each pair once).
struct EffectiveTime {
  BoxIndex a;
  BoxIndex b;
  double value = 0.0;
};

/// Same for a pair of sites handled directly at the finest level.
struct DirectTime {
  int a = 0;
  int b = 0;
  double value = 0.0;
};

struct EffectiveTimes {
  std::vector<EffectiveTime> boxes;  ///< interaction pairs above the finest level
  std::vector<DirectTime> direct;    ///< finest near field and finest interaction lists
};

[[nodiscard]] EffectiveTimes effective_times(const BoxHierarchy& h, double delta_t);

/// Appends multiplier -> phase ladder -> inverse multiplier on a fresh
/// product register, giving exp(-i t_eff N_A N_B) and a clean product.
void synth_evo_gate(Circuit& c, std::size_t reg_a, std::size_t reg_b, double t_eff, int level = -1);

/// Zeroth-order circuit: direct CPHASE pairs, box-sum merges level by level
/// with Evo gates on each level's interaction pairs, then inverse merges.
[[nodiscard]] Circuit synth_zeroth(const BoxHierarchy& h, const SynthesisOptions& opts);

/// Order p >= 1: site loads into moment registers, fixed-point translations,
/// one signed energy register and ladder per interaction pair, then the
/// moment computation undone in reverse order.
[[nodiscard]] Circuit synth_higher(const BoxHierarchy& h, const SynthesisOptions& opts);

/// Appends the on-site term V0 n_up n_down as one CPHASE per site of a
/// circuit built for a spinful lattice.
[[nodiscard]] Circuit synth_spinful_adapter(Circuit c, const LatticeSpec& lattice, double delta_t);

/// synth_zeroth or synth_higher by order, plus the spinful adapter when the
/// lattice is spinful.
[[nodiscard]] Circuit synthesize(const BoxHierarchy& h, const SynthesisOptions& opts);

/// Gate counts attributed to the outermost block of each gate, by level
/// (index max_level + 1 collects gates outside any levelled block).
[[nodiscard]] std::vector<std::size_t> gates_per_level(const Circuit& c, int max_level);

/// JSON manifest: options, register roles and sizes, per-level gate counts.
void write_manifest(std::ostream& os, const Circuit& c, const BoxHierarchy& h,
                    const SynthesisOptions& opts);

}  // namespace q2fmm
