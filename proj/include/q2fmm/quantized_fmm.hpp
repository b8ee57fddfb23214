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

#include "q2fmm/hierarchy.hpp"
#include "q2fmm/quantization.hpp"

namespace q2fmm {

/// Classical replay of the synthesized arithmetic for one basis state.
struct QuantizedEvaluation {
  double direct_energy = 0.0;  ///< finest-level pairs, exact distances
  double far_energy = 0.0;     ///< box pairs from the quantized registers
  /// Phase the circuit imprints: -delta_t * (direct + far), not reduced.
  double phase = 0.0;
  /// Bound on |direct + far - fmm_total_energy| from fixed-point rounding.
  double error_bound = 0.0;

  [[nodiscard]] double energy() const { return direct_energy + far_energy; }
};

/// Evaluates the quantized FMM energy with integer arithmetic that mirrors
/// the circuit register by register. Requires state.total() <= Q.
[[nodiscard]] QuantizedEvaluation quantized_fmm(const BoxHierarchy& h, const SynthesisOptions& opts,
                                                const FockState& state);
/// Same with a prebuilt plan (order >= 1).
[[nodiscard]] QuantizedEvaluation quantized_fmm(const BoxHierarchy& h, const SynthesisOptions& opts,
                                                const QuantizationPlan& plan,
                                                const FockState& state);

}  // namespace q2fmm
