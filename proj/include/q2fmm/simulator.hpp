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
#include "q2fmm/lattice.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace q2fmm {

struct BasisOutcome {
  std::vector<std::uint8_t> bits;
  /// Accumulated phase reduced to [-pi, pi].
  double phase = 0.0;
};

/// Propagates one computational basis state through a circuit of classical
/// reversible gates and diagonal phases.
[[nodiscard]] BasisOutcome run_basis(const Circuit& c, std::span<const std::uint8_t> input);

/// Up to 64 basis states at once, one bit lane per state.
struct BasisBatch {
  int lanes = 0;
  std::vector<std::uint64_t> words;  ///< one word per qubit
  std::vector<double> phase;         ///< unreduced phase per lane
};

void run_basis_batch(const Circuit& c, BasisBatch& batch);

/// Per-state result of running a diagonal circuit on system basis states.
struct PhaseCheck {
  std::vector<double> phases;  ///< reduced to [-pi, pi]
  bool ancillae_restored = true;
  bool system_preserved = true;
};

/// Runs every state (system qubits = System registers in mode order, all
/// ancillae zero) and checks that the circuit acted diagonally.
[[nodiscard]] PhaseCheck evaluate_phases(const Circuit& c, std::span<const FockState> states,
                                         int jobs = 1);
/// Same for all 2^m basis states of the m system qubits (m <= 24).
[[nodiscard]] PhaseCheck evaluate_all_phases(const Circuit& c, int jobs = 1);

/// System qubits in mode order.
[[nodiscard]] std::vector<Qubit> system_qubits(const Circuit& c);

using Amplitude = std::complex<double>;

/// Dense state of n <= cap qubits; qubit k is bit k of the amplitude index.
class Statevector {
public:
  static constexpr int kDefaultCap = 22;

  explicit Statevector(int num_qubits, int cap = kDefaultCap);
  static Statevector basis(int num_qubits, std::uint64_t index, int cap = kDefaultCap);

  [[nodiscard]] int num_qubits() const { return n_; }
  [[nodiscard]] std::vector<Amplitude>& amplitudes() { return amp_; }
  [[nodiscard]] const std::vector<Amplitude>& amplitudes() const { return amp_; }
  [[nodiscard]] double norm() const;

private:
  int n_ = 0;
  std::vector<Amplitude> amp_;
};

[[nodiscard]] Statevector run_statevector(const Circuit& c, Statevector psi);

/// Wraps an angle to [-pi, pi].
[[nodiscard]] double wrap_phase(double angle);
/// Distance of two angles on the unit circle, in radians.
[[nodiscard]] double phase_distance(double a, double b);

}  // namespace q2fmm
