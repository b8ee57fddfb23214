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
#include "q2fmm/fermion.hpp"
#include "q2fmm/lattice.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace q2fmm {

/// -delta_t * E_C(k) for every basis index k.
[[nodiscard]] Eigen::VectorXd exact_coulomb_phases(const LatticeSpec& lattice, double delta_t);

/// Coulomb phase per basis index as imprinted by a synthesized circuit. The
/// on-site term the circuit also carries for spinful lattices is removed, so
/// the result pairs with a kinetic factor that contains V_os. Needs Q at least
/// the mode count, otherwise states above Q would wrap.
[[nodiscard]] Eigen::VectorXd circuit_coulomb_phases(const Circuit& c, const LatticeSpec& lattice,
                                                     double delta_t, int jobs = 1);

/// One Trotter step. Order 2 is K(dt/2) D K(dt/2), order 1 is K(dt) D, with
/// K(s) = exp(-i s (T + V_os)) and D = diag(exp(i coulomb_phase)).
[[nodiscard]] SectorOperator trotter_step(const LatticeSpec& lattice, const FockSectors& sectors,
                                          const Eigen::VectorXd& coulomb_phase, double delta_t,
                                          int order);

struct TrotterSweepOptions {
  int order = 2;
  /// FMM order for the circuit-phase run; -1 skips it (exact V_C only).
  int fmm_order = -1;
  double eps_b = 1.0 / 16.0;
  int samples = 200;
  std::uint64_t seed = 20260101;
  int jobs = 1;
};

struct TrotterErrorRow {
  int steps = 0;
  double delta_t = 0.0;
  /// Max over sampled states of |U_circuit^d psi - U psi|.
  double total_error = 0.0;
  /// Same for the exact-V_C Trotter product.
  double trotter_error = 0.0;
  /// Max over sampled states of |U_circuit^d psi - U_trotter^d psi|.
  double fmm_error = 0.0;
  /// Spectral norm of U_trotter^d - U.
  double trotter_spectral = 0.0;
  /// Max per-basis-state distance between circuit and exact Coulomb phases
  /// for one step.
  double max_phase_error = 0.0;
};

/// Global error of d Trotter steps of length t_total / d against
/// exact_evolution(t_total), on Haar-random states drawn from `seed`.
[[nodiscard]] std::vector<TrotterErrorRow> trotter_error_sweep(const LatticeSpec& lattice,
                                                               double t_total,
                                                               const std::vector<int>& step_counts,
                                                               const TrotterSweepOptions& opts = {});

/// Columns of the sweep CSV.
[[nodiscard]] std::vector<std::string> trotter_csv_header();
[[nodiscard]] std::vector<std::vector<std::string>> trotter_csv_rows(
    const std::vector<TrotterErrorRow>& rows);

}  // namespace q2fmm
