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

#include "q2fmm/lattice.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace q2fmm {

/// Basis states of up to 12 modes grouped by particle number.
class FockSectors {
public:
  static constexpr int kMaxModes = 12;

  explicit FockSectors(int modes);

  [[nodiscard]] int modes() const { return modes_; }
  [[nodiscard]] std::uint64_t dimension() const { return std::uint64_t{1} << modes_; }
  [[nodiscard]] int num_sectors() const { return modes_ + 1; }
  /// Basis indices with n particles, ascending.
  [[nodiscard]] const std::vector<std::uint64_t>& states(int n) const {
    return states_[static_cast<std::size_t>(n)];
  }
  [[nodiscard]] int position(std::uint64_t basis) const { return position_[basis]; }

private:
  int modes_ = 0;
  std::vector<std::vector<std::uint64_t>> states_;
  std::vector<int> position_;
};

struct HamiltonianTerms {
  bool hopping = true;
  bool onsite = true;
  bool coulomb = true;
};

/// Real symmetric block of H in the n-particle sector. Hopping is
/// -t sum over nearest-neighbour bonds and spins of (c+_i c_j + h.c.) with
/// Jordan-Wigner signs in mode order; on-site is V0 n_up n_down; Coulomb is
/// the exact pair sum.
[[nodiscard]] Eigen::MatrixXd hamiltonian_block(const LatticeSpec& lattice,
                                                const FockSectors& sectors, int n,
                                                HamiltonianTerms terms = {});

/// Operator that conserves particle number, stored as one dense block per
/// sector.
class SectorOperator {
public:
  SectorOperator() = default;
  SectorOperator(const FockSectors& sectors, std::vector<Eigen::MatrixXcd> blocks);

  static SectorOperator identity(const FockSectors& sectors);
  /// diag(exp(i phase[k])) for basis index k.
  static SectorOperator diagonal(const FockSectors& sectors, const Eigen::VectorXd& phase);

  [[nodiscard]] const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
  [[nodiscard]] Eigen::MatrixXcd dense() const;
  /// Applies to the columns of `states` (full basis ordering).
  [[nodiscard]] Eigen::MatrixXcd apply(const Eigen::MatrixXcd& states) const;
  [[nodiscard]] SectorOperator operator*(const SectorOperator& rhs) const;
  [[nodiscard]] SectorOperator pow(int k) const;
  /// Largest singular value of this - rhs.
  [[nodiscard]] double distance(const SectorOperator& rhs) const;

private:
  const FockSectors* sectors_ = nullptr;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// exp(-i t H) with the selected terms.
[[nodiscard]] SectorOperator evolution(const LatticeSpec& lattice, const FockSectors& sectors,
                                       double t, HamiltonianTerms terms = {});

/// Dense exp(-i t (T + V_os + V_C)); the lattice must have at most 12 modes
/// (dimension 4096).
[[nodiscard]] Eigen::MatrixXcd exact_evolution(const LatticeSpec& lattice, double t);

/// Exact Coulomb energy for every basis index.
[[nodiscard]] Eigen::VectorXd coulomb_diagonal(const LatticeSpec& lattice);

}  // namespace q2fmm
