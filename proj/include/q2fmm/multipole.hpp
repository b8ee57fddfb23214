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
#include "q2fmm/solid_harmonics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace q2fmm {

/// Multipole coefficients M_lm (0 <= m <= ell <= order) about a center.
///
/// Negative m follows from M_{l,-m} = (-1)^m conj(M_lm). The normalized
/// coefficient M_lm / (r^l / sqrt((l-m)!(l+m)!)) is bounded by the box
/// occupancy, where r is the box radius.
class MomentSet {
public:
  MomentSet() = default;
  MomentSet(int order, Vec3 center, double radius);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] const Vec3& center() const { return center_; }
  [[nodiscard]] double radius() const { return radius_; }

  [[nodiscard]] Complex get(int ell, int m) const;
  Complex& at(int ell, int m) { return coeffs_[static_cast<std::size_t>(harmonic_offset(ell, m))]; }
  [[nodiscard]] const std::vector<Complex>& coefficients() const { return coeffs_; }

  /// r^l / sqrt((l-m)!(l+m)!).
  [[nodiscard]] double normalization(int ell, int m) const;
  [[nodiscard]] Complex normalized(int ell, int m) const { return get(ell, m) / normalization(ell, std::abs(m)); }
  [[nodiscard]] bool is_zero() const;

  MomentSet& operator+=(const MomentSet& o);

private:
  int order_ = 0;
  Vec3 center_;
  double radius_ = 0.0;
  std::vector<Complex> coeffs_ = std::vector<Complex>(1);
};

/// Moments of the given sites (with per-site charges) about `center`.
[[nodiscard]] MomentSet moments_about(const LatticeSpec& lattice, std::span<const int> sites,
                                      const FockState& state, int order, Vec3 center,
                                      double radius);

[[nodiscard]] MomentSet compute_moments(const BoxHierarchy& h, const BoxIndex& box,
                                        const FockState& state, int order);

/// Re-expands `child` about child.center() + d (d points from the child to
/// the parent center).
[[nodiscard]] MomentSet translate_m2m(const MomentSet& child, const Vec3& d, double parent_radius);

/// Sum of the translated moments of the four children of `parent`.
[[nodiscard]] MomentSet aggregate_children(std::span<const MomentSet> children,
                                           const BoxHierarchy& h, const BoxIndex& parent);

/// sum_{l+j<=p} (-1)^l M^A_lm conj(I_{l+j,m+k}(r_ab)) M^B_jk with
/// r_ab = center_A - center_B. The complex variant exposes the imaginary
/// residue; pair_energy throws if it is not negligible.
[[nodiscard]] Complex pair_energy_complex(const MomentSet& a, const MomentSet& b, const Vec3& r_ab,
                                          int order);
[[nodiscard]] double pair_energy(const MomentSet& a, const MomentSet& b, const Vec3& r_ab,
                                 int order);

/// Moments of every box on levels coarsest_merge_level()..max_level(),
/// obtained from single-site moments by repeated M2M. Indexed [level][id].
[[nodiscard]] std::vector<std::vector<MomentSet>> upward_pass(const BoxHierarchy& h,
                                                              const FockState& state, int order);

/// Interaction-list pair energies over all active levels plus the exact
/// finest-level near field; each unordered pair counted once.
[[nodiscard]] double fmm_total_energy(const BoxHierarchy& h, const FockState& state, int order);

/// sum_{a<b} n_a n_b / |r_a - r_b| with n the per-site occupation.
[[nodiscard]] double brute_force_energy(const LatticeSpec& lattice, const FockState& state);

/// Uniformly random state with exactly `electrons` occupied spinless sites
/// (spinful lattices: occupied modes), deterministic in the seed.
[[nodiscard]] FockState random_state(const LatticeSpec& lattice, int electrons, std::uint64_t seed);

struct EnergySample {
  int n_sites = 0;
  int order = 0;
  std::uint64_t state_seed = 0;
  double e_fmm = 0.0;
  double e_exact = 0.0;
  double rel_error = 0.0;
};

struct ErrorSweepRow {
  int order = 0;
  double median_rel_error = 0.0;
  double max_rel_error = 0.0;
};

struct ErrorSweep {
  std::vector<EnergySample> samples;
  std::vector<ErrorSweepRow> rows;
};

/// Half-filled random states, one per seed, evaluated at every order.
[[nodiscard]] ErrorSweep fmm_error_sweep(const LatticeSpec& lattice,
                                         std::span<const std::uint64_t> seeds,
                                         std::span<const int> orders);

}  // namespace q2fmm
