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

#include <complex>
#include <cstdint>
#include <vector>

namespace q2fmm {

using Complex = std::complex<double>;

struct SolidHarmonicIndex {
  int ell = 0;
  int m = 0;
};

/// Offset of (ell, m >= 0) in a triangular coefficient table.
[[nodiscard]] constexpr int harmonic_offset(int ell, int m) { return ell * (ell + 1) / 2 + m; }
[[nodiscard]] constexpr int harmonic_table_size(int order) {
  return (order + 1) * (order + 2) / 2;
}

/// n! as an exact integer, n <= 20.
[[nodiscard]] std::uint64_t factorial(int n);

/// sqrt((ell - m)! (ell + m)!), |m| <= ell <= 10.
[[nodiscard]] double harmonic_factorial_norm(int ell, int m);

/// Scaled regular solid harmonics R_lm = r^l C_lm / sqrt((l-m)!(l+m)!) for
/// all ell <= order and 0 <= m <= ell (Racah-normalized C_lm with the
/// Condon-Shortley phase). Evaluated with the Cartesian recurrences, so r = 0
/// is allowed and gives the analytic limit.
[[nodiscard]] std::vector<Complex> regular_harmonics(int order, const Vec3& r);

/// Irregular solid harmonics I_lm = sqrt((l-m)!(l+m)!) C_lm / r^(l+1) for all
/// ell <= order, 0 <= m <= ell. Throws on r = 0.
[[nodiscard]] std::vector<Complex> irregular_harmonics(int order, const Vec3& r);

/// Single coefficient, any |m| <= ell, using X_{l,-m} = (-1)^m conj(X_lm).
[[nodiscard]] Complex regular_solid_harmonic(SolidHarmonicIndex idx, const Vec3& r);
[[nodiscard]] Complex irregular_solid_harmonic(SolidHarmonicIndex idx, const Vec3& r);

/// Reads coefficient (ell, m) with any sign of m from an m >= 0 table.
[[nodiscard]] Complex harmonic_at(const std::vector<Complex>& table, int ell, int m);

/// 1 / |ra - rb|.
[[nodiscard]] double coulomb_kernel(const Vec3& ra, const Vec3& rb);

}  // namespace q2fmm
