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

#include "q2fmm/solid_harmonics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace q2fmm {

namespace {

constexpr int kMaxFactorial = 20;

constexpr std::array<std::uint64_t, kMaxFactorial + 1> make_factorials() {
  std::array<std::uint64_t, kMaxFactorial + 1> f{};
  f[0] = 1;
  for (int n = 1; n <= kMaxFactorial; ++n) {
    f[static_cast<std::size_t>(n)] = f[static_cast<std::size_t>(n - 1)] * static_cast<std::uint64_t>(n);
  }
  return f;
}

constexpr auto kFactorials = make_factorials();

void check_index(SolidHarmonicIndex idx) {
  if (idx.ell < 0 || std::abs(idx.m) > idx.ell) {
    throw ValidationError("invalid solid harmonic index (" + std::to_string(idx.ell) + ", " +
                          std::to_string(idx.m) + ")");
  }
}

}  // namespace

std::uint64_t factorial(int n) {
  if (n < 0 || n > kMaxFactorial) {
    throw std::out_of_range("factorial: argument out of the exact range");
  }
  return kFactorials[static_cast<std::size_t>(n)];
}

double harmonic_factorial_norm(int ell, int m) {
  return std::sqrt(static_cast<double>(factorial(ell - m)) * static_cast<double>(factorial(ell + m)));
}

std::vector<Complex> regular_harmonics(int order, const Vec3& r) {
  std::vector<Complex> t(static_cast<std::size_t>(harmonic_table_size(order)));
  const Complex xy(r.x, r.y);
  const double r2 = r.norm2();
  t[0] = 1.0;
  for (int l = 0; l < order; ++l) {
    t[static_cast<std::size_t>(harmonic_offset(l + 1, l + 1))] =
        -xy * t[static_cast<std::size_t>(harmonic_offset(l, l))] / (2.0 * (l + 1));
    for (int m = 0; m <= l; ++m) {
      const Complex prev = (m <= l - 1) ? t[static_cast<std::size_t>(harmonic_offset(l - 1, m))] : 0.0;
      t[static_cast<std::size_t>(harmonic_offset(l + 1, m))] =
          ((2.0 * l + 1.0) * r.z * t[static_cast<std::size_t>(harmonic_offset(l, m))] - r2 * prev) /
          static_cast<double>((l + m + 1) * (l - m + 1));
    }
  }
  return t;
}

std::vector<Complex> irregular_harmonics(int order, const Vec3& r) {
  const double r2 = r.norm2();
  if (r2 == 0.0) {
    throw std::domain_error("irregular solid harmonic is singular at r = 0");
  }
  std::vector<Complex> t(static_cast<std::size_t>(harmonic_table_size(order)));
  const Complex xy(r.x, r.y);
  t[0] = 1.0 / std::sqrt(r2);
  for (int l = 0; l < order; ++l) {
    t[static_cast<std::size_t>(harmonic_offset(l + 1, l + 1))] =
        -(2.0 * l + 1.0) * xy * t[static_cast<std::size_t>(harmonic_offset(l, l))] / r2;
    for (int m = 0; m <= l; ++m) {
      const Complex prev = (m <= l - 1) ? t[static_cast<std::size_t>(harmonic_offset(l - 1, m))] : 0.0;
      t[static_cast<std::size_t>(harmonic_offset(l + 1, m))] =
          ((2.0 * l + 1.0) * r.z * t[static_cast<std::size_t>(harmonic_offset(l, m))] -
           static_cast<double>(l * l - m * m) * prev) /
          r2;
    }
  }
  return t;
}

Complex harmonic_at(const std::vector<Complex>& table, int ell, int m) {
  if (m >= 0) {
    return table[static_cast<std::size_t>(harmonic_offset(ell, m))];
  }
  const Complex c = std::conj(table[static_cast<std::size_t>(harmonic_offset(ell, -m))]);
  return (m % 2 == 0) ? c : -c;
}

Complex regular_solid_harmonic(SolidHarmonicIndex idx, const Vec3& r) {
  check_index(idx);
  return harmonic_at(regular_harmonics(idx.ell, r), idx.ell, idx.m);
}

Complex irregular_solid_harmonic(SolidHarmonicIndex idx, const Vec3& r) {
  check_index(idx);
  return harmonic_at(irregular_harmonics(idx.ell, r), idx.ell, idx.m);
}

double coulomb_kernel(const Vec3& ra, const Vec3& rb) {
  const double d = (ra - rb).norm();
  if (d == 0.0) {
    throw std::domain_error("coulomb_kernel: coincident points");
  }
  return 1.0 / d;
}

}  // namespace q2fmm
