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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace q2fmm {

/// Raised for invalid user-supplied geometry, options or states.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  [[nodiscard]] double norm2() const { return x * x + y * y + z * z; }
  [[nodiscard]] double norm() const { return std::sqrt(norm2()); }
};

/// Geometry and couplings of the extended Hubbard lattice.
///
/// Sites sit on integer coordinates with unit spacing and are numbered
/// row-major: site = y * width + x. A spinful site owns two adjacent modes
/// (2 * site for spin up, 2 * site + 1 for spin down).
struct LatticeSpec {
  int width = 2;
  int height = 2;
  bool spinful = false;
  double hopping_t = 1.0;
  double onsite_v0 = 0.0;
  /// Upper bound on the electron number, used for register sizing.
  int electron_count_q = 1;

  [[nodiscard]] int num_sites() const { return width * height; }
  [[nodiscard]] int modes_per_site() const { return spinful ? 2 : 1; }
  [[nodiscard]] int num_modes() const { return num_sites() * modes_per_site(); }
  [[nodiscard]] int site_index(int x, int y) const { return y * width + x; }
  [[nodiscard]] int site_x(int site) const { return site % width; }
  [[nodiscard]] int site_y(int site) const { return site / width; }
  [[nodiscard]] Vec3 site_position(int site) const {
    return {static_cast<double>(site_x(site)), static_cast<double>(site_y(site)), 0.0};
  }
  [[nodiscard]] int max_occupancy() const { return modes_per_site() * num_sites(); }

  /// Checks dimensions and the electron bound; does not require powers of two.
  void validate() const;
  /// Additionally requires a square lattice with side 2^k, k >= 1.
  void validate_for_hierarchy() const;
};

[[nodiscard]] bool is_power_of_two(int v);
/// log2 of a power of two.
[[nodiscard]] int exact_log2(int v);

/// Computational-basis occupation configuration, one entry per mode.
class FockState {
public:
  FockState() = default;
  FockState(const LatticeSpec& lattice, std::vector<std::uint8_t> modes);

  /// Spinless state from per-site occupations; spinful lattices fill spin up
  /// first, so occupation 1 means n_up = 1 and 2 means doubly occupied.
  static FockState from_site_occupations(const LatticeSpec& lattice,
                                         std::span<const int> occupations);
  /// Basis index with mode k at bit k.
  static FockState from_basis_index(const LatticeSpec& lattice, std::uint64_t index);
  static FockState empty(const LatticeSpec& lattice);

  [[nodiscard]] bool spinful() const { return spinful_; }
  [[nodiscard]] int num_sites() const { return static_cast<int>(modes_.size()) / (spinful_ ? 2 : 1); }
  [[nodiscard]] int occupation(int site) const;
  [[nodiscard]] int total() const;
  [[nodiscard]] const std::vector<std::uint8_t>& modes() const { return modes_; }
  [[nodiscard]] bool doubly_occupied(int site) const;

private:
  bool spinful_ = false;
  std::vector<std::uint8_t> modes_;
};

}  // namespace q2fmm
