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

#include "q2fmm/lattice.hpp"

#include <numeric>
#include <string>

namespace q2fmm {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int exact_log2(int v) {
  if (!is_power_of_two(v)) {
    throw ValidationError("exact_log2: " + std::to_string(v) + " is not a power of two");
  }
  int k = 0;
  while ((1 << k) < v) {
    ++k;
  }
  return k;
}

void LatticeSpec::validate() const {
  if (width < 1 || height < 1) {
    throw ValidationError("lattice dimensions must be positive, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  if (width * height > 1 << 16) {
    throw ValidationError("lattice too large: " + std::to_string(width * height) + " sites");
  }
  if (electron_count_q < 0 || electron_count_q > max_occupancy()) {
    throw ValidationError("electron_count_q=" + std::to_string(electron_count_q) +
                          " must lie in [0, " + std::to_string(max_occupancy()) + "]");
  }
  if (!std::isfinite(hopping_t) || !std::isfinite(onsite_v0)) {
    throw ValidationError("hopping_t and onsite_v0 must be finite");
  }
}

void LatticeSpec::validate_for_hierarchy() const {
  validate();
  if (width != height) {
    throw ValidationError("only square lattices are supported, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  if (!is_power_of_two(width) || width < 2) {
    throw ValidationError("lattice side must be a power of two >= 2, got " +
                          std::to_string(width));
  }
}

FockState::FockState(const LatticeSpec& lattice, std::vector<std::uint8_t> modes)
    : spinful_(lattice.spinful), modes_(std::move(modes)) {
  if (static_cast<int>(modes_.size()) != lattice.num_modes()) {
    throw ValidationError("state has " + std::to_string(modes_.size()) + " modes, lattice has " +
                          std::to_string(lattice.num_modes()));
  }
  for (auto m : modes_) {
    if (m > 1) {
      throw ValidationError("mode occupations must be 0 or 1");
    }
  }
}

FockState FockState::from_site_occupations(const LatticeSpec& lattice,
                                           std::span<const int> occupations) {
  if (static_cast<int>(occupations.size()) != lattice.num_sites()) {
    throw ValidationError("state length " + std::to_string(occupations.size()) +
                          " does not match " + std::to_string(lattice.num_sites()) + " sites");
  }
  std::vector<std::uint8_t> modes(static_cast<std::size_t>(lattice.num_modes()), 0);
  for (int s = 0; s < lattice.num_sites(); ++s) {
    const int occ = occupations[static_cast<std::size_t>(s)];
    if (occ < 0 || occ > lattice.modes_per_site()) {
      throw ValidationError("site " + std::to_string(s) + " occupation " + std::to_string(occ) +
                            " out of range");
    }
    if (lattice.spinful) {
      modes[2 * static_cast<std::size_t>(s)] = occ >= 1;
      modes[2 * static_cast<std::size_t>(s) + 1] = occ == 2;
    } else {
      modes[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(occ);
    }
  }
  return FockState(lattice, std::move(modes));
}

FockState FockState::from_basis_index(const LatticeSpec& lattice, std::uint64_t index) {
  std::vector<std::uint8_t> modes(static_cast<std::size_t>(lattice.num_modes()));
  for (std::size_t k = 0; k < modes.size(); ++k) {
    modes[k] = (index >> k) & 1U;
  }
  return FockState(lattice, std::move(modes));
}

FockState FockState::empty(const LatticeSpec& lattice) {
  return FockState(lattice, std::vector<std::uint8_t>(static_cast<std::size_t>(lattice.num_modes()), 0));
}

int FockState::occupation(int site) const {
  const auto s = static_cast<std::size_t>(site);
  return spinful_ ? modes_[2 * s] + modes_[2 * s + 1] : modes_[s];
}

int FockState::total() const { return std::accumulate(modes_.begin(), modes_.end(), 0); }

bool FockState::doubly_occupied(int site) const { return spinful_ && occupation(site) == 2; }

}  // namespace q2fmm
