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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace q2fmm {

/// Position of a box in the quadtree: level L has 2^L x 2^L boxes.
struct BoxIndex {
  int level = 0;
  int i = 0;  ///< column (x direction)
  int j = 0;  ///< row (y direction)

  friend auto operator<=>(const BoxIndex&, const BoxIndex&) = default;
};

struct Box {
  BoxIndex index;
  /// Side length in sites.
  int side = 1;
  /// Geometric center in lattice units, z = 0.
  Vec3 center;
  /// Half diagonal of the box footprint (side * sqrt(2) / 2).
  double radius = 0.0;
};

struct SitePair {
  int a = 0;
  int b = 0;
  friend auto operator<=>(const SitePair&, const SitePair&) = default;
};

/// Quadtree over a square 2^k lattice with near fields and interaction lists.
///
/// Immutable once built. Level 0 is the root; level max_level() boxes are
/// single sites. Interaction lists exist from level 2 on; a truncated
/// hierarchy (see level_cutoff) keeps lists only on its active levels.
class BoxHierarchy {
public:
  static BoxHierarchy build(const LatticeSpec& lattice);

  [[nodiscard]] const LatticeSpec& lattice() const { return lattice_; }
  [[nodiscard]] int max_level() const { return max_level_; }
  [[nodiscard]] int boxes_per_side(int level) const { return 1 << level; }
  [[nodiscard]] int num_boxes(int level) const { return 1 << (2 * level); }
  [[nodiscard]] int linear_id(const BoxIndex& b) const { return b.j * boxes_per_side(b.level) + b.i; }
  [[nodiscard]] BoxIndex from_linear(int level, int id) const;
  [[nodiscard]] const Box& box(const BoxIndex& b) const;
  [[nodiscard]] const std::vector<Box>& level_boxes(int level) const;
  [[nodiscard]] bool contains(const BoxIndex& b) const;

  [[nodiscard]] BoxIndex parent(const BoxIndex& b) const;
  /// Children in order (0,0), (1,0), (0,1), (1,1) relative offsets.
  [[nodiscard]] std::vector<BoxIndex> children(const BoxIndex& b) const;
  /// Sites covered by the box, row-major.
  [[nodiscard]] std::vector<int> sites(const BoxIndex& b) const;

  [[nodiscard]] const std::vector<BoxIndex>& near_field(const BoxIndex& b) const;
  /// Empty for levels < 2 and for levels removed by level_cutoff.
  [[nodiscard]] const std::vector<BoxIndex>& interaction_list(const BoxIndex& b) const;

  [[nodiscard]] bool level_active(int level) const;
  /// Coarsest level with (possibly empty) active interaction lists.
  [[nodiscard]] int coarsest_active_level() const;
  /// Coarsest level whose boxes get aggregated data (box sums / moments).
  [[nodiscard]] int coarsest_merge_level() const;
  [[nodiscard]] bool truncated() const { return truncated_; }

  /// Unordered interaction-list pairs (A < B by linear id) of one level.
  [[nodiscard]] std::vector<std::pair<BoxIndex, BoxIndex>> interaction_pairs(int level) const;
  /// Unordered adjacent site pairs handled directly at the finest level.
  [[nodiscard]] std::vector<SitePair> finest_near_pairs() const;

  /// Drops every level whose interaction-list center distances all exceed xi.
  [[nodiscard]] BoxHierarchy level_cutoff(double xi) const;

  /// One record per box: level, index, center, radius, near-field and
  /// interaction-list linear ids.
  void dump(std::ostream& os) const;

private:
  LatticeSpec lattice_;
  int max_level_ = 0;
  bool truncated_ = false;
  std::vector<bool> active_;
  std::vector<std::vector<Box>> levels_;
  std::vector<std::vector<std::vector<BoxIndex>>> near_;
  std::vector<std::vector<std::vector<BoxIndex>>> ilist_;
};

/// Every site pair produced by expanding the interaction lists of all active
/// levels plus the finest-level near field (one entry per occurrence).
[[nodiscard]] std::vector<SitePair> covered_pairs(const BoxHierarchy& h);

}  // namespace q2fmm
