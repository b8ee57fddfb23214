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

#include "q2fmm/hierarchy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace q2fmm {
namespace {

LatticeSpec square(int w) {
  LatticeSpec l;
  l.width = l.height = w;
  l.electron_count_q = 1;
  return l;
}

// Interaction list straight from the definition, scanning the whole level.
std::set<std::pair<int, int>> brute_ilist(int level, int i, int j) {
  std::set<std::pair<int, int>> out;
  if (level < 2) {
    return out;
  }
  const int n = 1 << level;
  for (int bj = 0; bj < n; ++bj) {
    for (int bi = 0; bi < n; ++bi) {
      const bool near = std::abs(bi - i) <= 1 && std::abs(bj - j) <= 1;
      const bool parents_adjacent = std::abs(bi / 2 - i / 2) <= 1 && std::abs(bj / 2 - j / 2) <= 1;
      if (!near && parents_adjacent) {
        out.insert({bi, bj});
      }
    }
  }
  return out;
}

TEST(Hierarchy, LevelCountsAndGeometry) {
  const auto h2 = BoxHierarchy::build(square(2));
  EXPECT_EQ(h2.max_level(), 1);
  EXPECT_EQ(h2.level_boxes(0).size(), 1U);
  EXPECT_EQ(h2.level_boxes(1).size(), 4U);

  const auto h16 = BoxHierarchy::build(square(16));
  EXPECT_EQ(h16.max_level(), 4);
  EXPECT_EQ(h16.level_boxes(2).size(), 16U);

  const auto h8 = BoxHierarchy::build(square(8));
  for (const auto& b : h8.level_boxes(3)) {
    EXPECT_DOUBLE_EQ(b.radius, std::sqrt(2.0) / 2.0);
  }
}

TEST(Hierarchy, ChildCentersAverageToParent) {
  const auto h = BoxHierarchy::build(square(16));
  for (int level = 0; level < h.max_level(); ++level) {
    for (const auto& b : h.level_boxes(level)) {
      Vec3 sum;
      for (const auto& c : h.children(b.index)) {
        sum = sum + h.box(c).center;
        EXPECT_EQ(h.parent(c), b.index);
        EXPECT_DOUBLE_EQ(h.box(c).radius, b.radius / 2.0);
      }
      EXPECT_NEAR(sum.x / 4.0, b.center.x, 1e-12);
      EXPECT_NEAR(sum.y / 4.0, b.center.y, 1e-12);
    }
  }
}

TEST(Hierarchy, RejectsNonPowerOfTwo) {
  EXPECT_THROW(BoxHierarchy::build(square(6)), ValidationError);
  EXPECT_THROW(BoxHierarchy::build(square(1)), ValidationError);
  LatticeSpec rect = square(8);
  rect.height = 4;
  EXPECT_THROW(BoxHierarchy::build(rect), ValidationError);
}

TEST(Hierarchy, NearFieldSizes) {
  const auto h = BoxHierarchy::build(square(8));
  EXPECT_EQ(h.near_field({3, 3, 4}).size(), 8U);
  EXPECT_EQ(h.near_field({3, 0, 0}).size(), 3U);
  EXPECT_EQ(h.near_field({3, 0, 4}).size(), 5U);
}

TEST(Hierarchy, InteractionListMatchesBruteForce) {
  for (int w : {4, 8, 16, 32}) {
    const auto h = BoxHierarchy::build(square(w));
    for (int level = 0; level <= h.max_level(); ++level) {
      for (const auto& b : h.level_boxes(level)) {
        std::set<std::pair<int, int>> got;
        for (const auto& o : h.interaction_list(b.index)) {
          got.insert({o.i, o.j});
        }
        EXPECT_EQ(got, brute_ilist(level, b.index.i, b.index.j)) << "w=" << w << " level=" << level;
        EXPECT_LE(got.size(), 27U);
      }
    }
  }
}

TEST(Hierarchy, InteractionListExamples) {
  const auto h = BoxHierarchy::build(square(16));
  for (const auto& b : h.level_boxes(1)) {
    EXPECT_TRUE(h.interaction_list(b.index).empty());
  }
  EXPECT_EQ(h.interaction_list({3, 3, 3}).size(), 27U);
  EXPECT_EQ(h.interaction_list({2, 0, 0}).size(), brute_ilist(2, 0, 0).size());
  EXPECT_EQ(h.interaction_list({2, 0, 0}).size(), 12U);
}

TEST(Hierarchy, InteractionListSymmetricSeparatedAndDisjointFromNearField) {
  const auto h = BoxHierarchy::build(square(32));
  for (int level = 2; level <= h.max_level(); ++level) {
    for (const auto& b : h.level_boxes(level)) {
      const auto& il = h.interaction_list(b.index);
      const auto& nf = h.near_field(b.index);
      for (const auto& o : il) {
        const auto& back = h.interaction_list(o);
        EXPECT_NE(std::find(back.begin(), back.end(), b.index), back.end());
        EXPECT_EQ(std::find(nf.begin(), nf.end(), o), nf.end());
        EXPECT_LT(std::max(b.radius, h.box(o).radius), (b.center - h.box(o).center).norm());
      }
    }
  }
}

TEST(Hierarchy, CoveredPairsPartition) {
  for (int w : {2, 4, 8, 16}) {
    const auto h = BoxHierarchy::build(square(w));
    std::map<std::pair<int, int>, int> mult;
    for (const auto& p : covered_pairs(h)) {
      ++mult[{p.a, p.b}];
    }
    const int n = w * w;
    EXPECT_EQ(mult.size(), static_cast<std::size_t>(n * (n - 1) / 2)) << "w=" << w;
    for (const auto& [pair, m] : mult) {
      EXPECT_EQ(m, 1);
      EXPECT_LT(pair.first, pair.second);
    }
  }
  const auto h2 = BoxHierarchy::build(square(2));
  EXPECT_EQ(h2.finest_near_pairs().size(), 6U);
  EXPECT_EQ(covered_pairs(h2).size(), 6U);
}

TEST(Hierarchy, LevelCutoff) {
  const auto h = BoxHierarchy::build(square(16));
  EXPECT_THROW((void)h.level_cutoff(0.5), ValidationError);

  const auto full = h.level_cutoff(16.0 * std::sqrt(2.0));
  for (int l = 0; l <= h.max_level(); ++l) {
    EXPECT_EQ(full.level_active(l), h.level_active(l));
  }
  EXPECT_EQ(covered_pairs(full).size(), covered_pairs(h).size());

  // Oracle: a level survives iff some interaction pair has center distance <= xi.
  const double xi = 4.0;
  const auto cut = h.level_cutoff(xi);
  for (int l = 2; l <= h.max_level(); ++l) {
    const double side = 16.0 / (1 << l);
    const double min_dist = 2.0 * side;  // closest non-adjacent boxes
    EXPECT_EQ(cut.level_active(l), min_dist <= xi) << "level " << l;
  }
  EXPECT_FALSE(cut.level_active(2));
  EXPECT_TRUE(cut.level_active(3));
  EXPECT_TRUE(cut.level_active(4));

  const auto nearest = h.level_cutoff(1.0);
  EXPECT_EQ(covered_pairs(nearest).size(), h.finest_near_pairs().size());
}

TEST(Hierarchy, DumpIsDeterministic) {
  const auto h = BoxHierarchy::build(square(4));
  std::ostringstream a;
  std::ostringstream b;
  h.dump(a);
  BoxHierarchy::build(square(4)).dump(b);
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string line;
  int boxes = 0;
  while (std::getline(in, line)) {
    boxes += line.rfind("box ", 0) == 0 ? 1 : 0;
  }
  EXPECT_EQ(boxes, 1 + 4 + 16);
}

}  // namespace
}  // namespace q2fmm
