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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace q2fmm {

namespace {

const std::vector<BoxIndex> kEmpty;

bool adjacent(const BoxIndex& a, const BoxIndex& b) {
  return a.level == b.level && std::abs(a.i - b.i) <= 1 && std::abs(a.j - b.j) <= 1 && a != b;
}

}  // namespace

BoxHierarchy BoxHierarchy::build(const LatticeSpec& lattice) {
  lattice.validate_for_hierarchy();
  BoxHierarchy h;
  h.lattice_ = lattice;
  h.max_level_ = exact_log2(lattice.width);
  const int levels = h.max_level_ + 1;
  h.levels_.resize(static_cast<std::size_t>(levels));
  h.near_.resize(static_cast<std::size_t>(levels));
  h.ilist_.resize(static_cast<std::size_t>(levels));
  h.active_.assign(static_cast<std::size_t>(levels), false);

  for (int level = 0; level < levels; ++level) {
    const int n = h.boxes_per_side(level);
    const int side = lattice.width / n;
    auto& boxes = h.levels_[static_cast<std::size_t>(level)];
    boxes.reserve(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        Box b;
        b.index = {level, i, j};
        b.side = side;
        b.center = {i * side + 0.5 * (side - 1), j * side + 0.5 * (side - 1), 0.0};
        b.radius = side * std::sqrt(2.0) / 2.0;
        boxes.push_back(b);
      }
    }

    auto& near = h.near_[static_cast<std::size_t>(level)];
    near.resize(boxes.size());
    for (const auto& b : boxes) {
      auto& list = near[static_cast<std::size_t>(h.linear_id(b.index))];
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const BoxIndex o{level, b.index.i + di, b.index.j + dj};
          if ((di != 0 || dj != 0) && h.contains(o)) {
            list.push_back(o);
          }
        }
      }
    }

    auto& ilist = h.ilist_[static_cast<std::size_t>(level)];
    ilist.resize(boxes.size());
    if (level >= 2) {
      h.active_[static_cast<std::size_t>(level)] = true;
      for (const auto& b : boxes) {
        auto& list = ilist[static_cast<std::size_t>(h.linear_id(b.index))];
        const BoxIndex p = h.parent(b.index);
        // Children of the parent's neighbors (siblings are always adjacent).
        for (const auto& pn : h.near_[static_cast<std::size_t>(level - 1)]
                                    [static_cast<std::size_t>(h.linear_id(p))]) {
          for (const auto& c : h.children(pn)) {
            if (!adjacent(c, b.index)) {
              list.push_back(c);
            }
          }
        }
        std::sort(list.begin(), list.end(), [&h](const BoxIndex& x, const BoxIndex& y) {
          return h.linear_id(x) < h.linear_id(y);
        });
      }
    }
  }
  return h;
}

BoxIndex BoxHierarchy::from_linear(int level, int id) const {
  const int n = boxes_per_side(level);
  return {level, id % n, id / n};
}

bool BoxHierarchy::contains(const BoxIndex& b) const {
  if (b.level < 0 || b.level > max_level_) {
    return false;
  }
  const int n = boxes_per_side(b.level);
  return b.i >= 0 && b.j >= 0 && b.i < n && b.j < n;
}

const Box& BoxHierarchy::box(const BoxIndex& b) const {
  if (!contains(b)) {
    throw ValidationError("box index out of range");
  }
  return levels_[static_cast<std::size_t>(b.level)][static_cast<std::size_t>(linear_id(b))];
}

const std::vector<Box>& BoxHierarchy::level_boxes(int level) const {
  return levels_.at(static_cast<std::size_t>(level));
}

BoxIndex BoxHierarchy::parent(const BoxIndex& b) const {
  if (b.level == 0) {
    throw ValidationError("the root box has no parent");
  }
  return {b.level - 1, b.i / 2, b.j / 2};
}

std::vector<BoxIndex> BoxHierarchy::children(const BoxIndex& b) const {
  if (b.level >= max_level_) {
    return {};
  }
  return {{b.level + 1, 2 * b.i, 2 * b.j},
          {b.level + 1, 2 * b.i + 1, 2 * b.j},
          {b.level + 1, 2 * b.i, 2 * b.j + 1},
          {b.level + 1, 2 * b.i + 1, 2 * b.j + 1}};
}

std::vector<int> BoxHierarchy::sites(const BoxIndex& b) const {
  const Box& bx = box(b);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(bx.side * bx.side));
  for (int y = b.j * bx.side; y < (b.j + 1) * bx.side; ++y) {
    for (int x = b.i * bx.side; x < (b.i + 1) * bx.side; ++x) {
      out.push_back(lattice_.site_index(x, y));
    }
  }
  return out;
}

const std::vector<BoxIndex>& BoxHierarchy::near_field(const BoxIndex& b) const {
  if (!contains(b)) {
    throw ValidationError("box index out of range");
  }
  return near_[static_cast<std::size_t>(b.level)][static_cast<std::size_t>(linear_id(b))];
}

const std::vector<BoxIndex>& BoxHierarchy::interaction_list(const BoxIndex& b) const {
  if (!contains(b)) {
    throw ValidationError("box index out of range");
  }
  if (!level_active(b.level)) {
    return kEmpty;
  }
  return ilist_[static_cast<std::size_t>(b.level)][static_cast<std::size_t>(linear_id(b))];
}

bool BoxHierarchy::level_active(int level) const {
  return level >= 0 && level <= max_level_ && active_[static_cast<std::size_t>(level)];
}

int BoxHierarchy::coarsest_active_level() const {
  for (int l = 0; l <= max_level_; ++l) {
    if (level_active(l)) {
      return l;
    }
  }
  return max_level_ + 1;
}

int BoxHierarchy::coarsest_merge_level() const {
  return std::min(max_level_, std::max(1, coarsest_active_level() - 1));
}

std::vector<std::pair<BoxIndex, BoxIndex>> BoxHierarchy::interaction_pairs(int level) const {
  std::vector<std::pair<BoxIndex, BoxIndex>> out;
  if (!level_active(level)) {
    return out;
  }
  for (const auto& b : level_boxes(level)) {
    for (const auto& o : interaction_list(b.index)) {
      if (linear_id(b.index) < linear_id(o)) {
        out.emplace_back(b.index, o);
      }
    }
  }
  return out;
}

std::vector<SitePair> BoxHierarchy::finest_near_pairs() const {
  std::vector<SitePair> out;
  for (const auto& b : level_boxes(max_level_)) {
    for (const auto& o : near_field(b.index)) {
      const int a = lattice_.site_index(b.index.i, b.index.j);
      const int c = lattice_.site_index(o.i, o.j);
      if (a < c) {
        out.push_back({a, c});
      }
    }
  }
  return out;
}

BoxHierarchy BoxHierarchy::level_cutoff(double xi) const {
  if (!(xi >= 1.0)) {
    throw ValidationError("cutoff xi must be at least the nearest-neighbor spacing 1");
  }
  BoxHierarchy out = *this;
  out.truncated_ = true;
  for (int level = 0; level <= max_level_; ++level) {
    if (!level_active(level)) {
      continue;
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : interaction_pairs(level)) {
      min_dist = std::min(min_dist, (box(a).center - box(b).center).norm());
    }
    if (min_dist > xi) {
      out.active_[static_cast<std::size_t>(level)] = false;
    }
  }
  return out;
}

void BoxHierarchy::dump(std::ostream& os) const {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "# q2fmm hierarchy v1\n";
  buf << "lattice " << lattice_.width << ' ' << lattice_.height << ' '
      << (lattice_.spinful ? "spinful" : "spinless") << '\n';
  buf << "max_level " << max_level_ << '\n';
  buf << "active_levels";
  for (int l = 0; l <= max_level_; ++l) {
    if (level_active(l)) {
      buf << ' ' << l;
    }
  }
  buf << '\n';
  for (int level = 0; level <= max_level_; ++level) {
    for (const auto& b : level_boxes(level)) {
      buf << "box " << level << ' ' << b.index.i << ' ' << b.index.j << " id " << linear_id(b.index)
          << " center " << b.center.x << ' ' << b.center.y << ' ' << b.center.z << " radius "
          << b.radius << " near";
      for (const auto& n : near_field(b.index)) {
        buf << ' ' << linear_id(n);
      }
      buf << " ilist";
      for (const auto& n : interaction_list(b.index)) {
        buf << ' ' << linear_id(n);
      }
      buf << '\n';
    }
  }
  os << buf.str();
}

std::vector<SitePair> covered_pairs(const BoxHierarchy& h) {
  std::vector<SitePair> out;
  for (int level = 2; level <= h.max_level(); ++level) {
    for (const auto& [a, b] : h.interaction_pairs(level)) {
      const auto sa = h.sites(a);
      const auto sb = h.sites(b);
      for (int x : sa) {
        for (int y : sb) {
          out.push_back({std::min(x, y), std::max(x, y)});
        }
      }
    }
  }
  const auto near = h.finest_near_pairs();
  out.insert(out.end(), near.begin(), near.end());
  return out;
}

}  // namespace q2fmm
