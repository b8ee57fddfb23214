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

#include "q2fmm/multipole.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace q2fmm {

MomentSet::MomentSet(int order, Vec3 center, double radius)
    : order_(order), center_(center), radius_(radius),
      coeffs_(static_cast<std::size_t>(harmonic_table_size(order))) {
  if (order < 0 || order > 10) {
    throw ValidationError("multipole order must lie in [0, 10], got " + std::to_string(order));
  }
}

Complex MomentSet::get(int ell, int m) const {
  if (ell < 0 || ell > order_ || std::abs(m) > ell) {
    return 0.0;
  }
  return harmonic_at(coeffs_, ell, m);
}

double MomentSet::normalization(int ell, int m) const {
  return std::pow(radius_, ell) / harmonic_factorial_norm(ell, m);
}

bool MomentSet::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == 0.0; });
}

MomentSet& MomentSet::operator+=(const MomentSet& o) {
  if (o.order_ != order_) {
    throw ValidationError("cannot add moment sets of different order");
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    coeffs_[k] += o.coeffs_[k];
  }
  return *this;
}

MomentSet moments_about(const LatticeSpec& lattice, std::span<const int> sites,
                        const FockState& state, int order, Vec3 center, double radius) {
  MomentSet out(order, center, radius);
  for (int s : sites) {
    const int q = state.occupation(s);
    if (q == 0) {
      continue;
    }
    const auto r = regular_harmonics(order, lattice.site_position(s) - center);
    for (int l = 0; l <= order; ++l) {
      for (int m = 0; m <= l; ++m) {
        out.at(l, m) += static_cast<double>(q) * r[static_cast<std::size_t>(harmonic_offset(l, m))];
      }
    }
  }
  return out;
}

MomentSet compute_moments(const BoxHierarchy& h, const BoxIndex& box, const FockState& state,
                          int order) {
  const Box& b = h.box(box);
  const auto sites = h.sites(box);
  return moments_about(h.lattice(), sites, state, order, b.center, b.radius);
}

MomentSet translate_m2m(const MomentSet& child, const Vec3& d, double parent_radius) {
  const int p = child.order();
  MomentSet out(p, child.center() + d, parent_radius);
  const auto r = regular_harmonics(p, -d);
  for (int l = 0; l <= p; ++l) {
    for (int m = 0; m <= l; ++m) {
      Complex acc = 0.0;
      for (int j = 0; j <= l; ++j) {
        for (int k = -j; k <= j; ++k) {
          if (std::abs(m - k) > l - j) {
            continue;
          }
          acc += harmonic_at(r, l - j, m - k) * child.get(j, k);
        }
      }
      out.at(l, m) = acc;
    }
  }
  return out;
}

MomentSet aggregate_children(std::span<const MomentSet> children, const BoxHierarchy& h,
                             const BoxIndex& parent) {
  const auto kids = h.children(parent);
  if (children.size() != kids.size() || kids.empty()) {
    throw ValidationError("aggregate_children expects the four children of the parent");
  }
  const Box& pb = h.box(parent);
  MomentSet out(children.front().order(), pb.center, pb.radius);
  for (std::size_t c = 0; c < kids.size(); ++c) {
    if (!(children[c].center() == h.box(kids[c]).center)) {
      throw ValidationError("child moment set is not centered on a child of the parent");
    }
    out += translate_m2m(children[c], pb.center - children[c].center(), pb.radius);
  }
  return out;
}

Complex pair_energy_complex(const MomentSet& a, const MomentSet& b, const Vec3& r_ab, int order) {
  if (order > a.order() || order > b.order()) {
    throw ValidationError("pair_energy order exceeds the moment order");
  }
  if (!(r_ab.norm() > std::max(a.radius(), b.radius()))) {
    throw ValidationError("pair_energy requires well-separated boxes");
  }
  const auto irr = irregular_harmonics(order, r_ab);
  Complex acc = 0.0;
  for (int l = 0; l <= order; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    for (int m = -l; m <= l; ++m) {
      const Complex ma = a.get(l, m);
      if (ma == 0.0) {
        continue;
      }
      Complex inner = 0.0;
      for (int j = 0; j <= order - l; ++j) {
        for (int k = -j; k <= j; ++k) {
          const Complex mb = b.get(j, k);
          if (mb == 0.0) {
            continue;
          }
          inner += std::conj(harmonic_at(irr, l + j, m + k)) * mb;
        }
      }
      acc += sign * ma * inner;
    }
  }
  return acc;
}

double pair_energy(const MomentSet& a, const MomentSet& b, const Vec3& r_ab, int order) {
  const Complex e = pair_energy_complex(a, b, r_ab, order);
  if (std::abs(e.imag()) > 1e-9 * std::max(1.0, std::abs(e))) {
    throw std::logic_error("pair_energy: non-negligible imaginary residue");
  }
  return e.real();
}

std::vector<std::vector<MomentSet>> upward_pass(const BoxHierarchy& h, const FockState& state,
                                                int order) {
  const int lmax = h.max_level();
  std::vector<std::vector<MomentSet>> moments(static_cast<std::size_t>(lmax + 1));
  auto& finest = moments[static_cast<std::size_t>(lmax)];
  for (const auto& b : h.level_boxes(lmax)) {
    MomentSet m(order, b.center, b.radius);
    m.at(0, 0) = static_cast<double>(state.occupation(h.lattice().site_index(b.index.i, b.index.j)));
    finest.push_back(std::move(m));
  }
  for (int level = lmax - 1; level >= h.coarsest_merge_level(); --level) {
    auto& cur = moments[static_cast<std::size_t>(level)];
    const auto& fine = moments[static_cast<std::size_t>(level + 1)];
    for (const auto& b : h.level_boxes(level)) {
      std::vector<MomentSet> kids;
      for (const auto& c : h.children(b.index)) {
        kids.push_back(fine[static_cast<std::size_t>(h.linear_id(c))]);
      }
      cur.push_back(aggregate_children(kids, h, b.index));
    }
  }
  return moments;
}

double fmm_total_energy(const BoxHierarchy& h, const FockState& state, int order) {
  const auto moments = upward_pass(h, state, order);
  double e = 0.0;
  for (int level = h.coarsest_active_level(); level <= h.max_level(); ++level) {
    const auto& lv = moments[static_cast<std::size_t>(level)];
    for (const auto& [a, b] : h.interaction_pairs(level)) {
      const auto& ma = lv[static_cast<std::size_t>(h.linear_id(a))];
      const auto& mb = lv[static_cast<std::size_t>(h.linear_id(b))];
      if (ma.get(0, 0) == 0.0 || mb.get(0, 0) == 0.0) {
        continue;  // an empty box has all moments zero
      }
      e += pair_energy(ma, mb, ma.center() - mb.center(), order);
    }
  }
  const auto& lattice = h.lattice();
  for (const auto& pr : h.finest_near_pairs()) {
    const int qa = state.occupation(pr.a);
    const int qb = state.occupation(pr.b);
    if (qa != 0 && qb != 0) {
      e += qa * qb * coulomb_kernel(lattice.site_position(pr.a), lattice.site_position(pr.b));
    }
  }
  return e;
}

double brute_force_energy(const LatticeSpec& lattice, const FockState& state) {
  std::vector<int> occupied;
  for (int s = 0; s < lattice.num_sites(); ++s) {
    if (state.occupation(s) != 0) {
      occupied.push_back(s);
    }
  }
  double e = 0.0;
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    for (std::size_t j = i + 1; j < occupied.size(); ++j) {
      e += state.occupation(occupied[i]) * state.occupation(occupied[j]) *
           coulomb_kernel(lattice.site_position(occupied[i]), lattice.site_position(occupied[j]));
    }
  }
  return e;
}

FockState random_state(const LatticeSpec& lattice, int electrons, std::uint64_t seed) {
  const int n = lattice.num_modes();
  if (electrons < 0 || electrons > n) {
    throw ValidationError("cannot place " + std::to_string(electrons) + " electrons in " +
                          std::to_string(n) + " modes");
  }
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  // Explicit Fisher-Yates so the sequence does not depend on the library's
  // distribution implementation.
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  std::vector<std::uint8_t> modes(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < electrons; ++k) {
    modes[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] = 1;
  }
  return FockState(lattice, std::move(modes));
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) {
    return 0.0;
  }
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ErrorSweep fmm_error_sweep(const LatticeSpec& lattice, std::span<const std::uint64_t> seeds,
                           std::span<const int> orders) {
  if (seeds.size() < 10) {
    throw ValidationError("fmm_error_sweep needs at least 10 sampled states");
  }
  const auto h = BoxHierarchy::build(lattice);
  ErrorSweep out;
  std::vector<std::vector<double>> errs(orders.size());
  for (auto seed : seeds) {
    const FockState st = random_state(lattice, lattice.num_modes() / 2, seed);
    const double exact = brute_force_energy(lattice, st);
    for (std::size_t k = 0; k < orders.size(); ++k) {
      EnergySample s;
      s.n_sites = lattice.num_sites();
      s.order = orders[k];
      s.state_seed = seed;
      s.e_exact = exact;
      s.e_fmm = fmm_total_energy(h, st, orders[k]);
      s.rel_error = std::abs(s.e_fmm - exact) / (exact != 0.0 ? std::abs(exact) : 1.0);
      errs[k].push_back(s.rel_error);
      out.samples.push_back(s);
    }
  }
  for (std::size_t k = 0; k < orders.size(); ++k) {
    out.rows.push_back({orders[k], median(errs[k]),
                        *std::max_element(errs[k].begin(), errs[k].end())});
  }
  return out;
}

}  // namespace q2fmm
