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

#include "q2fmm/quantization.hpp"

#include "q2fmm/multipole.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace q2fmm {

void SynthesisOptions::validate() const {
  if (order_p < 0 || order_p > 10) {
    throw ValidationError("order_p must be in [0, 10], got " + std::to_string(order_p));
  }
  if (!(eps_b > 0.0 && eps_b <= 1.0)) {
    throw ValidationError("eps_b must be in (0, 1]");
  }
  if (!std::isfinite(delta_t) || delta_t <= 0.0) {
    throw ValidationError("delta_t must be positive and finite");
  }
  if (trotter_order != 1 && trotter_order != 2) {
    throw ValidationError("trotter_order must be 1 or 2");
  }
  if (guard_bits < 0 || guard_bits > 16) {
    throw ValidationError("guard_bits must be in [0, 16]");
  }
}

std::vector<MomentComponent> planar_components(int order) {
  std::vector<MomentComponent> out;
  for (int l = 0; l <= order; ++l) {
    for (int m = l % 2; m <= l; m += 2) {
      out.push_back({l, m, false});
      if (m > 0) {
        out.push_back({l, m, true});
      }
    }
  }
  return out;
}

namespace {

double component_value(const MomentSet& s, const MomentComponent& c) {
  const Complex v = s.normalized(c.ell, c.m);
  return c.imag ? v.imag() : v.real();
}

MomentSet unit_moment(int order, const Box& box, const MomentComponent& c) {
  MomentSet s(order, box.center, box.radius);
  const double n = s.normalization(c.ell, c.m);
  s.at(c.ell, c.m) = c.imag ? Complex(0.0, n) : Complex(n, 0.0);
  return s;
}

std::string component_name(const MomentComponent& c) {
  return "l" + std::to_string(c.ell) + "m" + std::to_string(c.m) + (c.imag ? "im" : "re");
}

// Bits of a two's-complement register holding |v| <= bound.
int signed_bits_for(double bound) {
  return static_cast<int>(std::ceil(std::log2(bound + 1.0))) + 1;
}

}  // namespace

QuantizationPlan QuantizationPlan::build(const BoxHierarchy& h, const SynthesisOptions& opts) {
  opts.validate();
  if (opts.order_p < 1) {
    throw ValidationError("quantization plan needs order_p >= 1");
  }
  const LatticeSpec& lat = h.lattice();
  const int lmax = h.max_level();
  QuantizationPlan plan;
  plan.order_ = opts.order_p;
  plan.f_ = register_width_for(1, opts.eps_b).fraction_bits;
  plan.f_w_ = plan.f_ + opts.guard_bits;
  plan.comps_ = planar_components(opts.order_p);
  plan.top_level_ = h.coarsest_merge_level();
  plan.load_level_ = (lmax - 1 >= plan.top_level_) ? lmax - 1 : -1;
  plan.formats_.assign(static_cast<std::size_t>(lmax + 1), FixedPointFormat{});
  plan.capacity_.assign(static_cast<std::size_t>(lmax + 1), 0);
  plan.m2m_.resize(static_cast<std::size_t>(lmax + 1));
  plan.m2m_acc_.assign(static_cast<std::size_t>(lmax + 1), FixedPointFormat{});
  plan.pair_frac_.assign(static_cast<std::size_t>(lmax + 1), 0);
  if (plan.load_level_ < 0) {
    return plan;
  }

  const int f = plan.f_;
  const double ulp = std::ldexp(1.0, -f);
  const int nc = plan.num_components();
  for (int level = plan.top_level_; level <= plan.load_level_; ++level) {
    const int side = h.box({level, 0, 0}).side;
    const int count = side * side * lat.modes_per_site();
    const int cap = std::min(count, lat.electron_count_q);
    const RegisterWidth rw = register_width_for(cap, opts.eps_b);
    plan.formats_[static_cast<std::size_t>(level)] = {rw.integer_bits, rw.fraction_bits, true};
    plan.capacity_[static_cast<std::size_t>(level)] = cap;
  }

  auto check_headroom = [&](int level, const std::vector<double>& err) {
    const auto& fmt = plan.formats_[static_cast<std::size_t>(level)];
    const double top = fmt.to_double(fmt.max_raw());
    const double cap = plan.capacity_[static_cast<std::size_t>(level)];
    for (int c = 0; c < nc; ++c) {
      if (cap + err[static_cast<std::size_t>(c)] > top) {
        throw ValidationError("register overflow: moment register mom_L" + std::to_string(level) +
                              "_" + component_name(plan.comps_[static_cast<std::size_t>(c)]) +
                              " cannot hold occupancy " + std::to_string(static_cast<int>(cap)) +
                              " plus rounding error; lower eps_b or Q");
      }
    }
  };

  // Site loads: every load-level box has the same site offsets.
  LatticeSpec spinless = lat;
  spinless.spinful = false;
  const Box& load_box = h.box({plan.load_level_, 0, 0});
  std::vector<double> err(static_cast<std::size_t>(nc), 0.0);
  for (int site : h.sites(load_box.index)) {
    std::vector<int> occ(static_cast<std::size_t>(lat.num_sites()), 0);
    occ[static_cast<std::size_t>(site)] = 1;
    const FockState one = FockState::from_site_occupations(spinless, occ);
    const int sites[] = {site};
    const MomentSet ms =
        moments_about(spinless, sites, one, plan.order_, load_box.center, load_box.radius);
    std::vector<std::int64_t> raw;
    std::vector<double> exact;
    for (int c = 0; c < nc; ++c) {
      const double v = component_value(ms, plan.comps_[static_cast<std::size_t>(c)]);
      raw.push_back(round_to_int(std::ldexp(v, f), opts.rounding));
      exact.push_back(v);
      err[static_cast<std::size_t>(c)] =
          std::max(err[static_cast<std::size_t>(c)], std::abs(std::ldexp(static_cast<double>(raw.back()), -f) - v));
    }
    plan.load_raw_.push_back(std::move(raw));
    plan.load_exact_.push_back(std::move(exact));
  }
  for (auto& e : err) {
    e *= plan.capacity_[static_cast<std::size_t>(plan.load_level_)];
  }
  check_headroom(plan.load_level_, err);

  // Translations, finest to coarsest, carrying a state-independent error bound.
  for (int level = plan.load_level_ - 1; level >= plan.top_level_; --level) {
    const Box& parent = h.box({level, 0, 0});
    const auto& cfmt = plan.formats_[static_cast<std::size_t>(level + 1)];
    const double child_cap = plan.capacity_[static_cast<std::size_t>(level + 1)];
    const double child_max_raw = std::ldexp(1.0, cfmt.integer_bits + cfmt.fraction_bits);
    std::vector<double> perr(static_cast<std::size_t>(nc), ulp);
    std::vector<double> acc_bound(static_cast<std::size_t>(nc), 0.0);
    auto& slots = plan.m2m_[static_cast<std::size_t>(level)];
    for (const auto& child_idx : h.children(parent.index)) {
      const Box& child = h.box(child_idx);
      const Vec3 d = parent.center - child.center;
      std::vector<QuantizedTerm> terms;
      for (int j = 0; j < nc; ++j) {
        const MomentSet moved = translate_m2m(
            unit_moment(plan.order_, child, plan.comps_[static_cast<std::size_t>(j)]), d,
            parent.radius);
        for (int c = 0; c < nc; ++c) {
          const double w = component_value(moved, plan.comps_[static_cast<std::size_t>(c)]);
          if (std::abs(w) < 1e-14) {
            continue;
          }
          const std::int64_t raw = round_to_int(std::ldexp(w, plan.f_w_), opts.rounding);
          terms.push_back({c, j, raw, w});
          const double ej = err[static_cast<std::size_t>(j)];
          perr[static_cast<std::size_t>(c)] +=
              std::abs(w) * ej +
              std::abs(std::ldexp(static_cast<double>(raw), -plan.f_w_) - w) * (child_cap + ej);
          acc_bound[static_cast<std::size_t>(c)] +=
              static_cast<double>(std::llabs(raw)) * child_max_raw;
        }
      }
      slots.push_back(std::move(terms));
    }
    const auto& pfmt = plan.formats_[static_cast<std::size_t>(level)];
    const double bound = *std::max_element(acc_bound.begin(), acc_bound.end());
    const int total = std::max(signed_bits_for(bound), plan.f_w_ + pfmt.width());
    const int frac = f + plan.f_w_;
    if (total > 62) {
      throw ValidationError("translation accumulator at level " + std::to_string(level) +
                            " needs " + std::to_string(total) + " bits (limit 62)");
    }
    plan.m2m_acc_[static_cast<std::size_t>(level)] = {total - 1 - frac, frac, true};
    err = perr;
    check_headroom(level, err);
  }

  // Interaction forms per level and box offset.
  for (int level = std::max(2, plan.top_level_); level <= plan.load_level_; ++level) {
    if (!h.level_active(level)) {
      continue;
    }
    std::map<std::pair<int, int>, std::vector<std::pair<std::pair<int, int>, double>>> exact;
    double gmax = 0.0;
    for (const auto& [a, b] : h.interaction_pairs(level)) {
      const std::pair<int, int> key{a.i - b.i, a.j - b.j};
      if (exact.count(key) != 0) {
        continue;
      }
      const Box& ba = h.box(a);
      const Box& bb = h.box(b);
      auto& list = exact[key];
      for (int x = 0; x < nc; ++x) {
        const MomentSet ua = unit_moment(plan.order_, ba, plan.comps_[static_cast<std::size_t>(x)]);
        for (int y = 0; y < nc; ++y) {
          const MomentSet ub =
              unit_moment(plan.order_, bb, plan.comps_[static_cast<std::size_t>(y)]);
          const double g = pair_energy_complex(ua, ub, ba.center - bb.center, plan.order_).real();
          if (std::abs(g) < 1e-14) {
            continue;
          }
          list.push_back({{x, y}, g});
          gmax = std::max(gmax, std::abs(g));
        }
      }
    }
    if (exact.empty()) {
      continue;
    }
    const int fg = f + opts.guard_bits +
                   std::max(0, static_cast<int>(std::ceil(-std::log2(gmax))));
    plan.pair_frac_[static_cast<std::size_t>(level)] = fg;
    const auto& fmt = plan.formats_[static_cast<std::size_t>(level)];
    const double max_raw = std::ldexp(1.0, fmt.integer_bits + fmt.fraction_bits);
    for (const auto& [key, list] : exact) {
      PairForm form;
      double bound = 0.0;
      for (const auto& [xy, g] : list) {
        const std::int64_t raw = round_to_int(std::ldexp(g, fg), opts.rounding);
        form.terms.push_back({xy.first, xy.second, raw, g});
        bound += static_cast<double>(std::llabs(raw)) * max_raw * max_raw;
      }
      const int frac = 2 * f + fg;
      const int total = signed_bits_for(bound);
      if (total > 62) {
        throw ValidationError("energy register at level " + std::to_string(level) + " needs " +
                              std::to_string(total) + " bits (limit 62)");
      }
      form.acc = {std::max(0, total - 1 - frac), frac, true};
      plan.pairs_[{level, key.first, key.second}] = std::move(form);
    }
  }
  return plan;
}

FixedPointFormat QuantizationPlan::moment_format(int level) const {
  if (!has_moments(level)) {
    throw ValidationError("no moment registers on level " + std::to_string(level));
  }
  return formats_[static_cast<std::size_t>(level)];
}

int QuantizationPlan::capacity(int level) const {
  if (!has_moments(level)) {
    throw ValidationError("no moment registers on level " + std::to_string(level));
  }
  return capacity_[static_cast<std::size_t>(level)];
}

std::int64_t QuantizationPlan::load_raw(int slot, int comp) const {
  return load_raw_.at(static_cast<std::size_t>(slot)).at(static_cast<std::size_t>(comp));
}

double QuantizationPlan::load_exact(int slot, int comp) const {
  return load_exact_.at(static_cast<std::size_t>(slot)).at(static_cast<std::size_t>(comp));
}

const std::vector<QuantizedTerm>& QuantizationPlan::m2m_terms(int parent_level, int slot) const {
  if (!has_moments(parent_level) || parent_level >= load_level_) {
    throw ValidationError("no translation into level " + std::to_string(parent_level));
  }
  return m2m_[static_cast<std::size_t>(parent_level)].at(static_cast<std::size_t>(slot));
}

FixedPointFormat QuantizationPlan::m2m_acc_format(int parent_level) const {
  if (!has_moments(parent_level) || parent_level >= load_level_) {
    throw ValidationError("no translation into level " + std::to_string(parent_level));
  }
  return m2m_acc_[static_cast<std::size_t>(parent_level)];
}

const std::vector<QuantizedTerm>& QuantizationPlan::pair_terms(int level, int dx, int dy) const {
  const auto it = pairs_.find({level, dx, dy});
  if (it == pairs_.end()) {
    throw ValidationError("no interaction form for level " + std::to_string(level) +
                          " offset (" + std::to_string(dx) + "," + std::to_string(dy) + ")");
  }
  return it->second.terms;
}

int QuantizationPlan::pair_fraction_bits(int level) const {
  return pair_frac_.at(static_cast<std::size_t>(level));
}

FixedPointFormat QuantizationPlan::energy_format(int level, int dx, int dy) const {
  const auto it = pairs_.find({level, dx, dy});
  if (it == pairs_.end()) {
    throw ValidationError("no interaction form for level " + std::to_string(level));
  }
  return it->second.acc;
}

}  // namespace q2fmm
