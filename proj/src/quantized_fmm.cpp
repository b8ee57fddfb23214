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

#include "q2fmm/quantized_fmm.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace q2fmm {

namespace {

int box_electrons(const BoxHierarchy& h, const BoxIndex& b, const FockState& s) {
  int n = 0;
  for (int site : h.sites(b)) {
    n += s.occupation(site);
  }
  return n;
}

void check_state(const BoxHierarchy& h, const FockState& state) {
  const auto& lat = h.lattice();
  if (static_cast<int>(state.modes().size()) != lat.num_modes() || state.spinful() != lat.spinful) {
    throw ValidationError("state does not match the lattice");
  }
  if (state.total() > lat.electron_count_q) {
    throw ValidationError("state holds " + std::to_string(state.total()) +
                          " electrons, more than Q = " + std::to_string(lat.electron_count_q));
  }
}

double direct_energy(const BoxHierarchy& h, const FockState& state) {
  const auto& lat = h.lattice();
  double e = 0.0;
  auto add = [&](int a, int b) {
    const int na = state.occupation(a);
    const int nb = state.occupation(b);
    if (na != 0 && nb != 0) {
      e += static_cast<double>(na * nb) / (lat.site_position(a) - lat.site_position(b)).norm();
    }
  };
  for (const auto& p : h.finest_near_pairs()) {
    add(p.a, p.b);
  }
  if (h.max_level() >= 2) {
    for (const auto& [a, b] : h.interaction_pairs(h.max_level())) {
      add(h.sites(a)[0], h.sites(b)[0]);
    }
  }
  return e;
}

}  // namespace

QuantizedEvaluation quantized_fmm(const BoxHierarchy& h, const SynthesisOptions& opts,
                                  const FockState& state) {
  if (opts.order_p >= 1) {
    return quantized_fmm(h, opts, QuantizationPlan::build(h, opts), state);
  }
  opts.validate();
  check_state(h, state);
  QuantizedEvaluation out;
  out.direct_energy = direct_energy(h, state);
  for (int level = 2; level < h.max_level(); ++level) {
    for (const auto& [a, b] : h.interaction_pairs(level)) {
      const int na = box_electrons(h, a, state);
      const int nb = box_electrons(h, b, state);
      if (na != 0 && nb != 0) {
        out.far_energy += static_cast<double>(na * nb) / (h.box(a).center - h.box(b).center).norm();
      }
    }
  }
  out.phase = -opts.delta_t * out.energy();
  return out;
}

QuantizedEvaluation quantized_fmm(const BoxHierarchy& h, const SynthesisOptions& opts,
                                  const QuantizationPlan& plan, const FockState& state) {
  opts.validate();
  check_state(h, state);
  QuantizedEvaluation out;
  out.direct_energy = direct_energy(h, state);
  const int load = plan.load_level();
  if (load < 0) {
    out.phase = -opts.delta_t * out.energy();
    return out;
  }
  const int nc = plan.num_components();
  const int f = plan.fraction_bits();
  const int fw = plan.weight_fraction_bits();
  const double ulp = std::ldexp(1.0, -f);
  const int lmax = h.max_level();

  // raw[level][box][comp] and per-state error bounds err[level][box][comp].
  std::vector<std::vector<std::vector<std::int64_t>>> raw(static_cast<std::size_t>(lmax + 1));
  std::vector<std::vector<std::vector<double>>> err(static_cast<std::size_t>(lmax + 1));
  std::vector<std::vector<int>> count(static_cast<std::size_t>(lmax + 1));

  for (const auto& box : h.level_boxes(load)) {
    const auto sites = h.sites(box.index);
    std::vector<std::int64_t> r(static_cast<std::size_t>(nc), 0);
    std::vector<double> e(static_cast<std::size_t>(nc), 0.0);
    for (int c = 0; c < nc; ++c) {
      for (std::size_t slot = 0; slot < sites.size(); ++slot) {
        const int n = state.occupation(sites[slot]);
        const std::int64_t v = plan.load_raw(static_cast<int>(slot), c);
        r[static_cast<std::size_t>(c)] += n * v;
        e[static_cast<std::size_t>(c)] +=
            n * std::abs(std::ldexp(static_cast<double>(v), -f) - plan.load_exact(static_cast<int>(slot), c));
      }
    }
    raw[static_cast<std::size_t>(load)].push_back(std::move(r));
    err[static_cast<std::size_t>(load)].push_back(std::move(e));
    count[static_cast<std::size_t>(load)].push_back(box_electrons(h, box.index, state));
  }

  for (int level = load - 1; level >= plan.top_level(); --level) {
    for (const auto& box : h.level_boxes(level)) {
      std::vector<std::int64_t> acc(static_cast<std::size_t>(nc), 0);
      std::vector<double> e(static_cast<std::size_t>(nc), ulp);
      const auto children = h.children(box.index);
      for (std::size_t slot = 0; slot < children.size(); ++slot) {
        const auto cid = static_cast<std::size_t>(h.linear_id(children[slot]));
        const auto& xr = raw[static_cast<std::size_t>(level + 1)][cid];
        const auto& xe = err[static_cast<std::size_t>(level + 1)][cid];
        const double n = count[static_cast<std::size_t>(level + 1)][cid];
        for (const auto& t : plan.m2m_terms(level, static_cast<int>(slot))) {
          const auto in = static_cast<std::size_t>(t.in);
          acc[static_cast<std::size_t>(t.out)] += t.raw * xr[in];
          e[static_cast<std::size_t>(t.out)] +=
              std::abs(t.exact) * xe[in] +
              std::abs(std::ldexp(static_cast<double>(t.raw), -fw) - t.exact) * (n + xe[in]);
        }
      }
      for (auto& a : acc) {
        a >>= fw;  // arithmetic shift: floor division by 2^fw
      }
      raw[static_cast<std::size_t>(level)].push_back(std::move(acc));
      err[static_cast<std::size_t>(level)].push_back(std::move(e));
      count[static_cast<std::size_t>(level)].push_back(box_electrons(h, box.index, state));
    }
  }

  for (int level = std::max(2, plan.top_level()); level <= load; ++level) {
    if (!h.level_active(level)) {
      continue;
    }
    const int frac = 2 * f + plan.pair_fraction_bits(level);
    for (const auto& [a, b] : h.interaction_pairs(level)) {
      const auto ia = static_cast<std::size_t>(h.linear_id(a));
      const auto ib = static_cast<std::size_t>(h.linear_id(b));
      const auto& xa = raw[static_cast<std::size_t>(level)][ia];
      const auto& xb = raw[static_cast<std::size_t>(level)][ib];
      const auto& ea = err[static_cast<std::size_t>(level)][ia];
      const auto& eb = err[static_cast<std::size_t>(level)][ib];
      const double na = count[static_cast<std::size_t>(level)][ia];
      const double nb = count[static_cast<std::size_t>(level)][ib];
      std::int64_t e_raw = 0;
      double bound = 0.0;
      for (const auto& t : plan.pair_terms(level, a.i - b.i, a.j - b.j)) {
        const auto x = static_cast<std::size_t>(t.out);
        const auto y = static_cast<std::size_t>(t.in);
        e_raw += t.raw * xa[x] * xb[y];
        const double g_err = std::abs(std::ldexp(static_cast<double>(t.raw), -(frac - 2 * f)) - t.exact);
        bound += std::abs(t.exact) * (na * eb[y] + nb * ea[x] + ea[x] * eb[y]) +
                 g_err * (na + ea[x]) * (nb + eb[y]);
      }
      out.far_energy += std::ldexp(static_cast<double>(e_raw), -frac);
      out.error_bound += bound;
    }
  }
  out.phase = -opts.delta_t * out.energy();
  return out;
}

}  // namespace q2fmm
