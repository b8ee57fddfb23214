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

#include "q2fmm/synthesizer.hpp"

#include "q2fmm/arithmetic.hpp"
#include "q2fmm/multipole.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <string>

namespace q2fmm {

namespace {

double pair_time(const BoxHierarchy& h, const BoxIndex& a, const BoxIndex& b, double dt) {
  return dt / (h.box(a).center - h.box(b).center).norm();
}

// Greedy proper edge colouring; returns edge indices grouped by colour so
// that each group acts on disjoint vertices.
std::vector<std::size_t> colour_order(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::uint32_t nv = 0;
  for (const auto& [u, v] : edges) {
    nv = std::max({nv, u + 1, v + 1});
  }
  std::vector<std::vector<bool>> used(nv);
  std::vector<int> colour(edges.size(), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto& cu = used[edges[e].first];
    auto& cv = used[edges[e].second];
    int k = 0;
    while ((k < static_cast<int>(cu.size()) && cu[static_cast<std::size_t>(k)]) ||
           (k < static_cast<int>(cv.size()) && cv[static_cast<std::size_t>(k)])) {
      ++k;
    }
    for (auto* cs : {&cu, &cv}) {
      if (static_cast<int>(cs->size()) <= k) {
        cs->resize(static_cast<std::size_t>(k) + 1, false);
      }
      (*cs)[static_cast<std::size_t>(k)] = true;
    }
    colour[e] = k;
  }
  std::vector<std::size_t> order(edges.size());
  for (std::size_t e = 0; e < order.size(); ++e) {
    order[e] = e;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return colour[x] < colour[y]; });
  return order;
}

void check_options(const BoxHierarchy& h, const SynthesisOptions& opts) {
  opts.validate();
  if (opts.spinful != h.lattice().spinful) {
    throw ValidationError("synthesis option 'spinful' does not match the lattice");
  }
}

std::string box_tag(int level, int id) {
  return "L" + std::to_string(level) + "_b" + std::to_string(id);
}

std::vector<Qubit> qubits_of(const Circuit& c, const std::vector<std::size_t>& regs) {
  std::vector<Qubit> out;
  for (auto r : regs) {
    const auto& q = c.reg(r).qubits;
    out.insert(out.end(), q.begin(), q.end());
  }
  return out;
}

class Builder {
public:
  Builder(const BoxHierarchy& h, const SynthesisOptions& opts) : h_(h), opts_(opts) {
    const auto& lat = h.lattice();
    mps_ = lat.modes_per_site();
    const auto id = c_.add_register("system", RegisterRole::System, {lat.num_modes(), 0, false},
                                    h.max_level());
    sys_ = c_.reg(id).qubits;
  }

  Circuit take() { return std::move(c_); }

  void direct() {
    const int lmax = h_.max_level();
    const auto times = effective_times(h_, opts_.delta_t).direct;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<double> angle;
    for (const auto& d : times) {
      for (int su = 0; su < mps_; ++su) {
        for (int sv = 0; sv < mps_; ++sv) {
          edges.push_back({sys_[static_cast<std::size_t>(d.a * mps_ + su)],
                           sys_[static_cast<std::size_t>(d.b * mps_ + sv)]});
          angle.push_back(-d.value);
        }
      }
    }
    const auto blk = c_.begin_block(BlockKind::Direct, 0, lmax);
    for (std::size_t e : colour_order(edges)) {
      const std::size_t g = c_.size();
      c_.cphase(edges[e].first, edges[e].second, angle[e]);
      c_.add_route_hint(g, {edges[e].second}, edges[e].first, lmax);
    }
    c_.end_block(blk);
  }

  // Box sums for every level from max_level - 1 up to the coarsest merge
  // level, each followed by that level's Evo gates; then inverse merges.
  void zeroth() {
    const int lmax = h_.max_level();
    const int top = h_.coarsest_merge_level();
    const int q = h_.lattice().electron_count_q;
    regs_.assign(static_cast<std::size_t>(lmax + 1), {});
    std::vector<std::pair<std::size_t, std::size_t>> ranges(static_cast<std::size_t>(lmax + 1));
    for (int level = lmax - 1; level >= top; --level) {
      auto& regs = regs_[static_cast<std::size_t>(level)];
      const std::size_t begin = c_.size();
      const auto blk = c_.begin_block(BlockKind::Merge, 0, level);
      for (const auto& box : h_.level_boxes(level)) {
        const int id = h_.linear_id(box.index);
        std::vector<Operand> items;
        std::vector<std::size_t> child_regs;
        int child_width = 0;
        if (level == lmax - 1) {
          for (int site : h_.sites(box.index)) {
            for (int s = 0; s < mps_; ++s) {
              items.push_back({{sys_[static_cast<std::size_t>(site * mps_ + s)]}, false});
            }
          }
          child_width = 1;
        } else {
          for (const auto& ch : h_.children(box.index)) {
            const auto r = regs_[static_cast<std::size_t>(level + 1)]
                                [static_cast<std::size_t>(h_.linear_id(ch))];
            child_regs.push_back(r);
            items.push_back(Operand::of(c_.reg(r)));
            child_width = std::max(child_width, static_cast<int>(c_.reg(r).qubits.size()));
          }
        }
        const int count = box.side * box.side * mps_;
        const int width = std::max(bits_for_magnitude(static_cast<std::uint64_t>(std::min(count, q))),
                                   child_width + 1);
        const auto out = c_.add_register("sum_" + box_tag(level, id), RegisterRole::BoxSum,
                                         {width, 0, false}, level, id);
        const auto carries = alloc_scratch(c_, width - 1, "merge_carry", level);
        const std::vector<Qubit> target = c_.reg(out).qubits;
        const std::size_t g0 = c_.size();
        const auto add = c_.begin_block(BlockKind::Adder, width, level);
        for (std::size_t b = 0; b < items[0].bits.size(); ++b) {
          c_.cnot(items[0].bits[b], target[b]);
        }
        for (std::size_t k = 1; k < items.size(); ++k) {
          add_in_place(c_, items[k], target, carries);
        }
        c_.end_block(add);
        for (auto r : child_regs) {
          c_.add_route_hint(g0, c_.reg(r).qubits, target[0], level);
        }
        regs.push_back(out);
      }
      c_.end_block(blk);
      ranges[static_cast<std::size_t>(level)] = {begin, c_.size()};
      evo_level(level);
    }
    uncompute(ranges, top, lmax - 1);
  }

  void higher() {
    const int lmax = h_.max_level();
    plan_ = QuantizationPlan::build(h_, opts_);
    const int load = plan_.load_level();
    if (load < 0) {
      return;
    }
    const int top = plan_.top_level();
    const int nc = plan_.num_components();
    moms_.assign(static_cast<std::size_t>(lmax + 1), {});
    std::vector<std::pair<std::size_t, std::size_t>> ranges(static_cast<std::size_t>(lmax + 1));
    for (int level = load; level >= top; --level) {
      const auto fmt = plan_.moment_format(level);
      auto& moms = moms_[static_cast<std::size_t>(level)];
      const std::size_t begin = c_.size();
      const auto blk = c_.begin_block(level == load ? BlockKind::Load : BlockKind::M2M, 0, level);
      for (const auto& box : h_.level_boxes(level)) {
        const int id = h_.linear_id(box.index);
        std::vector<std::size_t> regs;
        for (const auto& comp : plan_.components()) {
          regs.push_back(c_.add_register(
              "mom_" + box_tag(level, id) + "_l" + std::to_string(comp.ell) + "m" +
                  std::to_string(comp.m) + (comp.imag ? "im" : "re"),
              comp.imag ? RegisterRole::MomentImag : RegisterRole::MomentReal, fmt, level, id));
        }
        if (level == load) {
          load_box(box, regs);
        } else {
          translate_box(box, regs, nc);
        }
        moms.push_back(std::move(regs));
      }
      c_.end_block(blk);
      ranges[static_cast<std::size_t>(level)] = {begin, c_.size()};
      pair_level(level);
    }
    uncompute(ranges, top, load);
  }

private:
  void uncompute(const std::vector<std::pair<std::size_t, std::size_t>>& ranges, int top, int finest) {
    for (int level = top; level <= finest; ++level) {
      const auto [b, e] = ranges[static_cast<std::size_t>(level)];
      const auto blk = c_.begin_block(BlockKind::Uncompute, 0, level);
      c_.append_inverse(b, e);
      c_.end_block(blk);
    }
  }

  // Per box, `copies` registers per data register (or the originals).
  struct Copies {
    std::vector<std::vector<std::vector<std::size_t>>> sets;  // [box][copy] -> regs
    std::vector<std::size_t> next;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  Copies make_copies(int level, const std::vector<std::pair<BoxIndex, BoxIndex>>& pairs,
                     const std::vector<std::vector<std::size_t>>& data) {
    Copies cp;
    const std::size_t nb = data.size();
    cp.sets.resize(nb);
    cp.next.assign(nb, 0);
    std::vector<int> partners(nb, 0);
    for (const auto& [a, b] : pairs) {
      ++partners[static_cast<std::size_t>(h_.linear_id(a))];
      ++partners[static_cast<std::size_t>(h_.linear_id(b))];
    }
    cp.begin = c_.size();
    for (std::size_t id = 0; id < nb; ++id) {
      if (!opts_.use_copy) {
        cp.sets[id].push_back(data[id]);
        continue;
      }
      std::vector<std::vector<std::size_t>> per_copy(static_cast<std::size_t>(partners[id]));
      for (auto src : data[id]) {
        std::vector<std::size_t> dests;
        for (int k = 0; k < partners[id]; ++k) {
          const auto& r = c_.reg(src);
          const auto d = c_.add_register(r.name + "_copy" + std::to_string(k), RegisterRole::Copy,
                                         r.format, level, static_cast<int>(id));
          dests.push_back(d);
          per_copy[static_cast<std::size_t>(k)].push_back(d);
        }
        build_copy(c_, src, dests, opts_.use_fanout, level);
      }
      cp.sets[id] = std::move(per_copy);
    }
    cp.end = c_.size();
    return cp;
  }

  const std::vector<std::size_t>& take_copy(Copies& cp, const BoxIndex& b) {
    const auto id = static_cast<std::size_t>(h_.linear_id(b));
    if (!opts_.use_copy) {
      return cp.sets[id][0];
    }
    return cp.sets[id][cp.next[id]++];
  }

  std::vector<std::pair<BoxIndex, BoxIndex>> coloured_pairs(int level) {
    auto pairs = h_.interaction_pairs(level);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& [a, b] : pairs) {
      edges.push_back({static_cast<std::uint32_t>(h_.linear_id(a)),
                       static_cast<std::uint32_t>(h_.linear_id(b))});
    }
    std::vector<std::pair<BoxIndex, BoxIndex>> out;
    for (std::size_t e : colour_order(edges)) {
      out.push_back(pairs[e]);
    }
    return out;
  }

  void evo_level(int level) {
    if (level < 2 || !h_.level_active(level)) {
      return;
    }
    const auto pairs = coloured_pairs(level);
    if (pairs.empty()) {
      return;
    }
    std::vector<std::vector<std::size_t>> data;
    for (auto r : regs_[static_cast<std::size_t>(level)]) {
      data.push_back({r});
    }
    Copies cp = make_copies(level, pairs, data);
    for (const auto& [a, b] : pairs) {
      const auto ra = take_copy(cp, a)[0];
      const auto rb = take_copy(cp, b)[0];
      const std::size_t g0 = c_.size();
      synth_evo_gate(c_, ra, rb, pair_time(h_, a, b, opts_.delta_t), level);
      c_.add_route_hint(g0, c_.reg(rb).qubits, c_.reg(ra).qubits[0], level);
    }
    if (opts_.use_copy) {
      c_.append_inverse(cp.begin, cp.end);
    }
  }

  void load_box(const Box& box, const std::vector<std::size_t>& regs) {
    const int level = box.index.level;
    const auto fmt = plan_.moment_format(level);
    const auto temp = c_.add_register("load_temp", RegisterRole::Scratch, fmt, level);
    const auto carries = alloc_scratch(c_, fmt.width() - 1, "load_carry", level);
    const auto sites = h_.sites(box.index);
    for (std::size_t comp = 0; comp < regs.size(); ++comp) {
      bool first = true;
      for (std::size_t slot = 0; slot < sites.size(); ++slot) {
        const std::int64_t raw = plan_.load_raw(static_cast<int>(slot), static_cast<int>(comp));
        if (raw == 0) {
          continue;
        }
        for (int s = 0; s < mps_; ++s) {
          const Qubit q = sys_[static_cast<std::size_t>(sites[slot] * mps_ + s)];
          if (first) {
            build_const_load(c_, q, raw, regs[comp], level);
            first = false;
            continue;
          }
          build_const_load(c_, q, raw, temp, level);
          add_in_place(c_, Operand::of(c_.reg(temp)), c_.reg(regs[comp]).qubits, carries);
          build_const_load(c_, q, raw, temp, level);
        }
      }
    }
  }

  void translate_box(const Box& box, const std::vector<std::size_t>& regs, int nc) {
    const int level = box.index.level;
    const auto accf = plan_.m2m_acc_format(level);
    const int fw = plan_.weight_fraction_bits();
    const auto acc = c_.add_register("m2m_acc", RegisterRole::Scratch, accf, level);
    const auto carries = alloc_scratch(c_, accf.width() - 1, "m2m_carry", level);
    const std::vector<Qubit> acc_bits = c_.reg(acc).qubits;
    const auto children = h_.children(box.index);
    const std::size_t g0 = c_.size();
    for (int comp = 0; comp < nc; ++comp) {
      const std::size_t begin = c_.size();
      for (std::size_t slot = 0; slot < children.size(); ++slot) {
        const auto& child = moms_[static_cast<std::size_t>(level + 1)]
                                 [static_cast<std::size_t>(h_.linear_id(children[slot]))];
        for (const auto& t : plan_.m2m_terms(level, static_cast<int>(slot))) {
          if (t.out == comp && t.raw != 0) {
            add_scaled(c_, Operand::of(c_.reg(child[static_cast<std::size_t>(t.in)])), t.raw,
                       acc_bits, carries);
          }
        }
      }
      const std::size_t end = c_.size();
      const auto& out = c_.reg(regs[static_cast<std::size_t>(comp)]).qubits;
      for (std::size_t b = 0; b < out.size(); ++b) {
        c_.cnot(acc_bits[static_cast<std::size_t>(fw) + b], out[b]);
      }
      c_.append_inverse(begin, end);
    }
    for (const auto& ch : children) {
      const auto& child = moms_[static_cast<std::size_t>(level + 1)]
                               [static_cast<std::size_t>(h_.linear_id(ch))];
      c_.add_route_hint(g0, qubits_of(c_, child), c_.reg(regs[0]).qubits[0], level);
    }
  }

  void pair_level(int level) {
    if (level < 2 || !h_.level_active(level)) {
      return;
    }
    const auto pairs = coloured_pairs(level);
    if (pairs.empty()) {
      return;
    }
    Copies cp = make_copies(level, pairs, moms_[static_cast<std::size_t>(level)]);
    const auto fmt = plan_.moment_format(level);
    const int f = plan_.fraction_bits();
    const FixedPointFormat prod_fmt{2 * fmt.width() - 1 - 2 * f, 2 * f, true};
    for (const auto& [a, b] : pairs) {
      const auto& xa = take_copy(cp, a);
      const auto& xb = take_copy(cp, b);
      const int dx = a.i - b.i;
      const int dy = a.j - b.j;
      const auto accf = plan_.energy_format(level, dx, dy);
      const std::size_t g0 = c_.size();
      const auto blk = c_.begin_block(BlockKind::PairEnergy, fmt.width(), level);
      const auto acc = c_.add_register("energy_" + box_tag(level, h_.linear_id(a)) + "_" +
                                           std::to_string(h_.linear_id(b)),
                                       RegisterRole::Energy, accf, level, h_.linear_id(a));
      const auto prod = c_.add_register("pair_product", RegisterRole::Product, prod_fmt, level);
      const auto partial = alloc_scratch(c_, fmt.width(), "mul_partial", level);
      const auto mcarry = alloc_scratch(c_, prod_fmt.width() - 1, "mul_carry", level);
      const auto acarry = alloc_scratch(c_, accf.width() - 1, "energy_carry", level);
      const std::vector<Qubit> acc_bits = c_.reg(acc).qubits;
      const std::size_t begin = c_.size();
      for (const auto& t : plan_.pair_terms(level, dx, dy)) {
        if (t.raw == 0) {
          continue;
        }
        const std::size_t mb = c_.size();
        build_multiplier(c_, xa[static_cast<std::size_t>(t.out)], xb[static_cast<std::size_t>(t.in)],
                         prod, level, partial, mcarry);
        const std::size_t me = c_.size();
        add_scaled(c_, Operand::of(c_.reg(prod)), t.raw, acc_bits, acarry);
        c_.append_inverse(mb, me);
      }
      const std::size_t end = c_.size();
      build_phase_ladder(c_, acc, opts_.delta_t, level);
      c_.append_inverse(begin, end);
      c_.end_block(blk);
      c_.add_route_hint(g0, qubits_of(c_, xb), c_.reg(xa[0]).qubits[0], level);
    }
    if (opts_.use_copy) {
      c_.append_inverse(cp.begin, cp.end);
    }
  }

  const BoxHierarchy& h_;
  const SynthesisOptions& opts_;
  Circuit c_;
  int mps_ = 1;
  std::vector<Qubit> sys_;
  std::vector<std::vector<std::size_t>> regs_;
  std::vector<std::vector<std::vector<std::size_t>>> moms_;
  QuantizationPlan plan_;
};

}  // namespace

EffectiveTimes effective_times(const BoxHierarchy& h, double delta_t) {
  if (!std::isfinite(delta_t) || delta_t <= 0.0) {
    throw ValidationError("effective times need delta_t > 0");
  }
  EffectiveTimes out;
  const int lmax = h.max_level();
  for (int level = 2; level < lmax; ++level) {
    for (const auto& [a, b] : h.interaction_pairs(level)) {
      out.boxes.push_back({a, b, pair_time(h, a, b, delta_t)});
    }
  }
  const auto& lat = h.lattice();
  auto site_time = [&](int a, int b) {
    return delta_t / (lat.site_position(a) - lat.site_position(b)).norm();
  };
  for (const auto& p : h.finest_near_pairs()) {
    out.direct.push_back({p.a, p.b, site_time(p.a, p.b)});
  }
  if (lmax >= 2) {
    for (const auto& [a, b] : h.interaction_pairs(lmax)) {
      const int sa = h.sites(a)[0];
      const int sb = h.sites(b)[0];
      out.direct.push_back({std::min(sa, sb), std::max(sa, sb), site_time(sa, sb)});
    }
  }
  return out;
}

void synth_evo_gate(Circuit& c, std::size_t reg_a, std::size_t reg_b, double t_eff, int level) {
  const auto& fa = c.reg(reg_a).format;
  const auto& fb = c.reg(reg_b).format;
  const int na = fa.width();
  const int nb = fb.width();
  const bool sgn = fa.is_signed || fb.is_signed;
  const int frac = fa.fraction_bits + fb.fraction_bits;
  const auto blk = c.begin_block(BlockKind::Evo, std::max(na, nb), level);
  const auto prod = c.add_register("product", RegisterRole::Product,
                                   {na + nb - frac - (sgn ? 1 : 0), frac, sgn}, level);
  const std::size_t begin = c.size();
  build_multiplier(c, reg_a, reg_b, prod, level);
  const std::size_t end = c.size();
  build_phase_ladder(c, prod, t_eff, level);
  c.append_inverse(begin, end);
  c.end_block(blk);
}

Circuit synth_zeroth(const BoxHierarchy& h, const SynthesisOptions& opts) {
  check_options(h, opts);
  if (opts.order_p != 0) {
    throw ValidationError("synth_zeroth needs order_p = 0; use synth_higher for p >= 1");
  }
  Builder b(h, opts);
  b.direct();
  b.zeroth();
  return b.take();
}

Circuit synth_higher(const BoxHierarchy& h, const SynthesisOptions& opts) {
  check_options(h, opts);
  if (opts.order_p < 1) {
    throw ValidationError("synth_higher needs order_p >= 1; use synth_zeroth for p = 0");
  }
  Builder b(h, opts);
  b.direct();
  b.higher();
  return b.take();
}

Circuit synth_spinful_adapter(Circuit c, const LatticeSpec& lattice, double delta_t) {
  if (!lattice.spinful) {
    throw ValidationError("spinful adapter applied to a spinless lattice");
  }
  std::vector<Qubit> sys;
  for (const auto& r : c.registers()) {
    if (r.role == RegisterRole::System) {
      sys.insert(sys.end(), r.qubits.begin(), r.qubits.end());
    }
  }
  if (static_cast<int>(sys.size()) != lattice.num_modes()) {
    throw ValidationError("spinful adapter: circuit has " + std::to_string(sys.size()) +
                          " system qubits, lattice needs " + std::to_string(lattice.num_modes()));
  }
  if (lattice.onsite_v0 == 0.0) {
    return c;
  }
  const auto blk = c.begin_block(BlockKind::Onsite, 0, exact_log2(lattice.width));
  for (int s = 0; s < lattice.num_sites(); ++s) {
    c.cphase(sys[static_cast<std::size_t>(2 * s)], sys[static_cast<std::size_t>(2 * s + 1)],
             -lattice.onsite_v0 * delta_t);
  }
  c.end_block(blk);
  return c;
}

Circuit synthesize(const BoxHierarchy& h, const SynthesisOptions& opts) {
  Circuit c = opts.order_p == 0 ? synth_zeroth(h, opts) : synth_higher(h, opts);
  if (h.lattice().spinful) {
    c = synth_spinful_adapter(std::move(c), h.lattice(), opts.delta_t);
  }
  return c;
}

std::vector<std::size_t> gates_per_level(const Circuit& c, int max_level) {
  constexpr int kUnset = -2;
  std::vector<int> level(c.size(), kUnset);
  for (const auto& b : c.blocks()) {
    if (b.begin >= b.end || level[b.begin] != kUnset) {
      continue;  // empty, or nested in an earlier (outer) block
    }
    for (std::size_t g = b.begin; g < b.end; ++g) {
      if (level[g] == kUnset) {
        level[g] = b.level;
      }
    }
  }
  std::vector<std::size_t> out(static_cast<std::size_t>(max_level + 2), 0);
  for (int l : level) {
    const bool known = l >= 0 && l <= max_level;
    ++out[known ? static_cast<std::size_t>(l) : static_cast<std::size_t>(max_level + 1)];
  }
  return out;
}

void write_manifest(std::ostream& os, const Circuit& c, const BoxHierarchy& h,
                    const SynthesisOptions& opts) {
  using nlohmann::ordered_json;
  const auto& lat = h.lattice();
  ordered_json j;
  j["format"] = "q2fmm-manifest";
  j["version"] = 1;
  j["lattice"] = {{"width", lat.width},
                  {"height", lat.height},
                  {"spinful", lat.spinful},
                  {"electron_count_q", lat.electron_count_q},
                  {"onsite_v0", lat.onsite_v0}};
  j["options"] = {{"order_p", opts.order_p},     {"eps_b", opts.eps_b},
                  {"use_copy", opts.use_copy},   {"use_fanout", opts.use_fanout},
                  {"delta_t", opts.delta_t},     {"trotter_order", opts.trotter_order},
                  {"guard_bits", opts.guard_bits}};
  j["qubits"] = c.num_qubits();
  const auto n = count_gates(c);
  j["gates"] = {{"total", n.total()}, {"NOT", n.not_},       {"CNOT", n.cnot},
                {"TOFFOLI", n.toffoli}, {"SWAP", n.swap},    {"PHASE", n.phase},
                {"CPHASE", n.cphase},   {"FANOUT", n.fanout}};
  std::map<std::string, std::pair<std::size_t, std::size_t>> roles;
  for (const auto& r : c.registers()) {
    auto& e = roles[std::string(role_name(r.role))];
    ++e.first;
    e.second += r.qubits.size();
  }
  ordered_json rj = ordered_json::object();
  for (const auto& [name, e] : roles) {
    rj[name] = {{"registers", e.first}, {"qubits", e.second}};
  }
  j["registers"] = rj;
  const auto per = gates_per_level(c, h.max_level());
  ordered_json lv = ordered_json::array();
  for (int l = 0; l <= h.max_level(); ++l) {
    lv.push_back({{"level", l}, {"gates", per[static_cast<std::size_t>(l)]}});
  }
  j["levels"] = lv;
  j["unattributed_gates"] = per.back();
  std::map<std::string, std::size_t> blocks;
  for (const auto& b : c.blocks()) {
    ++blocks[std::string(block_name(b.kind))];
  }
  j["blocks"] = blocks;
  os << j.dump(2) << '\n';
}

}  // namespace q2fmm
