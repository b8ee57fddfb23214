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

#include "q2fmm/hardware.hpp"

#include "q2fmm/csv.hpp"
#include "q2fmm/fit.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace q2fmm {

std::string_view hardware_name(HardwareKind k) {
  switch (k) {
    case HardwareKind::NearestNeighbor2D: return "NearestNeighbor2D";
    case HardwareKind::Shuttling: return "Shuttling";
    case HardwareKind::ShuttlingFanout: return "ShuttlingFanout";
  }
  return "?";
}

HardwareKind hardware_from_name(std::string_view name) {
  for (auto k : {HardwareKind::NearestNeighbor2D, HardwareKind::Shuttling, HardwareKind::ShuttlingFanout}) {
    if (hardware_name(k) == name) {
      return k;
    }
  }
  throw ValidationError("unknown hardware model '" + std::string(name) + "'");
}

std::string_view arithmetic_name(ArithmeticModel m) {
  return m == ArithmeticModel::AsBuilt ? "as_built" : "literature";
}

ArithmeticModel arithmetic_from_name(std::string_view name) {
  if (name == "as_built") {
    return ArithmeticModel::AsBuilt;
  }
  if (name == "literature") {
    return ArithmeticModel::Literature;
  }
  throw ValidationError("unknown arithmetic model '" + std::string(name) + "'");
}

void HardwareModel::validate() const {
  if (shuttle_depth_cost < 1 || fanout_depth_cost < 1) {
    throw ValidationError("hardware costs must be positive");
  }
}

int literature_depth(const HardwareModel& m, BlockKind kind, int width) {
  const int n = std::max(width, 1);
  const bool fan = m.kind == HardwareKind::ShuttlingFanout;
  if (kind == BlockKind::Multiplier) {
    return fan ? 8 : 4 * n;
  }
  if (kind == BlockKind::Adder) {
    return fan ? 4 : 4 * std::bit_width(static_cast<unsigned>(n - 1)) + 3;
  }
  throw ValidationError("literature cost model covers adders and multipliers only");
}

std::size_t literature_gates(BlockKind kind, int width) {
  const double n = std::max(width, 1);
  if (kind == BlockKind::Multiplier) {
    return static_cast<std::size_t>(std::ceil(8.0 * std::pow(n, 1.3)));
  }
  if (kind == BlockKind::Adder) {
    return static_cast<std::size_t>(10.0 * n);
  }
  throw ValidationError("literature cost model covers adders and multipliers only");
}

int manhattan(GridPos a, GridPos b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

namespace {

void operands(const Circuit& c, const Gate& g, std::vector<Qubit>& out) {
  out.clear();
  if (g.kind == GateKind::Fanout) {
    out.push_back(g.q[0]);
    const auto t = c.fanout_targets(g);
    out.insert(out.end(), t.begin(), t.end());
    return;
  }
  for (int k = 0; k < gate_arity(g.kind); ++k) {
    out.push_back(g.q[k]);
  }
}

// Owning register per qubit (first register listing it).
std::vector<int> register_of(const Circuit& c) {
  std::vector<int> out(c.num_qubits(), -1);
  for (std::size_t r = 0; r < c.registers().size(); ++r) {
    for (Qubit q : c.reg(r).qubits) {
      if (out[q] < 0) {
        out[q] = static_cast<int>(r);
      }
    }
  }
  return out;
}

bool is_system(const Register& r) { return r.role == RegisterRole::System; }

bool is_boxed(const Register& r) { return !is_system(r) && r.level >= 0 && r.box >= 0; }

class Grid {
public:
  Grid(int w, int h) : w_(w), h_(h), used_(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

  void take(GridPos p) { used_[index(p)] = 1; }
  [[nodiscard]] bool free(GridPos p) const { return used_[index(p)] == 0; }

  GridPos nearest_free(GridPos target) {
    const auto key = index(target);
    int& r = start_[key];
    for (;; ++r) {
      if (r > w_ + h_) {
        throw ValidationError("layout: grid is full");
      }
      for (int dx = -r; dx <= r; ++dx) {
        const int rest = r - std::abs(dx);
        for (int dy : {-rest, rest}) {
          const GridPos p{target.x + dx, target.y + dy};
          if (p.x >= 0 && p.y >= 0 && p.x < w_ && p.y < h_ && free(p)) {
            return p;
          }
          if (rest == 0) {
            break;
          }
        }
      }
    }
  }

private:
  [[nodiscard]] std::size_t index(GridPos p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(p.x);
  }

  int w_;
  int h_;
  std::vector<std::uint8_t> used_;
  std::unordered_map<std::size_t, int> start_;
};

}  // namespace

int min_pitch(const BoxHierarchy& h, const Circuit& c) {
  const auto& lat = h.lattice();
  const double per_site = static_cast<double>(c.num_qubits()) / lat.num_sites();
  int p = std::max(lat.modes_per_site(), static_cast<int>(std::ceil(std::sqrt(per_site))));
  while (static_cast<std::size_t>(p) * p * static_cast<std::size_t>(lat.num_sites()) < c.num_qubits()) {
    ++p;
  }
  return p;
}

Layout layout(const BoxHierarchy& h, const Circuit& c, int pitch) {
  const auto& lat = h.lattice();
  if (pitch == 0) {
    pitch = min_pitch(h, c);
  }
  if (pitch < lat.modes_per_site()) {
    throw ValidationError("layout pitch " + std::to_string(pitch) + " cannot hold " +
                          std::to_string(lat.modes_per_site()) + " modes per site");
  }
  Layout out;
  out.pitch = pitch;
  out.grid_width = pitch * lat.width;
  out.grid_height = pitch * lat.height;
  const std::size_t cells = static_cast<std::size_t>(out.grid_width) * static_cast<std::size_t>(out.grid_height);
  if (c.num_qubits() > cells) {
    throw ValidationError("layout: " + std::to_string(c.num_qubits()) + " qubits exceed " +
                          std::to_string(cells) + " cells (" + std::to_string(lat.num_sites()) +
                          " sites at pitch " + std::to_string(pitch) + ", " +
                          std::to_string(c.num_qubits() / static_cast<std::size_t>(lat.num_sites())) +
                          " qubits per site); need pitch >= " + std::to_string(min_pitch(h, c)));
  }
  out.position.assign(c.num_qubits(), GridPos{-1, -1});
  Grid grid(out.grid_width, out.grid_height);
  const auto owner = register_of(c);
  const auto& regs = c.registers();
  const int mps = lat.modes_per_site();

  // System qubits first.
  for (const auto& r : regs) {
    if (!is_system(r)) {
      continue;
    }
    for (std::size_t k = 0; k < r.qubits.size(); ++k) {
      const int site = static_cast<int>(k) / mps;
      const GridPos p{pitch * lat.site_x(site) + static_cast<int>(k) % mps, pitch * lat.site_y(site)};
      if (out.position[r.qubits[k]].x < 0) {
        out.position[r.qubits[k]] = p;
        grid.take(p);
      }
    }
  }

  auto box_target = [&](const Register& r) {
    const auto& b = h.level_boxes(r.level).at(static_cast<std::size_t>(r.box));
    const int s = b.side;
    return GridPos{std::min(pitch * (b.index.i * s) + pitch * s / 2, out.grid_width - 1),
                   std::min(pitch * (b.index.j * s) + pitch * s / 2, out.grid_height - 1)};
  };

  // Anchor cell per register: boxed ones at their box centre, others next to
  // the first anchored register they meet in gate order.
  std::vector<GridPos> anchor(regs.size(), GridPos{-1, -1});
  std::vector<std::size_t> order;
  std::vector<std::size_t> boxed;
  for (std::size_t r = 0; r < regs.size(); ++r) {
    if (is_boxed(regs[r])) {
      anchor[r] = box_target(regs[r]);
      boxed.push_back(r);
    }
  }
  std::stable_sort(boxed.begin(), boxed.end(),
                   [&](std::size_t a, std::size_t b) { return regs[a].level > regs[b].level; });
  std::vector<Qubit> ops;
  auto anchor_of_qubit = [&](Qubit q) -> GridPos {
    const int r = owner[q];
    if (r < 0) {
      return {-1, -1};
    }
    if (is_system(regs[static_cast<std::size_t>(r)])) {
      return out.position[q];
    }
    return anchor[static_cast<std::size_t>(r)];
  };
  std::vector<std::size_t> loose;
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (const auto& g : c.gates()) {
      operands(c, g, ops);
      GridPos known{-1, -1};
      for (Qubit q : ops) {
        const GridPos a = anchor_of_qubit(q);
        if (a.x >= 0) {
          known = a;
          break;
        }
      }
      if (known.x < 0) {
        continue;
      }
      for (Qubit q : ops) {
        const int r = owner[q];
        if (r >= 0 && anchor[static_cast<std::size_t>(r)].x < 0 && !is_system(regs[static_cast<std::size_t>(r)])) {
          anchor[static_cast<std::size_t>(r)] = known;
          loose.push_back(static_cast<std::size_t>(r));
          changed = true;
        }
      }
    }
    if (!changed) {
      break;
    }
  }
  const GridPos centre{out.grid_width / 2, out.grid_height / 2};
  for (std::size_t r = 0; r < regs.size(); ++r) {
    if (!is_system(regs[r]) && anchor[r].x < 0) {
      anchor[r] = centre;
      loose.push_back(r);
    }
  }
  order = boxed;
  order.insert(order.end(), loose.begin(), loose.end());
  for (std::size_t r : order) {
    for (Qubit q : regs[r].qubits) {
      if (out.position[q].x >= 0) {
        continue;
      }
      const GridPos p = grid.nearest_free(anchor[r]);
      out.position[q] = p;
      grid.take(p);
    }
  }
  for (Qubit q = 0; q < c.num_qubits(); ++q) {
    if (out.position[q].x < 0) {
      const GridPos p = grid.nearest_free(centre);
      out.position[q] = p;
      grid.take(p);
    }
  }
  return out;
}

RouteCost route_cost(const HardwareModel& m, GridPos from, GridPos to) {
  const int d = manhattan(from, to);
  if (d == 0) {
    return {};
  }
  if (m.kind == HardwareKind::NearestNeighbor2D) {
    return {d, 2 * static_cast<std::size_t>(d), 0};
  }
  return {m.shuttle_depth_cost, 0, 2};
}

namespace {

struct Span {
  std::size_t begin;
  std::size_t end;
  int level;
  BlockKind kind;
  int width;
};

// Outermost blocks of the selected kinds, ordered by begin.
std::vector<Span> outermost(const Circuit& c, bool arithmetic_only) {
  std::vector<Span> all;
  for (const auto& b : c.blocks()) {
    if (b.end <= b.begin) {
      continue;
    }
    if (arithmetic_only && b.kind != BlockKind::Adder && b.kind != BlockKind::Multiplier) {
      continue;
    }
    all.push_back({b.begin, b.end, b.level, b.kind, b.width});
  }
  std::stable_sort(all.begin(), all.end(), [](const Span& a, const Span& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end > b.end;
  });
  std::vector<Span> out;
  std::size_t cover = 0;
  for (const auto& s : all) {
    if (s.begin >= cover) {
      out.push_back(s);
      cover = s.end;
    }
  }
  return out;
}

std::vector<int> gate_levels(const Circuit& c, int unattributed) {
  std::vector<int> level(c.size(), unattributed);
  for (const auto& s : outermost(c, false)) {
    const int l = (s.level >= 0 && s.level < unattributed) ? s.level : unattributed;
    std::fill(level.begin() + static_cast<std::ptrdiff_t>(s.begin),
              level.begin() + static_cast<std::ptrdiff_t>(s.end), l);
  }
  return level;
}

std::uint64_t fanout_depth(const HardwareModel* m, std::size_t targets) {
  if (m != nullptr && m->kind == HardwareKind::ShuttlingFanout) {
    return static_cast<std::uint64_t>(m->fanout_depth_cost);
  }
  if (m == nullptr) {
    return 1;
  }
  return static_cast<std::uint64_t>(std::bit_width(targets));  // ceil(log2(k + 1))
}

}  // namespace

ResourceReport schedule(const Circuit& c, const HardwareModel& m, const Layout& lay, int max_level) {
  m.validate();
  if (lay.position.size() != c.num_qubits()) {
    throw ValidationError("layout does not cover the circuit");
  }
  ResourceReport rep;
  rep.gates = count_gates(c);
  rep.total_qubits = c.num_qubits();
  const int unattr = max_level + 1;
  rep.levels.resize(static_cast<std::size_t>(max_level + 2));
  for (int l = 0; l <= unattr; ++l) {
    rep.levels[static_cast<std::size_t>(l)].level = l;
  }
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> first(rep.levels.size(), kNone);
  std::vector<std::uint64_t> last(rep.levels.size(), 0);
  const auto level = gate_levels(c, unattr);

  std::vector<Span> macros;
  if (m.arithmetic == ArithmeticModel::Literature) {
    macros = outermost(c, true);
  }
  std::vector<std::size_t> macro_at(c.size() + 1, std::numeric_limits<std::size_t>::max());
  for (std::size_t k = 0; k < macros.size(); ++k) {
    macro_at[macros[k].begin] = k;
  }

  const auto& hints = c.route_hints();
  std::vector<std::size_t> by_begin(hints.size());
  std::iota(by_begin.begin(), by_begin.end(), 0);
  std::stable_sort(by_begin.begin(), by_begin.end(),
                   [&](std::size_t a, std::size_t b) { return hints[a].begin < hints[b].begin; });
  std::vector<std::size_t> by_end = by_begin;
  std::stable_sort(by_end.begin(), by_end.end(),
                   [&](std::size_t a, std::size_t b) { return hints[a].end < hints[b].end; });
  std::size_t next_begin = 0;
  std::size_t next_end = 0;

  std::vector<std::uint64_t> t(c.num_qubits(), 0);
  std::vector<std::uint64_t> chain(c.num_qubits(), 0);
  std::vector<std::uint32_t> stamp(c.num_qubits(), 0);
  std::uint32_t epoch = 0;

  auto level_slot = [&](int l) {
    return static_cast<std::size_t>((l >= 0 && l <= max_level) ? l : unattr);
  };
  auto route = [&](const RouteHint& hint, bool outbound) {
    auto& lv = rep.levels[level_slot(hint.level)];
    bool moved_any = false;
    for (Qubit q : hint.moved) {
      const RouteCost rc = route_cost(m, lay.position[q], lay.position[hint.dest]);
      if (rc.depth == 0) {
        continue;
      }
      moved_any = true;
      t[q] += static_cast<std::uint64_t>(rc.depth);
      lv.route_depth = std::max(lv.route_depth, static_cast<std::uint64_t>(rc.depth));
      if (outbound) {
        rep.swap_ops += rc.swaps;
        lv.swaps += rc.swaps;
        if (!m.collective_shuttles) {
          rep.shuttle_ops += rc.shuttles;
          lv.shuttles += rc.shuttles;
        }
      }
    }
    if (outbound && moved_any && m.collective_shuttles && m.kind != HardwareKind::NearestNeighbor2D) {
      rep.shuttle_ops += 2;
      lv.shuttles += 2;
    }
  };
  auto note = [&](int l, std::uint64_t start, std::uint64_t end, std::size_t gates) {
    const auto s = level_slot(l);
    first[s] = std::min(first[s], start);
    last[s] = std::max(last[s], end);
    rep.levels[s].gates += gates;
  };

  std::vector<Qubit> ops;
  std::size_t i = 0;
  while (i <= c.size()) {
    while (next_end < by_end.size() && hints[by_end[next_end]].end <= i) {
      route(hints[by_end[next_end]], false);
      ++next_end;
    }
    if (i == c.size()) {
      break;
    }
    while (next_begin < by_begin.size() && hints[by_begin[next_begin]].begin <= i) {
      route(hints[by_begin[next_begin]], true);
      ++next_begin;
    }
    if (macro_at[i] != std::numeric_limits<std::size_t>::max()) {
      const Span& s = macros[macro_at[i]];
      ++epoch;
      std::vector<Qubit> qs;
      for (std::size_t g = s.begin; g < s.end; ++g) {
        operands(c, c.gates()[g], ops);
        for (Qubit q : ops) {
          ++chain[q];
          if (stamp[q] != epoch) {
            stamp[q] = epoch;
            qs.push_back(q);
          }
        }
      }
      std::uint64_t start = 0;
      for (Qubit q : qs) {
        start = std::max(start, t[q]);
      }
      const std::uint64_t end = start + static_cast<std::uint64_t>(literature_depth(m, s.kind, s.width));
      for (Qubit q : qs) {
        t[q] = end;
      }
      rep.modeled_gates += literature_gates(s.kind, s.width);
      ++rep.macro_blocks;
      note(level[s.begin], start, end, s.end - s.begin);
      i = s.end;
      continue;
    }
    const Gate& g = c.gates()[i];
    operands(c, g, ops);
    std::uint64_t start = 0;
    for (Qubit q : ops) {
      start = std::max(start, t[q]);
      ++chain[q];
    }
    const std::uint64_t end = start + (g.kind == GateKind::Fanout ? fanout_depth(&m, ops.size() - 1) : 1);
    for (Qubit q : ops) {
      t[q] = end;
    }
    ++rep.modeled_gates;
    note(level[i], start, end, 1);
    ++i;
  }
  for (std::size_t l = 0; l < rep.levels.size(); ++l) {
    rep.levels[l].span = first[l] == kNone ? 0 : last[l] - first[l];
  }
  rep.depth = t.empty() ? 0 : *std::max_element(t.begin(), t.end());
  rep.longest_chain = chain.empty() ? 0 : *std::max_element(chain.begin(), chain.end());
  rep.peak_ancillae = ancilla_peak(c, true);
  return rep;
}

std::vector<std::uint32_t> asap_layers(const Circuit& c) {
  std::vector<std::uint32_t> t(c.num_qubits(), 0);
  std::vector<std::uint32_t> out(c.size());
  std::vector<Qubit> ops;
  for (std::size_t i = 0; i < c.size(); ++i) {
    operands(c, c.gates()[i], ops);
    std::uint32_t layer = 0;
    for (Qubit q : ops) {
      layer = std::max(layer, t[q]);
    }
    for (Qubit q : ops) {
      t[q] = layer + 1;
    }
    out[i] = layer;
  }
  return out;
}

std::size_t ancilla_peak(const Circuit& c, bool recycle) {
  const auto anc = c.ancilla_mask();
  if (!recycle) {
    return static_cast<std::size_t>(std::count(anc.begin(), anc.end(), true));
  }
  const auto layers = asap_layers(c);
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> lo(c.num_qubits(), kNone);
  std::vector<std::uint32_t> hi(c.num_qubits(), 0);
  std::vector<Qubit> ops;
  std::uint32_t depth = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    operands(c, c.gates()[i], ops);
    for (Qubit q : ops) {
      lo[q] = std::min(lo[q], layers[i]);
      hi[q] = std::max(hi[q], layers[i]);
    }
    depth = std::max(depth, layers[i] + 1);
  }
  std::vector<std::int64_t> delta(static_cast<std::size_t>(depth) + 1, 0);
  for (Qubit q = 0; q < c.num_qubits(); ++q) {
    if (anc[q] && lo[q] != kNone) {
      ++delta[lo[q]];
      --delta[hi[q] + 1];
    }
  }
  std::int64_t live = 0;
  std::int64_t peak = 0;
  for (auto d : delta) {
    live += d;
    peak = std::max(peak, live);
  }
  return static_cast<std::size_t>(peak);
}

std::size_t box_register_footprint(const Circuit& c) {
  std::unordered_map<int, std::size_t> per_level;
  for (const auto& r : c.registers()) {
    if (r.role == RegisterRole::BoxSum || r.role == RegisterRole::MomentReal ||
        r.role == RegisterRole::MomentImag) {
      per_level[r.level] += r.qubits.size();
    }
  }
  std::size_t best = 0;
  for (const auto& [l, n] : per_level) {
    best = std::max(best, n);
  }
  return best;
}

std::vector<SweepModel> default_sweep_models() {
  std::vector<SweepModel> out;
  HardwareModel nn;
  nn.kind = HardwareKind::NearestNeighbor2D;
  nn.arithmetic = ArithmeticModel::Literature;
  out.push_back({"NearestNeighbor2D", nn, false, false});
  HardwareModel sh = nn;
  sh.kind = HardwareKind::Shuttling;
  out.push_back({"Shuttling", sh, false, false});
  HardwareModel sf = nn;
  sf.kind = HardwareKind::ShuttlingFanout;
  out.push_back({"ShuttlingFanout", sf, true, true});
  return out;
}

namespace {

LatticeSpec sweep_lattice(int n, const SweepOptions& opts) {
  const int w = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (w * w != n || !std::has_single_bit(static_cast<unsigned>(w)) || w < 2) {
    throw ValidationError("sweep size " + std::to_string(n) +
                          " is not the square of a power of two >= 2");
  }
  LatticeSpec lat;
  lat.width = lat.height = w;
  lat.electron_count_q = std::max(1, static_cast<int>(std::lround(opts.q_fraction * n)));
  return lat;
}

SynthesisOptions sweep_synthesis(const SweepOptions& opts, const SweepModel& m) {
  SynthesisOptions so;
  so.order_p = opts.order_p;
  so.eps_b = opts.eps_b;
  so.delta_t = opts.delta_t;
  so.use_copy = m.use_copy;
  so.use_fanout = m.use_fanout;
  return so;
}

}  // namespace

SweepResult scaling_sweep(const std::vector<int>& sizes, const std::vector<SweepModel>& models,
                          const SweepOptions& opts) {
  if (sizes.empty() || models.empty()) {
    throw ValidationError("scaling sweep needs sizes and models");
  }
  for (const auto& m : models) {
    m.hardware.validate();
  }
  std::vector<int> desc = sizes;
  std::sort(desc.begin(), desc.end(), std::greater<>());
  desc.erase(std::unique(desc.begin(), desc.end()), desc.end());

  // Distinct synthesis variants, in first-use order.
  std::vector<std::pair<bool, bool>> variants;
  for (const auto& m : models) {
    const std::pair<bool, bool> v{m.use_copy, m.use_fanout};
    if (std::find(variants.begin(), variants.end(), v) == variants.end()) {
      variants.push_back(v);
    }
  }

  SweepResult res;
  res.pitch = opts.pitch;
  for (int n : desc) {
    const LatticeSpec lat = sweep_lattice(n, opts);
    const BoxHierarchy h = BoxHierarchy::build(lat);
    std::vector<Circuit> circuits;
    for (const auto& [copy, fan] : variants) {
      SweepModel probe;
      probe.use_copy = copy;
      probe.use_fanout = fan;
      circuits.push_back(synthesize(h, sweep_synthesis(opts, probe)));
    }
    if (res.pitch == 0) {
      // The largest size needs the widest pitch; it fixes the grid for all.
      for (const auto& c : circuits) {
        res.pitch = std::max(res.pitch, min_pitch(h, c));
      }
    }
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const Layout lay = layout(h, circuits[v], res.pitch);
      for (const auto& m : models) {
        if (std::pair{m.use_copy, m.use_fanout} != variants[v]) {
          continue;
        }
        SweepRow row;
        row.n = n;
        row.q = lat.electron_count_q;
        row.model = m.name;
        row.pitch = res.pitch;
        row.report = schedule(circuits[v], m.hardware, lay, h.max_level());
        res.rows.push_back(std::move(row));
      }
    }
  }
  auto model_rank = [&](const std::string& name) {
    for (std::size_t k = 0; k < models.size(); ++k) {
      if (models[k].name == name) {
        return k;
      }
    }
    return models.size();
  };
  std::stable_sort(res.rows.begin(), res.rows.end(), [&](const SweepRow& a, const SweepRow& b) {
    const auto ra = model_rank(a.model);
    const auto rb = model_rank(b.model);
    return ra != rb ? ra < rb : a.n < b.n;
  });
  return res;
}

std::vector<std::string> sweep_csv_header() {
  return {"schema",   "model",         "N",           "Q",          "pitch",    "depth",
          "gates",    "modeled_gates", "peak_ancillae", "total_qubits", "swap_ops", "shuttle_ops"};
}

std::vector<std::vector<std::string>> sweep_csv_rows(const SweepResult& r) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : r.rows) {
    const auto& rep = row.report;
    out.push_back({"q2fmm-sweep-1", row.model, std::to_string(row.n), std::to_string(row.q),
                   std::to_string(row.pitch), std::to_string(rep.depth),
                   std::to_string(rep.gates.total()), std::to_string(rep.modeled_gates),
                   std::to_string(rep.peak_ancillae), std::to_string(rep.total_qubits),
                   std::to_string(rep.swap_ops), std::to_string(rep.shuttle_ops)});
  }
  return out;
}

std::string sweep_fit_report(const SweepResult& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = "q2fmm-fit-report";
  j["version"] = 1;
  j["pitch"] = r.pitch;
  ordered_json models = ordered_json::array();
  std::vector<std::string> names;
  for (const auto& row : r.rows) {
    if (std::find(names.begin(), names.end(), row.model) == names.end()) {
      names.push_back(row.model);
    }
  }
  auto fit_json = [](const std::string& form, const LinearFit& f) {
    return ordered_json{{"form", form}, {"intercept", f.intercept}, {"slope", f.slope}, {"r2", f.r2}};
  };
  for (const auto& name : names) {
    std::vector<double> n;
    std::vector<double> q;
    std::vector<double> depth;
    std::vector<double> gates;
    for (const auto& row : r.rows) {
      if (row.model == name) {
        n.push_back(row.n);
        q.push_back(row.q);
        depth.push_back(static_cast<double>(row.report.depth));
        gates.push_back(static_cast<double>(row.report.gates.total()));
      }
    }
    ordered_json m;
    m["model"] = name;
    m["sizes"] = n;
    if (n.size() >= 2) {
      ordered_json fits = ordered_json::array();
      const auto cands = fit_scaling_candidates(n, q, depth);
      for (const auto& cf : cands) {
        fits.push_back(fit_json(cf.form, cf.fit));
      }
      m["depth_fits"] = fits;
      m["best_depth_form"] = cands.front().form;
      m["gate_fit"] = fit_json("N", fit_linear(n, gates));
    }
    models.push_back(m);
  }
  j["models"] = models;
  return j.dump(2) + "\n";
}

}  // namespace q2fmm
