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
#include "q2fmm/quantized_fmm.hpp"
#include "q2fmm/serialize.hpp"
#include "q2fmm/simulator.hpp"
#include "q2fmm/synthesizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace q2fmm {
namespace {

LatticeSpec square(int w, int q = -1, bool spinful = false) {
  LatticeSpec l;
  l.width = l.height = w;
  l.spinful = spinful;
  l.electron_count_q = q < 0 ? l.max_occupancy() : q;
  return l;
}

SynthesisOptions options(int p, bool spinful = false) {
  SynthesisOptions o;
  o.order_p = p;
  o.spinful = spinful;
  o.delta_t = 0.1;
  return o;
}

std::size_t count_blocks(const Circuit& c, BlockKind k, int level) {
  std::size_t n = 0;
  for (const auto& b : c.blocks()) {
    n += (b.kind == k && b.level == level) ? 1 : 0;
  }
  return n;
}

void expect_matches_oracle(const BoxHierarchy& h, const SynthesisOptions& o, const Circuit& c,
                           const std::vector<FockState>& states) {
  const auto check = evaluate_phases(c, states);
  ASSERT_TRUE(check.ancillae_restored);
  ASSERT_TRUE(check.system_preserved);
  const auto plan = o.order_p >= 1 ? QuantizationPlan::build(h, o) : QuantizationPlan{};
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto q = o.order_p >= 1 ? quantized_fmm(h, o, plan, states[k]) : quantized_fmm(h, o, states[k]);
    ASSERT_LT(phase_distance(check.phases[k], q.phase), 1e-9) << "state " << k;
    const double analytic = fmm_total_energy(h, states[k], o.order_p);
    ASSERT_LE(std::abs(q.energy() - analytic), q.error_bound + 1e-9) << "state " << k;
  }
}

std::vector<FockState> sample_states(const LatticeSpec& lat, int count, std::uint64_t seed) {
  std::vector<FockState> out;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(lat.electron_count_q + 1));
    out.push_back(random_state(lat, n, rng()));
  }
  return out;
}

TEST(EffectiveTimes, Examples) {
  const auto h = BoxHierarchy::build(square(8));
  const auto t = effective_times(h, 0.1);
  bool saw_distance_two = false;
  for (const auto& d : t.direct) {
    EXPECT_GT(d.value, 0.0);
    const auto& lat = h.lattice();
    const double r = (lat.site_position(d.a) - lat.site_position(d.b)).norm();
    EXPECT_DOUBLE_EQ(d.value, 0.1 / r);
    if (r == 2.0) {
      saw_distance_two = true;
      EXPECT_DOUBLE_EQ(d.value, 0.05);
    }
  }
  EXPECT_TRUE(saw_distance_two);
  for (const auto& e : t.boxes) {
    EXPECT_GT(e.value, 0.0);
    EXPECT_DOUBLE_EQ(e.value, 0.1 / (h.box(e.a).center - h.box(e.b).center).norm());
  }
  const auto h2 = BoxHierarchy::build(square(2));
  for (const auto& d : effective_times(h2, 0.2).direct) {
    const auto& lat = h2.lattice();
    if ((lat.site_position(d.a) - lat.site_position(d.b)).norm2() == 1.0) {
      EXPECT_DOUBLE_EQ(d.value, 0.2);
    }
  }
  EXPECT_THROW((void)effective_times(h, 0.0), ValidationError);
}

TEST(EffectiveTimes, DirectPlusBoxPairsCoverEverySitePairOnce) {
  const auto h = BoxHierarchy::build(square(16));
  const auto t = effective_times(h, 1.0);
  std::size_t covered = t.direct.size();
  for (const auto& e : t.boxes) {
    const auto sa = h.sites(e.a).size();
    covered += sa * h.sites(e.b).size();
  }
  EXPECT_EQ(covered, covered_pairs(h).size());
}

TEST(EvoGate, PhaseEqualsProduct) {
  for (double t : {0.37, std::numbers::pi}) {
    Circuit c;
    const auto a = c.add_register("a", RegisterRole::BoxSum, {3, 0, false});
    const auto b = c.add_register("b", RegisterRole::BoxSum, {3, 0, false});
    synth_evo_gate(c, a, b, t);
    for (int x = 0; x < 8; ++x) {
      for (int y = 0; y < 8; ++y) {
        std::vector<std::uint8_t> bits(c.num_qubits(), 0);
        for (int k = 0; k < 3; ++k) {
          bits[c.reg(a).qubits[static_cast<std::size_t>(k)]] = (x >> k) & 1;
          bits[c.reg(b).qubits[static_cast<std::size_t>(k)]] = (y >> k) & 1;
        }
        const auto out = run_basis(c, bits);
        EXPECT_EQ(out.bits, bits);
        EXPECT_LT(phase_distance(out.phase, -t * x * y), 1e-12) << x << "," << y;
      }
    }
  }
}

TEST(SynthZeroth, TwoByTwoIsDirectOnly) {
  const auto h = BoxHierarchy::build(square(2));
  const auto c = synth_zeroth(h, options(0));
  const auto n = count_gates(c);
  EXPECT_EQ(n.cphase, 6U);
  EXPECT_EQ(n.total(), 6U);
  EXPECT_EQ(c.num_qubits(), 4U);
}

TEST(SynthZeroth, FourByFourStructure) {
  const auto h = BoxHierarchy::build(square(4));
  const auto c = synth_zeroth(h, options(0));
  // Four level-1 merges, each undone once.
  EXPECT_EQ(count_blocks(c, BlockKind::Adder, 1), 8U);
  EXPECT_EQ(count_blocks(c, BlockKind::Evo, 1), 0U);
  const std::size_t direct = h.finest_near_pairs().size() + h.interaction_pairs(2).size();
  EXPECT_EQ(count_gates(c).cphase, direct);
  EXPECT_EQ(direct, 16U * 15U / 2U);
}

TEST(SynthZeroth, FourByFourAllBasisStates) {
  const auto h = BoxHierarchy::build(square(4));
  const auto o = options(0);
  const auto c = synth_zeroth(h, o);
  const auto check = evaluate_all_phases(c, 2);
  ASSERT_TRUE(check.ancillae_restored);
  ASSERT_TRUE(check.system_preserved);
  for (std::uint64_t i = 0; i < check.phases.size(); ++i) {
    const auto s = FockState::from_basis_index(h.lattice(), i);
    ASSERT_LT(phase_distance(check.phases[i], quantized_fmm(h, o, s).phase), 1e-9) << i;
  }
}

TEST(SynthZeroth, EightByEightSampled) {
  const auto lat = square(8, 32);
  const auto h = BoxHierarchy::build(lat);
  const auto o = options(0);
  const auto c = synth_zeroth(h, o);
  EXPECT_GT(count_blocks(c, BlockKind::Evo, 2), 0U);
  expect_matches_oracle(h, o, c, sample_states(lat, 64, 5));
}

TEST(SynthZeroth, CopyPreservesPhases) {
  const auto lat = square(8, 32);
  const auto h = BoxHierarchy::build(lat);
  auto o = options(0);
  const auto plain = synth_zeroth(h, o);
  o.use_copy = true;
  const auto copied = synth_zeroth(h, o);
  o.use_fanout = true;
  const auto fanned = synth_zeroth(h, o);
  EXPECT_GT(count_gates(fanned).fanout, 0U);
  const auto states = sample_states(lat, 40, 9);
  const auto a = evaluate_phases(plain, states);
  const auto b = evaluate_phases(copied, states);
  const auto f = evaluate_phases(fanned, states);
  ASSERT_TRUE(b.ancillae_restored && f.ancillae_restored);
  for (std::size_t k = 0; k < states.size(); ++k) {
    EXPECT_LT(phase_distance(a.phases[k], b.phases[k]), 1e-9);
    EXPECT_LT(phase_distance(a.phases[k], f.phases[k]), 1e-9);
  }
}

TEST(SynthZeroth, RejectsBadOptions) {
  const auto h = BoxHierarchy::build(square(4));
  EXPECT_THROW((void)synth_zeroth(h, options(1)), ValidationError);
  EXPECT_THROW((void)synth_zeroth(h, options(0, true)), ValidationError);
  auto o = options(0);
  o.eps_b = 0.0;
  EXPECT_THROW((void)synth_zeroth(h, o), ValidationError);
}

TEST(SynthHigher, RejectsOrderZero) {
  const auto h = BoxHierarchy::build(square(4));
  EXPECT_THROW((void)synth_higher(h, options(0)), ValidationError);
}

TEST(SynthHigher, FourByFourAllBasisStates) {
  const auto h = BoxHierarchy::build(square(4));
  const auto o = options(2);
  const auto c = synth_higher(h, o);
  const auto check = evaluate_all_phases(c, 2);
  ASSERT_TRUE(check.ancillae_restored);
  ASSERT_TRUE(check.system_preserved);
  const auto plan = QuantizationPlan::build(h, o);
  for (std::uint64_t i = 0; i < check.phases.size(); ++i) {
    const auto s = FockState::from_basis_index(h.lattice(), i);
    ASSERT_LT(phase_distance(check.phases[i], quantized_fmm(h, o, plan, s).phase), 1e-9) << i;
  }
}

TEST(SynthHigher, TwoElectronsAndEmpty) {
  const auto lat = square(4, 2);
  const auto h = BoxHierarchy::build(lat);
  const auto o = options(1);
  const auto c = synth_higher(h, o);
  std::vector<int> occ(16, 0);
  occ[0] = occ[13] = 1;
  const std::vector<FockState> states{FockState::from_site_occupations(lat, occ), FockState::empty(lat)};
  expect_matches_oracle(h, o, c, states);
  const auto empty = evaluate_phases(c, std::span(states).subspan(1));
  EXPECT_EQ(empty.phases[0], 0.0);
}

TEST(SynthHigher, EightByEightMatchesQuantizedAndAnalytic) {
  const auto lat = square(8, 16);
  const auto h = BoxHierarchy::build(lat);
  for (int p : {1, 2}) {
    const auto o = options(p);
    const auto c = synth_higher(h, o);
    EXPECT_GT(count_blocks(c, BlockKind::PairEnergy, 2), 0U);
    expect_matches_oracle(h, o, c, sample_states(lat, 24, 17 + static_cast<std::uint64_t>(p)));
  }
}

TEST(SynthHigher, CopyPreservesPhases) {
  const auto lat = square(8, 16);
  const auto h = BoxHierarchy::build(lat);
  auto o = options(1);
  const auto plain = synth_higher(h, o);
  o.use_copy = true;
  const auto copied = synth_higher(h, o);
  const auto states = sample_states(lat, 12, 3);
  const auto a = evaluate_phases(plain, states);
  const auto b = evaluate_phases(copied, states);
  ASSERT_TRUE(b.ancillae_restored);
  for (std::size_t k = 0; k < states.size(); ++k) {
    EXPECT_LT(phase_distance(a.phases[k], b.phases[k]), 1e-9);
  }
}

TEST(SynthHigher, OverflowNamesRegister) {
  // Q = 3 fills the 2-bit integer part exactly, leaving no room for rounding.
  const auto h = BoxHierarchy::build(square(8, 3));
  auto o = options(2);
  o.eps_b = 1.0;
  try {
    (void)synth_higher(h, o);
    FAIL() << "expected an overflow error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("mom_L"), std::string::npos) << e.what();
  }
}

TEST(QuantizationPlan, ComponentsAndConstants) {
  const auto comps = planar_components(2);
  ASSERT_EQ(comps.size(), 6U);
  EXPECT_EQ(comps[0], (MomentComponent{0, 0, false}));
  EXPECT_EQ(comps[1], (MomentComponent{1, 1, false}));
  EXPECT_EQ(comps[2], (MomentComponent{1, 1, true}));
  const auto h = BoxHierarchy::build(square(8, 16));
  const auto plan = QuantizationPlan::build(h, options(2));
  EXPECT_EQ(plan.load_level(), 2);
  EXPECT_EQ(plan.top_level(), 1);
  for (int slot = 0; slot < plan.load_slots(); ++slot) {
    // The monopole component is the charge itself.
    EXPECT_EQ(plan.load_raw(slot, 0), std::int64_t{1} << plan.fraction_bits());
  }
  EXPECT_THROW((void)QuantizationPlan::build(h, options(0)), ValidationError);
}

TEST(Spinful, TwoByTwoAllStates) {
  auto lat = square(2, -1, true);
  lat.onsite_v0 = 0.7;
  const auto h = BoxHierarchy::build(lat);
  const auto o = options(0, true);
  const auto c = synthesize(h, o);
  EXPECT_EQ(count_gates(c).cphase, 6U * 4U + 4U);
  const auto check = evaluate_all_phases(c);
  ASSERT_TRUE(check.ancillae_restored);
  ASSERT_EQ(check.phases.size(), 256U);
  for (std::uint64_t i = 0; i < 256; ++i) {
    const auto s = FockState::from_basis_index(lat, i);
    int doubles = 0;
    for (int site = 0; site < 4; ++site) {
      doubles += s.doubly_occupied(site) ? 1 : 0;
    }
    const double expect = -o.delta_t * (brute_force_energy(lat, s) + lat.onsite_v0 * doubles);
    ASSERT_LT(phase_distance(check.phases[i], expect), 1e-9) << i;
  }
}

TEST(Spinful, DoubleOccupancyCountsTwice) {
  const auto lat = square(4, -1, true);
  const auto h = BoxHierarchy::build(lat);
  const auto o = options(0, true);
  const auto c = synth_zeroth(h, o);
  std::vector<int> occ(16, 0);
  occ[0] = 2;
  occ[15] = 1;
  const std::vector<FockState> states{FockState::from_site_occupations(lat, occ)};
  expect_matches_oracle(h, o, c, states);
}

TEST(Spinful, AdapterRejectsSpinless) {
  const auto lat = square(2);
  const auto c = synth_zeroth(BoxHierarchy::build(lat), options(0));
  EXPECT_THROW((void)synth_spinful_adapter(c, lat, 0.1), ValidationError);
}

TEST(Manifest, DeterministicWithLevels) {
  const auto h = BoxHierarchy::build(square(8));
  const auto o = options(0);
  std::ostringstream a;
  std::ostringstream b;
  write_manifest(a, synth_zeroth(h, o), h, o);
  write_manifest(b, synth_zeroth(h, o), h, o);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("\"levels\""), std::string::npos);
  const auto c = synth_zeroth(h, o);
  const auto per = gates_per_level(c, h.max_level());
  EXPECT_EQ(per.back(), 0U);
  std::size_t sum = 0;
  for (auto n : per) {
    sum += n;
  }
  EXPECT_EQ(sum, c.size());
}

TEST(Serialization, SynthesizedCircuitRoundTrips) {
  const auto h = BoxHierarchy::build(square(4));
  const auto c = synth_higher(h, options(1));
  const auto text = to_text(c);
  EXPECT_EQ(to_text(from_text(text)), text);
}

}  // namespace
}  // namespace q2fmm
