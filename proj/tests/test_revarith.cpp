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

#include "q2fmm/arithmetic.hpp"
#include "q2fmm/serialize.hpp"
#include "q2fmm/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace q2fmm {
namespace {

FixedPointFormat fmt(int width, bool is_signed, int frac = 0) {
  return {width - frac - (is_signed ? 1 : 0), frac, is_signed};
}

void set_value(std::vector<std::uint8_t>& bits, const Register& r, std::int64_t raw) {
  const auto pattern = r.format.encode(raw);
  for (std::size_t b = 0; b < r.qubits.size(); ++b) {
    bits[r.qubits[b]] = static_cast<std::uint8_t>((pattern >> b) & 1U);
  }
}

std::int64_t get_value(const std::vector<std::uint8_t>& bits, const Register& r) {
  std::uint64_t pattern = 0;
  for (std::size_t b = 0; b < r.qubits.size(); ++b) {
    pattern |= static_cast<std::uint64_t>(bits[r.qubits[b]]) << b;
  }
  return r.format.decode(pattern);
}

bool only_registers_nonzero(const Circuit& c, const std::vector<std::uint8_t>& bits,
                            std::initializer_list<std::size_t> regs) {
  std::vector<bool> allowed(c.num_qubits(), false);
  for (auto id : regs) {
    for (Qubit q : c.reg(id).qubits) {
      allowed[q] = true;
    }
  }
  for (Qubit q = 0; q < c.num_qubits(); ++q) {
    if (!allowed[q] && bits[q]) {
      return false;
    }
  }
  return true;
}

void expect_identity_with_inverse(const Circuit& c) {
  Circuit round = c;
  round.append_inverse(0, c.size());
  ASSERT_LE(round.num_qubits(), 18U);
  for (std::uint64_t in = 0; in < (std::uint64_t{1} << round.num_qubits()); ++in) {
    std::vector<std::uint8_t> bits(round.num_qubits());
    for (Qubit q = 0; q < round.num_qubits(); ++q) {
      bits[q] = (in >> q) & 1U;
    }
    const auto out = run_basis(round, bits);
    ASSERT_EQ(out.bits, bits);
    ASSERT_NEAR(out.phase, 0.0, 1e-12);
  }
}

TEST(FixedPoint, RegisterWidth) {
  auto w = register_width_for(1, 1.0);
  EXPECT_EQ(w.integer_bits, 1);
  EXPECT_EQ(w.fraction_bits, 0);
  w = register_width_for(7, 1.0 / 16.0);
  EXPECT_EQ(w.integer_bits, 3);
  EXPECT_EQ(w.fraction_bits, 4);
  w = register_width_for(100, 1e-3);
  EXPECT_EQ(w.integer_bits, 7);
  EXPECT_EQ(w.fraction_bits, 10);
  EXPECT_EQ(w.total(true), 18);
  EXPECT_THROW((void)register_width_for(0, 0.5), ValidationError);
  EXPECT_THROW((void)register_width_for(3, 0.0), ValidationError);
}

TEST(FixedPoint, EncodeDecodeRoundTrip) {
  for (int width = 1; width <= 12; ++width) {
    for (bool s : {false, true}) {
      if (s && width < 1) {
        continue;
      }
      const auto f = fmt(width, s, width / 3);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << width); ++bits) {
        ASSERT_EQ(f.encode(f.decode(bits)), bits);
      }
      EXPECT_EQ(f.decode(f.encode(f.min_raw())), f.min_raw());
    }
  }
  const FixedPointFormat q{3, 2, true};
  EXPECT_EQ(q.quantize(1.375), 6);  // 5.5 -> 6 (ties to even)
  EXPECT_EQ(q.quantize(1.125), 4);  // 4.5 -> 4
  EXPECT_EQ(q.quantize(-1.125), -4);
  EXPECT_EQ(q.quantize(1.375, RoundingMode::TowardZero), 5);
  EXPECT_EQ(q.quantize(-1.1, RoundingMode::Floor), -5);
  EXPECT_THROW((void)q.quantize(8.0), ValidationError);
  EXPECT_DOUBLE_EQ(q.to_double(-7), -1.75);
}

TEST(Adder, ExhaustiveUnsigned) {
  for (int na = 1; na <= 4; ++na) {
    for (int nb = 1; nb <= 4; ++nb) {
      Circuit c;
      const auto a = c.add_register("a", RegisterRole::BoxSum, fmt(na, false));
      const auto b = c.add_register("b", RegisterRole::BoxSum, fmt(nb, false));
      const auto o = c.add_register("o", RegisterRole::BoxSum, fmt(std::max(na, nb) + 1, false));
      build_adder(c, a, b, o);
      for (std::int64_t x = 0; x < (1 << na); ++x) {
        for (std::int64_t y = 0; y < (1 << nb); ++y) {
          std::vector<std::uint8_t> in(c.num_qubits(), 0);
          set_value(in, c.reg(a), x);
          set_value(in, c.reg(b), y);
          const auto out = run_basis(c, in);
          ASSERT_EQ(get_value(out.bits, c.reg(o)), x + y) << x << "+" << y;
          ASSERT_EQ(get_value(out.bits, c.reg(a)), x);
          ASSERT_EQ(get_value(out.bits, c.reg(b)), y);
          ASSERT_TRUE(only_registers_nonzero(c, out.bits, {a, b, o}));
          ASSERT_EQ(out.phase, 0.0);
        }
      }
      if (c.num_qubits() <= 18) {
        expect_identity_with_inverse(c);
      }
    }
  }
}

TEST(Adder, ExhaustiveSigned) {
  Circuit c;
  const auto a = c.add_register("a", RegisterRole::MomentReal, fmt(4, true));
  const auto b = c.add_register("b", RegisterRole::MomentReal, fmt(4, true));
  const auto o = c.add_register("o", RegisterRole::MomentReal, fmt(5, true));
  build_adder(c, a, b, o);
  for (std::int64_t x = -8; x < 8; ++x) {
    for (std::int64_t y = -8; y < 8; ++y) {
      std::vector<std::uint8_t> in(c.num_qubits(), 0);
      set_value(in, c.reg(a), x);
      set_value(in, c.reg(b), y);
      const auto out = run_basis(c, in);
      ASSERT_EQ(get_value(out.bits, c.reg(o)), x + y);
      ASSERT_TRUE(only_registers_nonzero(c, out.bits, {a, b, o}));
    }
  }
  std::vector<std::uint8_t> in(c.num_qubits(), 0);
  set_value(in, c.reg(a), -2);
  set_value(in, c.reg(b), 3);
  EXPECT_EQ(get_value(run_basis(c, in).bits, c.reg(o)), 1);
  expect_identity_with_inverse(c);
}

TEST(Adder, RejectsBadWidths) {
  Circuit c;
  const auto a = c.add_register("a", RegisterRole::BoxSum, fmt(4, false));
  const auto b = c.add_register("b", RegisterRole::BoxSum, fmt(4, false));
  const auto o = c.add_register("o", RegisterRole::BoxSum, fmt(4, false));
  EXPECT_THROW(build_adder(c, a, b, o), ValidationError);
  const auto f = c.add_register("f", RegisterRole::BoxSum, fmt(6, false, 1));
  EXPECT_THROW(build_adder(c, a, b, f), ValidationError);
}

TEST(Adder, InPlaceSubtractAndScaled) {
  Circuit c;
  const auto x = c.add_register("x", RegisterRole::MomentReal, fmt(3, true));
  const auto acc = c.add_register("acc", RegisterRole::Energy, fmt(8, true));
  add_scaled(c, Operand::of(c.reg(x)), -5, c.reg(acc).qubits);
  add_scaled(c, Operand::of(c.reg(x)), 3, c.reg(acc).qubits);
  for (std::int64_t v = -4; v < 4; ++v) {
    for (std::int64_t start : {-20, 0, 17}) {
      std::vector<std::uint8_t> in(c.num_qubits(), 0);
      set_value(in, c.reg(x), v);
      set_value(in, c.reg(acc), start);
      const auto out = run_basis(c, in);
      ASSERT_EQ(get_value(out.bits, c.reg(acc)), start - 2 * v);
      ASSERT_TRUE(only_registers_nonzero(c, out.bits, {x, acc}));
    }
  }
}

TEST(Multiplier, ExhaustiveAllSignCombinations) {
  for (bool sa : {false, true}) {
    for (bool sb : {false, true}) {
      Circuit c;
      const auto a = c.add_register("a", RegisterRole::BoxSum, fmt(3, sa, 1));
      const auto b = c.add_register("b", RegisterRole::BoxSum, fmt(3, sb));
      const auto o = c.add_register("o", RegisterRole::Product, fmt(6, sa || sb, 1));
      build_multiplier(c, a, b, o);
      const auto& fa = c.reg(a).format;
      const auto& fb = c.reg(b).format;
      for (std::int64_t x = fa.min_raw(); x <= fa.max_raw(); ++x) {
        for (std::int64_t y = fb.min_raw(); y <= fb.max_raw(); ++y) {
          std::vector<std::uint8_t> in(c.num_qubits(), 0);
          set_value(in, c.reg(a), x);
          set_value(in, c.reg(b), y);
          const auto out = run_basis(c, in);
          ASSERT_EQ(get_value(out.bits, c.reg(o)), x * y) << x << "*" << y;
          ASSERT_TRUE(only_registers_nonzero(c, out.bits, {a, b, o}));
        }
      }
    }
  }
}

TEST(Multiplier, IdentityAndZero) {
  Circuit c;
  const auto a = c.add_register("a", RegisterRole::BoxSum, fmt(3, false));
  const auto b = c.add_register("b", RegisterRole::BoxSum, fmt(3, false));
  const auto o = c.add_register("o", RegisterRole::Product, fmt(6, false));
  build_multiplier(c, a, b, o);
  for (std::int64_t y = 0; y < 8; ++y) {
    std::vector<std::uint8_t> in(c.num_qubits(), 0);
    set_value(in, c.reg(a), 1);
    set_value(in, c.reg(b), y);
    EXPECT_EQ(get_value(run_basis(c, in).bits, c.reg(o)), y);
    set_value(in, c.reg(a), 5);
    set_value(in, c.reg(b), 0);
    EXPECT_EQ(get_value(run_basis(c, in).bits, c.reg(o)), 0);
  }
  const auto small = c.add_register("s", RegisterRole::Product, fmt(5, false));
  EXPECT_THROW(build_multiplier(c, a, b, small), ValidationError);
}

TEST(ConstLoad, Patterns) {
  Circuit c;
  const auto ctl = c.add_register("q", RegisterRole::System, fmt(1, false));
  const auto t = c.add_register("t", RegisterRole::MomentReal, fmt(4, false));
  build_const_load(c, c.reg(ctl).qubits[0], 0b1101, t);
  std::vector<std::uint8_t> in(c.num_qubits(), 0);
  EXPECT_EQ(get_value(run_basis(c, in).bits, c.reg(t)), 0);
  in[c.reg(ctl).qubits[0]] = 1;
  EXPECT_EQ(get_value(run_basis(c, in).bits, c.reg(t)), 0b1101);

  Circuit s;
  const auto sc = s.add_register("q", RegisterRole::System, fmt(1, false));
  const auto st = s.add_register("t", RegisterRole::MomentReal, fmt(5, true, 2));
  const std::int64_t raw = s.reg(st).format.quantize(-1.25);
  build_const_load(s, s.reg(sc).qubits[0], raw, st);
  std::vector<std::uint8_t> in2(s.num_qubits(), 0);
  in2[s.reg(sc).qubits[0]] = 1;
  const auto out = run_basis(s, in2);
  EXPECT_EQ(get_value(out.bits, s.reg(st)), -5);
  EXPECT_EQ(out.bits[s.reg(st).qubits[4]], 1);
  EXPECT_THROW(build_const_load(s, s.reg(sc).qubits[0], 40, st), ValidationError);
}

TEST(PhaseLadder, MatchesDirectProduct) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (bool sgn : {false, true}) {
    Circuit c;
    const auto r = c.add_register("v", RegisterRole::Product, fmt(5, sgn, 2));
    const double t = u(rng);
    build_phase_ladder(c, r, t);
    const auto& f = c.reg(r).format;
    for (std::int64_t v = f.min_raw(); v <= f.max_raw(); ++v) {
      std::vector<std::uint8_t> in(c.num_qubits(), 0);
      set_value(in, c.reg(r), v);
      const auto out = run_basis(c, in);
      EXPECT_LT(phase_distance(out.phase, -t * f.to_double(v)), 1e-12);
    }
    expect_identity_with_inverse(c);
  }
  Circuit one;
  const auto r = one.add_register("v", RegisterRole::Product, fmt(3, false));
  build_phase_ladder(one, r, std::numbers::pi);
  std::vector<std::uint8_t> in(one.num_qubits(), 0);
  EXPECT_EQ(run_basis(one, in).phase, 0.0);
  in[one.reg(r).qubits[0]] = 1;
  EXPECT_NEAR(std::abs(std::polar(1.0, run_basis(one, in).phase) - Amplitude(-1.0)), 0.0, 1e-15);
}

TEST(Copy, TreeAndFanout) {
  for (bool fan : {false, true}) {
    Circuit c;
    const auto src = c.add_register("src", RegisterRole::BoxSum, fmt(4, false));
    std::vector<std::size_t> dests;
    for (int k = 0; k < 3; ++k) {
      dests.push_back(c.add_register("d", RegisterRole::Copy, fmt(4, false)));
    }
    build_copy(c, src, dests, fan);
    EXPECT_EQ(count_gates(c).fanout, fan ? 4U : 0U);
    for (std::int64_t v : {0, 0b1011}) {
      std::vector<std::uint8_t> in(c.num_qubits(), 0);
      set_value(in, c.reg(src), v);
      const auto out = run_basis(c, in);
      for (auto d : dests) {
        EXPECT_EQ(get_value(out.bits, c.reg(d)), v);
      }
      EXPECT_EQ(get_value(out.bits, c.reg(src)), v);
    }
    expect_identity_with_inverse(c);
  }
}

TEST(Invert, EmptyAndAngles) {
  Circuit empty;
  EXPECT_EQ(invert(empty).size(), 0U);
  Circuit c;
  const auto r = c.add_register("v", RegisterRole::Product, fmt(3, false));
  build_phase_ladder(c, r, 0.37);
  const auto inv = invert(c);
  ASSERT_EQ(inv.size(), c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_EQ(inv.gates()[k].angle, -c.gates()[c.size() - 1 - k].angle);
  }
  EXPECT_EQ(inv.blocks().size(), 1U);
}

TEST(Circuit, RejectsBadGates) {
  Circuit c;
  (void)c.add_register("v", RegisterRole::Product, fmt(3, false));
  EXPECT_THROW(c.cnot(0, 0), ValidationError);
  EXPECT_THROW(c.x(7), ValidationError);
  EXPECT_THROW(c.phase(0, std::nan("")), ValidationError);
}

TEST(Serialize, RoundTrip) {
  Circuit c;
  const auto a = c.add_register("a", RegisterRole::MomentReal, fmt(3, true, 1));
  const auto b = c.add_register("b", RegisterRole::MomentImag, fmt(3, false));
  const auto o = c.add_register("o", RegisterRole::Product, fmt(6, true, 1), 2, 5);
  build_multiplier(c, a, b, o);
  build_phase_ladder(c, o, 0.1 + 1e-17);
  c.add_route_hint(0, {c.reg(a).qubits[0]}, c.reg(b).qubits[0], 2);
  const std::vector<std::size_t> d{b};
  const auto src = c.add_register("s", RegisterRole::BoxSum, fmt(3, false));
  build_copy(c, src, d, true);
  c.append_inverse(0, c.size());
  c.cphase(0, 1, -1.0 / 3.0);

  const std::string text = to_text(c);
  const Circuit back = from_text(text);
  EXPECT_EQ(to_text(back), text);
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_EQ(back.gates()[k].angle, c.gates()[k].angle);
    EXPECT_EQ(back.gates()[k].kind, c.gates()[k].kind);
  }
  EXPECT_EQ(back.registers().size(), c.registers().size());
  EXPECT_EQ(back.blocks().size(), c.blocks().size());
  EXPECT_EQ(back.route_hints().size(), c.route_hints().size());

  EXPECT_THROW((void)from_text("garbage\n"), ValidationError);
  EXPECT_THROW((void)from_text("# q2fmm circuit v1\nqubits 2\ngates 1\nCNOT 0\n"), ValidationError);
}

TEST(Statevector, AgreesWithBasisRuns) {
  Circuit c;
  const auto a = c.add_register("a", RegisterRole::BoxSum, fmt(2, false));
  const auto b = c.add_register("b", RegisterRole::BoxSum, fmt(2, false));
  const auto o = c.add_register("o", RegisterRole::Product, fmt(4, false));
  build_multiplier(c, a, b, o);
  build_phase_ladder(c, o, 0.731);
  const std::vector<std::size_t> d{o};
  (void)d;
  const int n = static_cast<int>(c.num_qubits());
  ASSERT_LE(n, 22);
  // Uniform superposition over the inputs a, b (ancillae zero).
  Statevector psi(n);
  auto& amp = psi.amplitudes();
  amp.assign(amp.size(), 0.0);
  for (std::uint64_t in = 0; in < 16; ++in) {
    amp[in] = 0.25;
  }
  const auto out = run_statevector(c, psi);
  EXPECT_NEAR(out.norm(), 1.0, 1e-10);
  for (std::uint64_t in = 0; in < 16; ++in) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
    for (int q = 0; q < 4; ++q) {
      bits[static_cast<std::size_t>(q)] = (in >> q) & 1U;
    }
    const auto r = run_basis(c, bits);
    std::uint64_t idx = 0;
    for (int q = 0; q < n; ++q) {
      idx |= static_cast<std::uint64_t>(r.bits[static_cast<std::size_t>(q)]) << q;
    }
    EXPECT_NEAR(std::abs(out.amplitudes()[idx] - 0.25 * std::polar(1.0, r.phase)), 0.0, 1e-10);
  }
  EXPECT_THROW(Statevector(23), ValidationError);
}

}  // namespace
}  // namespace q2fmm
