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

#include "q2fmm/csv.hpp"
#include "q2fmm/fermion.hpp"
#include "q2fmm/fit.hpp"
#include "q2fmm/hierarchy.hpp"
#include "q2fmm/multipole.hpp"
#include "q2fmm/simulator.hpp"
#include "q2fmm/synthesizer.hpp"
#include "q2fmm/trotter.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <complex>
#include <sstream>

namespace q2fmm {
namespace {

using Cd = std::complex<double>;

LatticeSpec lattice(int w, int h, bool spinful = false) {
  LatticeSpec l;
  l.width = w;
  l.height = h;
  l.spinful = spinful;
  l.hopping_t = 1.0;
  l.onsite_v0 = spinful ? 2.5 : 0.0;
  l.electron_count_q = l.max_occupancy();
  return l;
}

// Annihilator of mode j on m modes, built from Kronecker products of Z and a.
Eigen::MatrixXd annihilator(int m, int j) {
  Eigen::MatrixXd z(2, 2);
  z << 1, 0, 0, -1;
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 0, 0;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  // Bit k of the basis index is mode k, so mode 0 is the fastest index.
  for (int k = m - 1; k >= 0; --k) {
    const Eigen::MatrixXd f = k == j ? a : (k < j ? z : Eigen::MatrixXd::Identity(2, 2));
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
      }
    }
    out = next;
  }
  return out;
}

Eigen::MatrixXd jordan_wigner_hamiltonian(const LatticeSpec& l) {
  const int m = l.num_modes();
  const int mps = l.modes_per_site();
  std::vector<Eigen::MatrixXd> c;
  for (int j = 0; j < m; ++j) {
    c.push_back(annihilator(m, j));
  }
  const auto dim = Eigen::Index{1} << m;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < l.num_sites(); ++a) {
    for (int b = a + 1; b < l.num_sites(); ++b) {
      const int dx = std::abs(l.site_x(a) - l.site_x(b));
      const int dy = std::abs(l.site_y(a) - l.site_y(b));
      if (dx + dy != 1) {
        continue;
      }
      for (int s = 0; s < mps; ++s) {
        const auto& ca = c[static_cast<std::size_t>(a * mps + s)];
        const auto& cb = c[static_cast<std::size_t>(b * mps + s)];
        h -= l.hopping_t * (ca.transpose() * cb + cb.transpose() * ca);
      }
    }
  }
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto s = FockState::from_basis_index(l, static_cast<std::uint64_t>(k));
    h(k, k) += brute_force_energy(l, s);
    for (int site = 0; site < l.num_sites(); ++site) {
      h(k, k) += s.doubly_occupied(site) ? l.onsite_v0 : 0.0;
    }
  }
  return h;
}

TEST(FockSectors, GroupsByParticleNumber) {
  const FockSectors s(4);
  EXPECT_EQ(s.dimension(), 16U);
  EXPECT_EQ(s.states(2).size(), 6U);
  EXPECT_EQ(s.states(2)[0], 3U);
  EXPECT_EQ(s.position(12), 5);
  EXPECT_THROW(FockSectors(13), ValidationError);
}

TEST(Hamiltonian, MatchesJordanWignerProducts) {
  for (const auto& l : {lattice(2, 2, true), lattice(3, 2), lattice(3, 3)}) {
    const FockSectors sectors(l.num_modes());
    const Eigen::MatrixXd ref = jordan_wigner_hamiltonian(l);
    for (int n = 0; n < sectors.num_sectors(); ++n) {
      const Eigen::MatrixXd blk = hamiltonian_block(l, sectors, n);
      const auto& st = sectors.states(n);
      for (std::size_t r = 0; r < st.size(); ++r) {
        for (std::size_t c = 0; c < st.size(); ++c) {
          ASSERT_NEAR(blk(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)),
                      ref(static_cast<Eigen::Index>(st[r]), static_cast<Eigen::Index>(st[c])), 1e-12)
              << l.width << "x" << l.height << " n=" << n;
        }
      }
    }
  }
}

TEST(Hamiltonian, ConservesParticleNumber) {
  const auto l = lattice(2, 2, true);
  const Eigen::MatrixXd ref = jordan_wigner_hamiltonian(l);
  for (Eigen::Index r = 0; r < ref.rows(); ++r) {
    for (Eigen::Index c = 0; c < ref.cols(); ++c) {
      if (std::popcount(static_cast<unsigned>(r)) != std::popcount(static_cast<unsigned>(c))) {
        ASSERT_EQ(ref(r, c), 0.0);
      }
    }
  }
}

TEST(ExactEvolution, TimeZeroIsIdentity) {
  const Eigen::MatrixXcd u = exact_evolution(lattice(3, 3), 0.0);
  EXPECT_LT((u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm(), 1e-12);
}

TEST(ExactEvolution, CoulombOnlyIsDiagonal) {
  auto l = lattice(2, 2);
  l.hopping_t = 0.0;
  const Eigen::MatrixXcd u = exact_evolution(l, 0.7);
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const double e = brute_force_energy(l, FockState::from_basis_index(l, static_cast<std::uint64_t>(k)));
    EXPECT_NEAR(std::abs(u(k, k) - std::polar(1.0, -0.7 * e)), 0.0, 1e-12);
    EXPECT_NEAR(u.row(k).norm(), 1.0, 1e-12);
  }
}

TEST(ExactEvolution, TwoSiteHoppingRotation) {
  const auto l = lattice(2, 1);
  const double t = 0.4;
  const FockSectors sectors(2);
  const auto u = evolution(l, sectors, t, {true, false, false});
  const auto& b = u.blocks()[1];
  EXPECT_NEAR(std::abs(b(0, 0) - Cd(std::cos(t), 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(b(0, 1) - Cd(0.0, std::sin(t))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(b(1, 0) - Cd(0.0, std::sin(t))), 0.0, 1e-12);
}

TEST(ExactEvolution, IsUnitary) {
  const Eigen::MatrixXcd u = exact_evolution(lattice(2, 2, true), 1.3);
  EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm(), 1e-10);
}

TEST(ExactEvolution, RejectsLargeLattices) {
  EXPECT_THROW((void)exact_evolution(lattice(4, 4), 1.0), ValidationError);
  EXPECT_THROW((void)exact_evolution(lattice(3, 3, true), 1.0), ValidationError);
}

TEST(SectorOperator, PowerMatchesRepeatedProduct) {
  const auto l = lattice(3, 2);
  const FockSectors sectors(l.num_modes());
  const auto u = evolution(l, sectors, 0.05);
  auto prod = SectorOperator::identity(sectors);
  for (int k = 0; k < 7; ++k) {
    prod = prod * u;
  }
  EXPECT_LT(prod.distance(u.pow(7)), 1e-12);
  EXPECT_LT(u.pow(20).distance(evolution(l, sectors, 1.0)), 1e-10);
}

TEST(Trotter, ZeroStepIsIdentity) {
  const auto l = lattice(3, 3);
  const FockSectors sectors(l.num_modes());
  const auto u = trotter_step(l, sectors, exact_coulomb_phases(l, 0.0), 0.0, 2);
  EXPECT_LT(u.distance(SectorOperator::identity(sectors)), 1e-12);
}

TEST(Trotter, ExactWhenTermsCommute) {
  auto l = lattice(2, 2, true);
  l.hopping_t = 0.0;
  const FockSectors sectors(l.num_modes());
  for (int order : {1, 2}) {
    const auto u = trotter_step(l, sectors, exact_coulomb_phases(l, 0.25), 0.25, order).pow(4);
    EXPECT_LT(u.distance(evolution(l, sectors, 1.0)), 1e-12);
  }
}

TEST(Trotter, CircuitPhasesMatchExactCoulombOnTwoByTwo) {
  for (bool spinful : {false, true}) {
    const auto l = lattice(2, 2, spinful);
    SynthesisOptions o;
    o.spinful = spinful;
    o.delta_t = 0.3;
    const Circuit c = synthesize(BoxHierarchy::build(l), o);
    const Eigen::VectorXd cc = circuit_coulomb_phases(c, l, 0.3);
    const Eigen::VectorXd ex = exact_coulomb_phases(l, 0.3);
    for (Eigen::Index k = 0; k < cc.size(); ++k) {
      ASSERT_LT(phase_distance(cc(k), ex(k)), 1e-9) << k;
    }
  }
}

TEST(Trotter, CircuitPhasesNeedFullQ) {
  auto l = lattice(2, 2);
  l.electron_count_q = 2;
  SynthesisOptions o;
  const Circuit c = synthesize(BoxHierarchy::build(l), o);
  EXPECT_THROW((void)circuit_coulomb_phases(c, l, 0.1), ValidationError);
}

TEST(TrotterSweep, SecondOrderQuartersOnDoubling) {
  TrotterSweepOptions o;
  o.samples = 20;
  const auto rows = trotter_error_sweep(lattice(3, 2), 1.0, {8, 16, 32}, o);
  ASSERT_EQ(rows.size(), 3U);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double ratio = rows[k - 1].trotter_error / rows[k].trotter_error;
    EXPECT_NEAR(ratio, 4.0, 0.6);
    EXPECT_LE(rows[k].trotter_error, rows[k].trotter_spectral + 1e-12);
  }
}

TEST(TrotterSweep, FirstOrderHalvesOnDoubling) {
  TrotterSweepOptions o;
  o.order = 1;
  o.samples = 20;
  const auto rows = trotter_error_sweep(lattice(3, 2), 1.0, {16, 32, 64}, o);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_NEAR(rows[k - 1].trotter_error / rows[k].trotter_error, 2.0, 0.3);
  }
}

TEST(TrotterSweep, ConvergesForManySteps) {
  TrotterSweepOptions o;
  o.samples = 10;
  const auto rows = trotter_error_sweep(lattice(2, 2), 1.0, {1 << 16}, o);
  EXPECT_LT(rows[0].trotter_error, 1e-8);
}

TEST(TrotterSweep, CircuitRunSeparatesFmmPart) {
  TrotterSweepOptions o;
  o.samples = 10;
  o.fmm_order = 0;
  const auto rows = trotter_error_sweep(lattice(2, 2, true), 1.0, {4, 8}, o);
  for (const auto& r : rows) {
    EXPECT_LT(r.fmm_error, 1e-9);
    EXPECT_LT(r.max_phase_error, 1e-9);
    EXPECT_NEAR(r.total_error, r.trotter_error, 1e-9);
  }
}

TEST(TrotterSweep, DeterministicForSeed) {
  TrotterSweepOptions o;
  o.samples = 5;
  const auto a = trotter_csv_rows(trotter_error_sweep(lattice(2, 2), 1.0, {4}, o));
  const auto b = trotter_csv_rows(trotter_error_sweep(lattice(2, 2), 1.0, {4}, o));
  EXPECT_EQ(a, b);
  o.seed += 1;
  const auto c = trotter_csv_rows(trotter_error_sweep(lattice(2, 2), 1.0, {4}, o));
  EXPECT_NE(a, c);
}

TEST(Csv, QuotesAndRoundTrips) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::ostringstream os;
  const std::vector<std::string> header = {"name", "value"};
  const std::vector<std::vector<std::string>> rows = {{"x,y", "1"}, {"line\nbreak", "\"q\""}};
  write_csv(os, header, rows);
  const auto back = read_csv(os.str());
  ASSERT_EQ(back.size(), 3U);
  EXPECT_EQ(back[0], header);
  EXPECT_EQ(back[1], rows[0]);
  EXPECT_EQ(back[2], rows[1]);
  EXPECT_THROW(write_csv(os, header, {{"only one"}}), ValidationError);
}

TEST(Csv, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Fit, RecoversExactLines) {
  const auto f = fit_linear({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_NEAR(fit_loglog({1, 2, 4}, {1, 4, 16}).slope, 2.0, 1e-12);
  EXPECT_THROW((void)fit_linear({1, 1}, {2, 3}), ValidationError);
}

TEST(Fit, RanksScalingCandidates) {
  std::vector<double> n;
  std::vector<double> q;
  std::vector<double> y;
  for (double k : {16.0, 64.0, 256.0, 1024.0, 4096.0}) {
    n.push_back(k);
    q.push_back(k / 2);
    y.push_back(5.0 + 3.0 * std::sqrt(k));
  }
  const auto fits = fit_scaling_candidates(n, q, y);
  EXPECT_EQ(fits.front().form, "sqrt(N)");
  EXPECT_NEAR(fits.front().fit.r2, 1.0, 1e-12);
  EXPECT_LT(fits.back().fit.r2, 0.99);
}

}  // namespace
}  // namespace q2fmm
