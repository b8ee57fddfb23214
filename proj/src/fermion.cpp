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

#include "q2fmm/fermion.hpp"

#include "q2fmm/multipole.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <complex>
#include <string>

namespace q2fmm {

FockSectors::FockSectors(int modes) : modes_(modes) {
  if (modes < 1 || modes > kMaxModes) {
    throw ValidationError("dense fermion oracle supports 1.." + std::to_string(kMaxModes) +
                          " modes (dimension <= 4096), got " + std::to_string(modes));
  }
  states_.resize(static_cast<std::size_t>(modes + 1));
  position_.resize(static_cast<std::size_t>(dimension()));
  for (std::uint64_t k = 0; k < dimension(); ++k) {
    auto& s = states_[static_cast<std::size_t>(std::popcount(k))];
    position_[k] = static_cast<int>(s.size());
    s.push_back(k);
  }
}

namespace {

std::vector<std::pair<int, int>> bonds(const LatticeSpec& lat) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < lat.height; ++y) {
    for (int x = 0; x < lat.width; ++x) {
      if (x + 1 < lat.width) {
        out.push_back({lat.site_index(x, y), lat.site_index(x + 1, y)});
      }
      if (y + 1 < lat.height) {
        out.push_back({lat.site_index(x, y), lat.site_index(x, y + 1)});
      }
    }
  }
  return out;
}

// Sign of c+_i c_j acting on a state with mode j occupied and i empty.
double hop_sign(std::uint64_t state, int i, int j) {
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  const std::uint64_t between = ((std::uint64_t{1} << hi) - 1) & ~((std::uint64_t{2} << lo) - 1);
  return (std::popcount(state & between) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

Eigen::MatrixXd hamiltonian_block(const LatticeSpec& lattice, const FockSectors& sectors, int n,
                                  HamiltonianTerms terms) {
  lattice.validate();
  if (lattice.num_modes() != sectors.modes()) {
    throw ValidationError("sector table does not match the lattice mode count");
  }
  const auto& basis = sectors.states(n);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const int mps = lattice.modes_per_site();
  const auto bond_list = bonds(lattice);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t s = basis[static_cast<std::size_t>(col)];
    const FockState fs = FockState::from_basis_index(lattice, s);
    double diag = 0.0;
    if (terms.coulomb) {
      diag += brute_force_energy(lattice, fs);
    }
    if (terms.onsite && lattice.spinful) {
      for (int site = 0; site < lattice.num_sites(); ++site) {
        diag += fs.doubly_occupied(site) ? lattice.onsite_v0 : 0.0;
      }
    }
    h(col, col) += diag;
    if (!terms.hopping) {
      continue;
    }
    for (const auto& [a, b] : bond_list) {
      for (int spin = 0; spin < mps; ++spin) {
        const int ma = a * mps + spin;
        const int mb = b * mps + spin;
        for (const auto& [to, from] : {std::pair{ma, mb}, std::pair{mb, ma}}) {
          const std::uint64_t bit_to = std::uint64_t{1} << to;
          const std::uint64_t bit_from = std::uint64_t{1} << from;
          if ((s & bit_from) == 0 || (s & bit_to) != 0) {
            continue;
          }
          const std::uint64_t t = (s ^ bit_from) | bit_to;
          h(sectors.position(t), col) += -lattice.hopping_t * hop_sign(s, to, from);
        }
      }
    }
  }
  return h;
}

SectorOperator::SectorOperator(const FockSectors& sectors, std::vector<Eigen::MatrixXcd> blocks)
    : sectors_(&sectors), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != sectors.num_sectors()) {
    throw ValidationError("sector operator needs one block per particle number");
  }
}

SectorOperator SectorOperator::identity(const FockSectors& sectors) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (int n = 0; n < sectors.num_sectors(); ++n) {
    const auto d = static_cast<Eigen::Index>(sectors.states(n).size());
    blocks.push_back(Eigen::MatrixXcd::Identity(d, d));
  }
  return {sectors, std::move(blocks)};
}

SectorOperator SectorOperator::diagonal(const FockSectors& sectors, const Eigen::VectorXd& phase) {
  if (static_cast<std::uint64_t>(phase.size()) != sectors.dimension()) {
    throw ValidationError("diagonal phase vector has the wrong length");
  }
  std::vector<Eigen::MatrixXcd> blocks;
  for (int n = 0; n < sectors.num_sectors(); ++n) {
    const auto& st = sectors.states(n);
    Eigen::VectorXcd d(static_cast<Eigen::Index>(st.size()));
    for (std::size_t k = 0; k < st.size(); ++k) {
      d(static_cast<Eigen::Index>(k)) = std::polar(1.0, phase(static_cast<Eigen::Index>(st[k])));
    }
    blocks.push_back(d.asDiagonal());
  }
  return {sectors, std::move(blocks)};
}

Eigen::MatrixXcd SectorOperator::dense() const {
  const auto dim = static_cast<Eigen::Index>(sectors_->dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < sectors_->num_sectors(); ++n) {
    const auto& st = sectors_->states(n);
    const auto& b = blocks_[static_cast<std::size_t>(n)];
    for (std::size_t r = 0; r < st.size(); ++r) {
      for (std::size_t c = 0; c < st.size(); ++c) {
        out(static_cast<Eigen::Index>(st[r]), static_cast<Eigen::Index>(st[c])) =
            b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return out;
}

Eigen::MatrixXcd SectorOperator::apply(const Eigen::MatrixXcd& states) const {
  if (static_cast<std::uint64_t>(states.rows()) != sectors_->dimension()) {
    throw ValidationError("state block has the wrong dimension");
  }
  Eigen::MatrixXcd out(states.rows(), states.cols());
  for (int n = 0; n < sectors_->num_sectors(); ++n) {
    const auto& st = sectors_->states(n);
    const auto d = static_cast<Eigen::Index>(st.size());
    Eigen::MatrixXcd in(d, states.cols());
    for (Eigen::Index r = 0; r < d; ++r) {
      in.row(r) = states.row(static_cast<Eigen::Index>(st[static_cast<std::size_t>(r)]));
    }
    const Eigen::MatrixXcd res = blocks_[static_cast<std::size_t>(n)] * in;
    for (Eigen::Index r = 0; r < d; ++r) {
      out.row(static_cast<Eigen::Index>(st[static_cast<std::size_t>(r)])) = res.row(r);
    }
  }
  return out;
}

SectorOperator SectorOperator::operator*(const SectorOperator& rhs) const {
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t n = 0; n < blocks_.size(); ++n) {
    blocks.push_back(blocks_[n] * rhs.blocks_[n]);
  }
  return {*sectors_, std::move(blocks)};
}

SectorOperator SectorOperator::pow(int k) const {
  if (k < 0) {
    throw ValidationError("negative operator power");
  }
  SectorOperator result = identity(*sectors_);
  SectorOperator base = *this;
  while (k > 0) {
    if (k & 1) {
      result = result * base;
    }
    k >>= 1;
    if (k > 0) {
      base = base * base;
    }
  }
  return result;
}

double SectorOperator::distance(const SectorOperator& rhs) const {
  double worst = 0.0;
  for (std::size_t n = 0; n < blocks_.size(); ++n) {
    const Eigen::MatrixXcd d = blocks_[n] - rhs.blocks_[n];
    if (d.size() == 0) {
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
    worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

SectorOperator evolution(const LatticeSpec& lattice, const FockSectors& sectors, double t,
                         HamiltonianTerms terms) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (int n = 0; n < sectors.num_sectors(); ++n) {
    const Eigen::MatrixXd h = hamiltonian_block(lattice, sectors, n, terms);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd phase(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
      phase(k) = std::polar(1.0, -t * es.eigenvalues()(k));
    }
    blocks.push_back(v * phase.asDiagonal() * v.adjoint());
  }
  return {sectors, std::move(blocks)};
}

Eigen::MatrixXcd exact_evolution(const LatticeSpec& lattice, double t) {
  const FockSectors sectors(lattice.num_modes());
  return evolution(lattice, sectors, t).dense();
}

Eigen::VectorXd coulomb_diagonal(const LatticeSpec& lattice) {
  const FockSectors sectors(lattice.num_modes());
  Eigen::VectorXd out(static_cast<Eigen::Index>(sectors.dimension()));
  for (std::uint64_t k = 0; k < sectors.dimension(); ++k) {
    out(static_cast<Eigen::Index>(k)) = brute_force_energy(lattice, FockState::from_basis_index(lattice, k));
  }
  return out;
}

}  // namespace q2fmm
