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

#include "q2fmm/trotter.hpp"

#include "q2fmm/csv.hpp"
#include "q2fmm/hierarchy.hpp"
#include "q2fmm/simulator.hpp"
#include "q2fmm/synthesizer.hpp"

#include <cmath>
#include <random>
#include <string>

namespace q2fmm {

Eigen::VectorXd exact_coulomb_phases(const LatticeSpec& lattice, double delta_t) {
  return -delta_t * coulomb_diagonal(lattice);
}

Eigen::VectorXd circuit_coulomb_phases(const Circuit& c, const LatticeSpec& lattice,
                                       double delta_t, int jobs) {
  if (lattice.electron_count_q < lattice.num_modes()) {
    throw ValidationError("circuit phases over the full Fock space need Q >= " +
                          std::to_string(lattice.num_modes()));
  }
  if (static_cast<int>(system_qubits(c).size()) != lattice.num_modes()) {
    throw ValidationError("circuit system qubits do not match the lattice");
  }
  const PhaseCheck pc = evaluate_all_phases(c, jobs);
  if (!pc.ancillae_restored || !pc.system_preserved) {
    throw ValidationError("circuit is not diagonal on the system register");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(pc.phases.size()));
  for (std::size_t k = 0; k < pc.phases.size(); ++k) {
    double phase = pc.phases[k];
    if (lattice.spinful) {
      const FockState s = FockState::from_basis_index(lattice, k);
      for (int site = 0; site < lattice.num_sites(); ++site) {
        phase += s.doubly_occupied(site) ? delta_t * lattice.onsite_v0 : 0.0;
      }
    }
    out(static_cast<Eigen::Index>(k)) = wrap_phase(phase);
  }
  return out;
}

SectorOperator trotter_step(const LatticeSpec& lattice, const FockSectors& sectors,
                            const Eigen::VectorXd& coulomb_phase, double delta_t, int order) {
  if (order != 1 && order != 2) {
    throw ValidationError("trotter order must be 1 or 2");
  }
  const HamiltonianTerms kinetic{true, true, false};
  const SectorOperator d = SectorOperator::diagonal(sectors, coulomb_phase);
  if (order == 1) {
    return evolution(lattice, sectors, delta_t, kinetic) * d;
  }
  const SectorOperator half = evolution(lattice, sectors, 0.5 * delta_t, kinetic);
  return half * d * half;
}

namespace {

Eigen::MatrixXcd haar_states(std::uint64_t dim, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(dim), samples);
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index k = 0; k < out.rows(); ++k) {
      const double re = g(rng);
      const double im = g(rng);
      out(k, s) = {re, im};
    }
    out.col(s).normalize();
  }
  return out;
}

double max_column_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).colwise().norm().maxCoeff();
}

}  // namespace

std::vector<TrotterErrorRow> trotter_error_sweep(const LatticeSpec& lattice, double t_total,
                                                 const std::vector<int>& step_counts,
                                                 const TrotterSweepOptions& opts) {
  lattice.validate();
  if (!(t_total > 0.0) || !std::isfinite(t_total)) {
    throw ValidationError("total evolution time must be positive and finite");
  }
  if (opts.samples < 1) {
    throw ValidationError("trotter sweep needs at least one sample");
  }
  const FockSectors sectors(lattice.num_modes());
  const SectorOperator exact = evolution(lattice, sectors, t_total);
  const Eigen::MatrixXcd psi = haar_states(sectors.dimension(), opts.samples, opts.seed);
  const Eigen::MatrixXcd reference = exact.apply(psi);

  std::vector<TrotterErrorRow> rows;
  for (int d : step_counts) {
    if (d < 1) {
      throw ValidationError("step counts must be positive");
    }
    TrotterErrorRow row;
    row.steps = d;
    row.delta_t = t_total / d;
    const Eigen::VectorXd vc = exact_coulomb_phases(lattice, row.delta_t);
    const SectorOperator trot = trotter_step(lattice, sectors, vc, row.delta_t, opts.order).pow(d);
    const Eigen::MatrixXcd trot_out = trot.apply(psi);
    row.trotter_error = max_column_distance(trot_out, reference);
    row.trotter_spectral = trot.distance(exact);
    row.total_error = row.trotter_error;
    if (opts.fmm_order >= 0) {
      SynthesisOptions so;
      so.order_p = opts.fmm_order;
      so.eps_b = opts.eps_b;
      so.delta_t = row.delta_t;
      so.trotter_order = opts.order;
      so.spinful = lattice.spinful;
      const BoxHierarchy h = BoxHierarchy::build(lattice);
      const Circuit c = synthesize(h, so);
      const Eigen::VectorXd cc = circuit_coulomb_phases(c, lattice, row.delta_t, opts.jobs);
      for (Eigen::Index k = 0; k < cc.size(); ++k) {
        row.max_phase_error = std::max(row.max_phase_error, phase_distance(cc(k), vc(k)));
      }
      const Eigen::MatrixXcd circ_out =
          trotter_step(lattice, sectors, cc, row.delta_t, opts.order).pow(d).apply(psi);
      row.total_error = max_column_distance(circ_out, reference);
      row.fmm_error = max_column_distance(circ_out, trot_out);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::string> trotter_csv_header() {
  return {"steps", "delta_t", "total_error", "trotter_error", "fmm_error", "trotter_spectral",
          "max_phase_error"};
}

std::vector<std::vector<std::string>> trotter_csv_rows(const std::vector<TrotterErrorRow>& rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    out.push_back({std::to_string(r.steps), format_double(r.delta_t), format_double(r.total_error),
                   format_double(r.trotter_error), format_double(r.fmm_error),
                   format_double(r.trotter_spectral), format_double(r.max_phase_error)});
  }
  return out;
}

}  // namespace q2fmm
