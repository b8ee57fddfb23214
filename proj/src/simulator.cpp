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

#include "q2fmm/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace q2fmm {

double wrap_phase(double angle) {
  const double r = std::remainder(angle, 2.0 * std::numbers::pi);
  return r;
}

double phase_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

void run_basis_batch(const Circuit& c, BasisBatch& batch) {
  if (batch.words.size() != c.num_qubits()) {
    throw ValidationError("batch holds " + std::to_string(batch.words.size()) +
                          " qubits, circuit has " + std::to_string(c.num_qubits()));
  }
  if (batch.lanes < 0 || batch.lanes > 64) {
    throw ValidationError("batch lane count must lie in [0, 64]");
  }
  batch.phase.resize(static_cast<std::size_t>(batch.lanes), 0.0);
  auto& w = batch.words;
  const std::uint64_t live = batch.lanes == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << batch.lanes) - 1);
  auto add_phase = [&](std::uint64_t mask, double angle) {
    mask &= live;
    while (mask != 0) {
      const int lane = std::countr_zero(mask);
      batch.phase[static_cast<std::size_t>(lane)] += angle;
      mask &= mask - 1;
    }
  };
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Not:
        w[g.q[0]] = ~w[g.q[0]];
        break;
      case GateKind::Cnot:
        w[g.q[1]] ^= w[g.q[0]];
        break;
      case GateKind::Toffoli:
        w[g.q[2]] ^= w[g.q[0]] & w[g.q[1]];
        break;
      case GateKind::Swap:
        std::swap(w[g.q[0]], w[g.q[1]]);
        break;
      case GateKind::Phase:
        add_phase(w[g.q[0]], g.angle);
        break;
      case GateKind::CPhase:
        add_phase(w[g.q[0]] & w[g.q[1]], g.angle);
        break;
      case GateKind::Fanout:
        for (Qubit t : c.fanout_targets(g)) {
          w[t] ^= w[g.q[0]];
        }
        break;
    }
  }
}

BasisOutcome run_basis(const Circuit& c, std::span<const std::uint8_t> input) {
  if (input.size() != c.num_qubits()) {
    throw ValidationError("input has " + std::to_string(input.size()) + " bits, circuit has " +
                          std::to_string(c.num_qubits()) + " qubits");
  }
  BasisBatch batch;
  batch.lanes = 1;
  batch.words.resize(input.size());
  for (std::size_t q = 0; q < input.size(); ++q) {
    batch.words[q] = input[q] & 1U;
  }
  run_basis_batch(c, batch);
  BasisOutcome out;
  out.bits.resize(input.size());
  for (std::size_t q = 0; q < input.size(); ++q) {
    out.bits[q] = static_cast<std::uint8_t>(batch.words[q] & 1U);
  }
  out.phase = wrap_phase(batch.phase[0]);
  return out;
}

std::vector<Qubit> system_qubits(const Circuit& c) {
  std::vector<Qubit> out;
  for (const auto& r : c.registers()) {
    if (r.role == RegisterRole::System) {
      out.insert(out.end(), r.qubits.begin(), r.qubits.end());
    }
  }
  return out;
}

namespace {

// Runs lanes [first, first + count) where `bit(state, k)` gives system bit k.
template <class BitFn>
void run_chunk(const Circuit& c, const std::vector<Qubit>& sys, const std::vector<bool>& anc,
               std::size_t first, std::size_t count, BitFn bit, PhaseCheck& out) {
  BasisBatch batch;
  for (std::size_t base = first; base < first + count; base += 64) {
    const std::size_t lanes = std::min<std::size_t>(64, first + count - base);
    batch.lanes = static_cast<int>(lanes);
    batch.words.assign(c.num_qubits(), 0);
    batch.phase.assign(lanes, 0.0);
    std::vector<std::uint64_t> in(sys.size(), 0);
    for (std::size_t l = 0; l < lanes; ++l) {
      for (std::size_t k = 0; k < sys.size(); ++k) {
        if (bit(base + l, k)) {
          in[k] |= std::uint64_t{1} << l;
        }
      }
    }
    for (std::size_t k = 0; k < sys.size(); ++k) {
      batch.words[sys[k]] = in[k];
    }
    run_basis_batch(c, batch);
    const std::uint64_t live = lanes == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << lanes) - 1);
    for (std::size_t k = 0; k < sys.size(); ++k) {
      if (((batch.words[sys[k]] ^ in[k]) & live) != 0) {
        out.system_preserved = false;
      }
    }
    for (Qubit q = 0; q < c.num_qubits(); ++q) {
      if (anc[q] && (batch.words[q] & live) != 0) {
        out.ancillae_restored = false;
      }
    }
    for (std::size_t l = 0; l < lanes; ++l) {
      out.phases[base + l] = wrap_phase(batch.phase[l]);
    }
  }
}

template <class BitFn>
PhaseCheck run_all(const Circuit& c, std::size_t n, int jobs, BitFn bit) {
  const auto sys = system_qubits(c);
  const auto anc = c.ancilla_mask();
  PhaseCheck out;
  out.phases.assign(n, 0.0);
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                                                      std::max<std::size_t>(1, (n + 63) / 64));
  if (workers == 1) {
    run_chunk(c, sys, anc, 0, n, bit, out);
    return out;
  }
  // Chunks are multiples of 64 states; results land in fixed slots, so the
  // output does not depend on the worker count.
  const std::size_t per = ((n + 63) / 64 + workers - 1) / workers * 64;
  std::vector<PhaseCheck> partial(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t first = w * per;
    if (first >= n) {
      break;
    }
    const std::size_t count = std::min(per, n - first);
    partial[w].phases.assign(n, 0.0);
    pool.emplace_back([&, w, first, count] { run_chunk(c, sys, anc, first, count, bit, partial[w]); });
  }
  for (auto& t : pool) {
    t.join();
  }
  for (std::size_t w = 0; w < pool.size(); ++w) {
    const std::size_t first = w * per;
    const std::size_t count = std::min(per, n - first);
    std::copy_n(partial[w].phases.begin() + static_cast<std::ptrdiff_t>(first), count,
                out.phases.begin() + static_cast<std::ptrdiff_t>(first));
    out.ancillae_restored = out.ancillae_restored && partial[w].ancillae_restored;
    out.system_preserved = out.system_preserved && partial[w].system_preserved;
  }
  return out;
}

}  // namespace

PhaseCheck evaluate_phases(const Circuit& c, std::span<const FockState> states, int jobs) {
  const std::size_t m = system_qubits(c).size();
  for (const auto& s : states) {
    if (s.modes().size() != m) {
      throw ValidationError("state has " + std::to_string(s.modes().size()) +
                            " modes, circuit has " + std::to_string(m) + " system qubits");
    }
  }
  return run_all(c, states.size(), jobs,
                 [&](std::size_t i, std::size_t k) { return states[i].modes()[k] != 0; });
}

PhaseCheck evaluate_all_phases(const Circuit& c, int jobs) {
  const std::size_t m = system_qubits(c).size();
  if (m > 24) {
    throw ValidationError("exhaustive evaluation supports at most 24 system qubits");
  }
  return run_all(c, std::size_t{1} << m, jobs,
                 [](std::size_t i, std::size_t k) { return ((i >> k) & 1U) != 0; });
}

Statevector::Statevector(int num_qubits, int cap) : n_(num_qubits) {
  if (num_qubits < 0 || num_qubits > cap) {
    throw ValidationError("statevector of " + std::to_string(num_qubits) +
                          " qubits exceeds the cap of " + std::to_string(cap));
  }
  amp_.assign(std::size_t{1} << num_qubits, 0.0);
  amp_[0] = 1.0;
}

Statevector Statevector::basis(int num_qubits, std::uint64_t index, int cap) {
  Statevector s(num_qubits, cap);
  if (index >= s.amp_.size()) {
    throw ValidationError("basis index out of range");
  }
  s.amp_[0] = 0.0;
  s.amp_[index] = 1.0;
  return s;
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) {
    s += std::norm(a);
  }
  return std::sqrt(s);
}

Statevector run_statevector(const Circuit& c, Statevector psi) {
  if (static_cast<std::uint32_t>(psi.num_qubits()) != c.num_qubits()) {
    throw ValidationError("statevector has " + std::to_string(psi.num_qubits()) +
                          " qubits, circuit has " + std::to_string(c.num_qubits()));
  }
  auto& a = psi.amplitudes();
  const std::size_t dim = a.size();
  auto bitmask = [](Qubit q) { return std::size_t{1} << q; };
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Not: {
        const auto m = bitmask(g.q[0]);
        for (std::size_t i = 0; i < dim; ++i) {
          if (!(i & m)) {
            std::swap(a[i], a[i | m]);
          }
        }
        break;
      }
      case GateKind::Cnot:
      case GateKind::Toffoli: {
        const auto t = bitmask(g.kind == GateKind::Cnot ? g.q[1] : g.q[2]);
        const auto ctl = g.kind == GateKind::Cnot ? bitmask(g.q[0]) : (bitmask(g.q[0]) | bitmask(g.q[1]));
        for (std::size_t i = 0; i < dim; ++i) {
          if ((i & ctl) == ctl && !(i & t)) {
            std::swap(a[i], a[i | t]);
          }
        }
        break;
      }
      case GateKind::Swap: {
        const auto m0 = bitmask(g.q[0]);
        const auto m1 = bitmask(g.q[1]);
        for (std::size_t i = 0; i < dim; ++i) {
          if ((i & m0) && !(i & m1)) {
            std::swap(a[i], a[(i & ~m0) | m1]);
          }
        }
        break;
      }
      case GateKind::Phase:
      case GateKind::CPhase: {
        const auto m = g.kind == GateKind::Phase ? bitmask(g.q[0]) : (bitmask(g.q[0]) | bitmask(g.q[1]));
        const Amplitude f = std::polar(1.0, g.angle);
        for (std::size_t i = 0; i < dim; ++i) {
          if ((i & m) == m) {
            a[i] *= f;
          }
        }
        break;
      }
      case GateKind::Fanout: {
        std::size_t tm = 0;
        for (Qubit t : c.fanout_targets(g)) {
          tm |= bitmask(t);
        }
        const auto ctl = bitmask(g.q[0]);
        // The map i -> i ^ tm on control-set states is an involution.
        for (std::size_t i = 0; i < dim; ++i) {
          const std::size_t j = i ^ tm;
          if ((i & ctl) && i < j) {
            std::swap(a[i], a[j]);
          }
        }
        break;
      }
    }
  }
  return psi;
}

}  // namespace q2fmm
