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

#pragma once

#include "q2fmm/circuit.hpp"
#include "q2fmm/hierarchy.hpp"
#include "q2fmm/synthesizer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace q2fmm {

enum class HardwareKind : std::uint8_t { NearestNeighbor2D, Shuttling, ShuttlingFanout };
enum class ArithmeticModel : std::uint8_t { AsBuilt, Literature };

[[nodiscard]] std::string_view hardware_name(HardwareKind k);
[[nodiscard]] HardwareKind hardware_from_name(std::string_view name);
[[nodiscard]] std::string_view arithmetic_name(ArithmeticModel m);
[[nodiscard]] ArithmeticModel arithmetic_from_name(std::string_view name);

struct HardwareModel {
  HardwareKind kind = HardwareKind::NearestNeighbor2D;
  int shuttle_depth_cost = 1;  ///< layers per shuttle move
  int fanout_depth_cost = 1;   ///< layers per FANOUT gate
  ArithmeticModel arithmetic = ArithmeticModel::AsBuilt;
  /// Count one shuttle op per moved register rather than per moved qubit.
  bool collective_shuttles = true;

  void validate() const;
};

/// Depth and gate formulas for arithmetic blocks under the literature model.
/// Without fan-out: multiplier depth 4n, adder depth 4*ceil(log2 n) + 3.
/// With fan-out both are constant (8 and 4 layers). Gate counts are
/// ceil(8 n^1.3) per multiplier and 10n per adder.
[[nodiscard]] int literature_depth(const HardwareModel& m, BlockKind kind, int width);
[[nodiscard]] std::size_t literature_gates(BlockKind kind, int width);

struct GridPos {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

[[nodiscard]] int manhattan(GridPos a, GridPos b);

/// Qubit positions on a grid of (pitch * width) x (pitch * height) cells.
/// Site (x, y) owns the pitch x pitch tile whose corner is (pitch x, pitch y);
/// its spin-up mode sits on the corner and spin-down one cell to the right.
struct Layout {
  int pitch = 1;
  int grid_width = 0;
  int grid_height = 0;
  std::vector<GridPos> position;  ///< per qubit
};

/// Smallest pitch whose grid holds every qubit of c.
[[nodiscard]] int min_pitch(const BoxHierarchy& h, const Circuit& c);

/// Places system qubits on their sites, box registers by ring search from
/// the box centre (finest level first), and box-less scratch registers next
/// to the first placed register they share a gate with. pitch 0 picks
/// min_pitch. Deterministic.
[[nodiscard]] Layout layout(const BoxHierarchy& h, const Circuit& c, int pitch = 0);

struct RouteCost {
  int depth = 0;  ///< layers one way
  std::size_t swaps = 0;
  std::size_t shuttles = 0;
};

/// Cost of moving one qubit from `from` to `to` and back. NN: a SWAP chain
/// of Manhattan length each way; shuttling: one move each way.
[[nodiscard]] RouteCost route_cost(const HardwareModel& m, GridPos from, GridPos to);

struct LevelReport {
  int level = 0;
  std::size_t gates = 0;
  std::uint64_t span = 0;        ///< last end - first start of the level's operations
  std::uint64_t route_depth = 0; ///< longest single one-way route
  std::size_t swaps = 0;
  std::size_t shuttles = 0;
};

struct ResourceReport {
  std::uint64_t depth = 0;
  GateCounts gates;
  std::size_t modeled_gates = 0;  ///< gates with literature re-costing applied
  std::size_t peak_ancillae = 0;
  std::size_t total_qubits = 0;
  std::size_t swap_ops = 0;
  std::size_t shuttle_ops = 0;
  std::size_t macro_blocks = 0;   ///< arithmetic blocks re-costed by the literature model
  std::vector<LevelReport> levels;  ///< index = level; last entry collects unattributed ops
  std::uint64_t longest_chain = 0;  ///< most gates acting on one qubit
};

/// Greedy as-soon-as-possible schedule. Route hints delay the moved qubits
/// before a gate range and again after it; routes occupy only the moved
/// qubits. Unit depth per gate, FANOUT costs fanout_depth_cost under
/// ShuttlingFanout and ceil(log2(k + 1)) CNOT layers elsewhere.
[[nodiscard]] ResourceReport schedule(const Circuit& c, const HardwareModel& m, const Layout& lay,
                                      int max_level);

/// ASAP layer index per gate with unit depth and no routing.
[[nodiscard]] std::vector<std::uint32_t> asap_layers(const Circuit& c);

/// Peak number of simultaneously live ancillae. Without recycling every
/// ancilla counts; with it an ancilla is live from its first to its last
/// gate in the unit-depth ASAP schedule.
[[nodiscard]] std::size_t ancilla_peak(const Circuit& c, bool recycle);

/// Qubits in BoxSum, moment and Copy registers of the fullest level.
[[nodiscard]] std::size_t box_register_footprint(const Circuit& c);

struct SweepModel {
  std::string name;
  HardwareModel hardware;
  bool use_copy = false;
  bool use_fanout = false;
};

/// NN and Shuttling on the plain circuit, ShuttlingFanout on the COPY
/// circuit with fan-out; all with literature arithmetic.
[[nodiscard]] std::vector<SweepModel> default_sweep_models();

struct SweepOptions {
  int order_p = 0;
  double eps_b = 1.0 / 16.0;
  double delta_t = 0.1;
  /// Q = max(1, round(q_fraction * N)).
  double q_fraction = 0.5;
  /// 0 picks the smallest pitch that fits every size in the sweep.
  int pitch = 0;
};

struct SweepRow {
  int n = 0;
  int q = 0;
  std::string model;
  ResourceReport report;
  int pitch = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< ordered by model, then N
  int pitch = 0;
};

/// Sizes are site counts and must be squares of powers of two.
[[nodiscard]] SweepResult scaling_sweep(const std::vector<int>& sizes,
                                        const std::vector<SweepModel>& models,
                                        const SweepOptions& opts = {});

[[nodiscard]] std::vector<std::string> sweep_csv_header();
[[nodiscard]] std::vector<std::vector<std::string>> sweep_csv_rows(const SweepResult& r);

/// JSON report: per model the candidate depth fits (best first) and the
/// linear gate-count fit against N.
[[nodiscard]] std::string sweep_fit_report(const SweepResult& r);

}  // namespace q2fmm
