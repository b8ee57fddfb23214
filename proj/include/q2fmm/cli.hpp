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

#include "q2fmm/hardware.hpp"
#include "q2fmm/lattice.hpp"
#include "q2fmm/quantization.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace q2fmm {

/// A result that contradicts an internal guarantee (exit code 2).
class InvariantError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct EnergyConfig {
  /// Per-site occupations; empty means a random state from the seed.
  std::vector<int> state;
  /// Electrons in the random state; -1 means Q.
  int electrons = -1;
  std::vector<int> orders = {0, 1, 2, 3, 4, 5};
};

struct SimulateConfig {
  bool phase_check = true;
  /// Exhaustive when the system has at most this many qubits, else sampled.
  int exhaustive_qubits = 16;
  int samples = 200;
  double t_total = 1.0;
  /// Trotter step counts; empty skips the Trotter sweep.
  std::vector<int> trotter_steps;
  int trotter_samples = 200;
};

struct EstimateConfig {
  std::vector<HardwareKind> models = {HardwareKind::NearestNeighbor2D, HardwareKind::Shuttling,
                                      HardwareKind::ShuttlingFanout};
};

struct SweepConfig {
  std::vector<int> sizes = {16, 64, 256, 1024};
  double q_fraction = 0.5;
  int error_width = 8;
  int error_states = 20;
  std::vector<int> error_orders = {0, 1, 2, 3, 4, 5};
};

struct RunConfig {
  LatticeSpec lattice;
  SynthesisOptions synthesis;
  HardwareModel hardware;
  int pitch = 0;
  EnergyConfig energy;
  SimulateConfig simulate;
  EstimateConfig estimate;
  SweepConfig sweep;
  std::string output_dir = "q2fmm_out";
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
};

/// Builds a config from JSON, rejecting unknown keys and wrong types.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::string& path);
/// Fully resolved config, every field present.
[[nodiscard]] nlohmann::ordered_json config_to_json(const RunConfig& c);

void cmd_hierarchy(const RunConfig& cfg, std::ostream& out);
void cmd_energy(const RunConfig& cfg, std::ostream& out);
void cmd_synth(const RunConfig& cfg, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, std::ostream& out);
void cmd_estimate(const RunConfig& cfg, std::ostream& out);
void cmd_sweep(const RunConfig& cfg, std::ostream& out);

/// Parses arguments, runs one command and maps errors to exit codes:
/// 0 success, 1 validation error, 2 internal invariant violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace q2fmm
