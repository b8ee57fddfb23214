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

#include "q2fmm/cli.hpp"

#include "q2fmm/csv.hpp"
#include "q2fmm/fit.hpp"
#include "q2fmm/hierarchy.hpp"
#include "q2fmm/multipole.hpp"
#include "q2fmm/quantized_fmm.hpp"
#include "q2fmm/serialize.hpp"
#include "q2fmm/simulator.hpp"
#include "q2fmm/synthesizer.hpp"
#include "q2fmm/trotter.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace q2fmm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Reads one JSON object, remembering which keys were consumed.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ValidationError("config: " + where() + " must be an object");
    }
  }

  void read(const char* key, int& dst) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) {
        throw ValidationError("config: " + where(key) + " must be an integer");
      }
      dst = v->get<int>();
    }
  }
  void read(const char* key, std::uint64_t& dst) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
        throw ValidationError("config: " + where(key) + " must be a non-negative integer");
      }
      dst = v->get<std::uint64_t>();
    }
  }
  void read(const char* key, double& dst) {
    if (const json* v = take(key)) {
      if (!v->is_number()) {
        throw ValidationError("config: " + where(key) + " must be a number");
      }
      dst = v->get<double>();
    }
  }
  void read(const char* key, bool& dst) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) {
        throw ValidationError("config: " + where(key) + " must be true or false");
      }
      dst = v->get<bool>();
    }
  }
  void read(const char* key, std::string& dst) {
    if (const json* v = take(key)) {
      if (!v->is_string()) {
        throw ValidationError("config: " + where(key) + " must be a string");
      }
      dst = v->get<std::string>();
    }
  }
  void read(const char* key, std::vector<int>& dst) {
    if (const json* v = take(key)) {
      if (!v->is_array()) {
        throw ValidationError("config: " + where(key) + " must be a list of integers");
      }
      dst.clear();
      for (const auto& e : *v) {
        if (!e.is_number_integer()) {
          throw ValidationError("config: " + where(key) + " must be a list of integers");
        }
        dst.push_back(e.get<int>());
      }
    }
  }
  void read(const char* key, std::vector<std::string>& dst) {
    if (const json* v = take(key)) {
      if (!v->is_array()) {
        throw ValidationError("config: " + where(key) + " must be a list of strings");
      }
      dst.clear();
      for (const auto& e : *v) {
        if (!e.is_string()) {
          throw ValidationError("config: " + where(key) + " must be a list of strings");
        }
        dst.push_back(e.get<std::string>());
      }
    }
  }

  std::optional<Section> child(const char* key) {
    if (const json* v = take(key)) {
      return Section(*v, path_.empty() ? key : path_ + "." + key);
    }
    return std::nullopt;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (used_.count(k) == 0) {
        throw ValidationError("config: unknown key '" + where(k.c_str()) + "'");
      }
    }
  }

private:
  const json* take(const char* key) {
    if (!j_.contains(key)) {
      return nullptr;
    }
    used_.insert(key);
    return &j_.at(key);
  }
  [[nodiscard]] std::string where(const char* key = nullptr) const {
    if (key == nullptr) {
      return path_.empty() ? "top level" : path_;
    }
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

constexpr std::pair<RoundingMode, const char*> kRounding[] = {
    {RoundingMode::NearestEven, "nearest_even"},
    {RoundingMode::NearestAway, "nearest_away"},
    {RoundingMode::TowardZero, "toward_zero"},
    {RoundingMode::Floor, "floor"},
};

std::string rounding_name(RoundingMode m) {
  for (const auto& [k, n] : kRounding) {
    if (k == m) {
      return n;
    }
  }
  return "?";
}

RoundingMode rounding_from_name(const std::string& s) {
  for (const auto& [k, n] : kRounding) {
    if (s == n) {
      return k;
    }
  }
  throw ValidationError("config: unknown rounding mode '" + s + "'");
}

SynthesisOptions synthesis_for(const RunConfig& cfg) {
  SynthesisOptions o = cfg.synthesis;
  o.spinful = cfg.lattice.spinful;
  return o;
}

fs::path prepare_output(const RunConfig& cfg, const char* command) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ValidationError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
  }
  ordered_json rec;
  rec["command"] = command;
  rec["config"] = config_to_json(cfg);
  std::ofstream os(dir / (std::string(command) + "_run.json"), std::ios::binary);
  os << rec.dump(2) << '\n';
  return dir;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot write '" + p.string() + "'");
  }
  return os;
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(12) << v;
  return os.str();
}

ordered_json report_json(const ResourceReport& r) {
  ordered_json j;
  j["depth"] = r.depth;
  j["gates"] = {{"NOT", r.gates.not_},     {"CNOT", r.gates.cnot},       {"TOFFOLI", r.gates.toffoli},
                {"SWAP", r.gates.swap},    {"PHASE", r.gates.phase},     {"CPHASE", r.gates.cphase},
                {"FANOUT", r.gates.fanout}, {"total", r.gates.total()}};
  j["modeled_gates"] = r.modeled_gates;
  j["macro_blocks"] = r.macro_blocks;
  j["peak_ancillae"] = r.peak_ancillae;
  j["total_qubits"] = r.total_qubits;
  j["swap_ops"] = r.swap_ops;
  j["shuttle_ops"] = r.shuttle_ops;
  j["longest_chain"] = r.longest_chain;
  ordered_json lv = ordered_json::array();
  for (const auto& l : r.levels) {
    lv.push_back({{"level", l.level},
                  {"gates", l.gates},
                  {"span", l.span},
                  {"route_depth", l.route_depth},
                  {"swaps", l.swaps},
                  {"shuttles", l.shuttles}});
  }
  j["levels"] = lv;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  lattice.validate();
  synthesis.validate();
  hardware.validate();
  if (pitch < 0) {
    throw ValidationError("config: hardware.pitch must be >= 0");
  }
  if (jobs < 1) {
    throw ValidationError("jobs must be >= 1");
  }
  if (output_dir.empty()) {
    throw ValidationError("config: output_dir must not be empty");
  }
  for (int p : energy.orders) {
    if (p < 0 || p > 10) {
      throw ValidationError("config: energy.orders entries must lie in 0..10");
    }
  }
  if (simulate.exhaustive_qubits < 0 || simulate.exhaustive_qubits > 24) {
    throw ValidationError("config: simulate.exhaustive_qubits must lie in 0..24");
  }
  if (simulate.samples < 1 || simulate.trotter_samples < 1) {
    throw ValidationError("config: simulate sample counts must be positive");
  }
  if (!(simulate.t_total > 0.0) || !std::isfinite(simulate.t_total)) {
    throw ValidationError("config: simulate.t_total must be positive");
  }
  for (int d : simulate.trotter_steps) {
    if (d < 1) {
      throw ValidationError("config: simulate.trotter_steps must be positive");
    }
  }
  if (estimate.models.empty()) {
    throw ValidationError("config: estimate.models must not be empty");
  }
  if (sweep.sizes.size() < 2) {
    throw ValidationError("config: sweep.sizes needs at least two sizes");
  }
  if (!(sweep.q_fraction > 0.0) || sweep.q_fraction > 1.0) {
    throw ValidationError("config: sweep.q_fraction must lie in (0, 1]");
  }
  if (sweep.error_states < 10) {
    throw ValidationError("config: sweep.error_states must be at least 10");
  }
  for (int p : sweep.error_orders) {
    if (p < 0 || p > 10) {
      throw ValidationError("config: sweep.error_orders entries must lie in 0..10");
    }
  }
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  Section top(j, "");
  if (auto s = top.child("lattice")) {
    s->read("width", c.lattice.width);
    s->read("height", c.lattice.height);
    s->read("spinful", c.lattice.spinful);
    s->read("hopping_t", c.lattice.hopping_t);
    s->read("onsite_v0", c.lattice.onsite_v0);
    c.lattice.electron_count_q = -1;
    s->read("electron_count_q", c.lattice.electron_count_q);
    s->finish();
  } else {
    c.lattice.electron_count_q = -1;
  }
  if (c.lattice.electron_count_q == -1) {
    c.lattice.electron_count_q = std::max(1, c.lattice.num_sites() / 2);
  }
  if (auto s = top.child("synthesis")) {
    s->read("order_p", c.synthesis.order_p);
    s->read("eps_b", c.synthesis.eps_b);
    s->read("use_copy", c.synthesis.use_copy);
    s->read("use_fanout", c.synthesis.use_fanout);
    s->read("delta_t", c.synthesis.delta_t);
    s->read("trotter_order", c.synthesis.trotter_order);
    s->read("guard_bits", c.synthesis.guard_bits);
    std::string r = rounding_name(c.synthesis.rounding);
    s->read("rounding", r);
    c.synthesis.rounding = rounding_from_name(r);
    s->finish();
  }
  if (auto s = top.child("hardware")) {
    std::string kind(hardware_name(c.hardware.kind));
    std::string arith(arithmetic_name(c.hardware.arithmetic));
    s->read("kind", kind);
    s->read("arithmetic", arith);
    s->read("shuttle_depth_cost", c.hardware.shuttle_depth_cost);
    s->read("fanout_depth_cost", c.hardware.fanout_depth_cost);
    s->read("collective_shuttles", c.hardware.collective_shuttles);
    s->read("pitch", c.pitch);
    c.hardware.kind = hardware_from_name(kind);
    c.hardware.arithmetic = arithmetic_from_name(arith);
    s->finish();
  }
  if (auto s = top.child("energy")) {
    s->read("state", c.energy.state);
    s->read("electrons", c.energy.electrons);
    s->read("orders", c.energy.orders);
    s->finish();
  }
  if (auto s = top.child("simulate")) {
    s->read("phase_check", c.simulate.phase_check);
    s->read("exhaustive_qubits", c.simulate.exhaustive_qubits);
    s->read("samples", c.simulate.samples);
    s->read("t_total", c.simulate.t_total);
    s->read("trotter_steps", c.simulate.trotter_steps);
    s->read("trotter_samples", c.simulate.trotter_samples);
    s->finish();
  }
  if (auto s = top.child("estimate")) {
    std::vector<std::string> names;
    s->read("models", names);
    if (!names.empty()) {
      c.estimate.models.clear();
      for (const auto& n : names) {
        c.estimate.models.push_back(hardware_from_name(n));
      }
    }
    s->finish();
  }
  if (auto s = top.child("sweep")) {
    s->read("sizes", c.sweep.sizes);
    s->read("q_fraction", c.sweep.q_fraction);
    s->read("error_width", c.sweep.error_width);
    s->read("error_states", c.sweep.error_states);
    s->read("error_orders", c.sweep.error_orders);
    s->finish();
  }
  top.read("output_dir", c.output_dir);
  top.read("seed", c.seed);
  top.read("jobs", c.jobs);
  top.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot read config '" + path + "'");
  }
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["lattice"] = {{"width", c.lattice.width},
                  {"height", c.lattice.height},
                  {"spinful", c.lattice.spinful},
                  {"hopping_t", c.lattice.hopping_t},
                  {"onsite_v0", c.lattice.onsite_v0},
                  {"electron_count_q", c.lattice.electron_count_q}};
  j["synthesis"] = {{"order_p", c.synthesis.order_p},
                    {"eps_b", c.synthesis.eps_b},
                    {"use_copy", c.synthesis.use_copy},
                    {"use_fanout", c.synthesis.use_fanout},
                    {"delta_t", c.synthesis.delta_t},
                    {"trotter_order", c.synthesis.trotter_order},
                    {"guard_bits", c.synthesis.guard_bits},
                    {"rounding", rounding_name(c.synthesis.rounding)}};
  j["hardware"] = {{"kind", hardware_name(c.hardware.kind)},
                   {"arithmetic", arithmetic_name(c.hardware.arithmetic)},
                   {"shuttle_depth_cost", c.hardware.shuttle_depth_cost},
                   {"fanout_depth_cost", c.hardware.fanout_depth_cost},
                   {"collective_shuttles", c.hardware.collective_shuttles},
                   {"pitch", c.pitch}};
  j["energy"] = {{"state", c.energy.state}, {"electrons", c.energy.electrons}, {"orders", c.energy.orders}};
  j["simulate"] = {{"phase_check", c.simulate.phase_check},
                   {"exhaustive_qubits", c.simulate.exhaustive_qubits},
                   {"samples", c.simulate.samples},
                   {"t_total", c.simulate.t_total},
                   {"trotter_steps", c.simulate.trotter_steps},
                   {"trotter_samples", c.simulate.trotter_samples}};
  std::vector<std::string> models;
  for (auto k : c.estimate.models) {
    models.emplace_back(hardware_name(k));
  }
  j["estimate"] = {{"models", models}};
  j["sweep"] = {{"sizes", c.sweep.sizes},
                {"q_fraction", c.sweep.q_fraction},
                {"error_width", c.sweep.error_width},
                {"error_states", c.sweep.error_states},
                {"error_orders", c.sweep.error_orders}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  return j;
}

void cmd_hierarchy(const RunConfig& cfg, std::ostream& out) {
  const BoxHierarchy h = BoxHierarchy::build(cfg.lattice);
  const fs::path dir = prepare_output(cfg, "hierarchy");
  auto os = open_output(dir / "hierarchy.txt");
  h.dump(os);
  out << "lattice " << cfg.lattice.width << "x" << cfg.lattice.height << ", levels 0.." << h.max_level()
      << ", boxes per level:";
  for (int l = 0; l <= h.max_level(); ++l) {
    out << ' ' << h.num_boxes(l);
  }
  out << "\nwrote " << (dir / "hierarchy.txt").string() << '\n';
}

void cmd_energy(const RunConfig& cfg, std::ostream& out) {
  const BoxHierarchy h = BoxHierarchy::build(cfg.lattice);
  const auto& lat = cfg.lattice;
  FockState state;
  if (!cfg.energy.state.empty()) {
    state = FockState::from_site_occupations(lat, cfg.energy.state);
  } else {
    const int n = cfg.energy.electrons < 0 ? lat.electron_count_q : cfg.energy.electrons;
    state = random_state(lat, n, cfg.seed);
  }
  const fs::path dir = prepare_output(cfg, "energy");
  const double exact = brute_force_energy(lat, state);
  out << "electrons = " << state.total() << "\n";
  out << "E_exact = " << fixed(exact) << "\n";
  std::vector<std::vector<std::string>> rows;
  for (int p : cfg.energy.orders) {
    const double e = fmm_total_energy(h, state, p);
    const double rel = std::abs(e - exact) / (exact != 0.0 ? std::abs(exact) : 1.0);
    out << "E_fmm[p=" << p << "] = " << fixed(e) << "  rel_error = " << fixed(rel) << "\n";
    rows.push_back({std::to_string(lat.num_sites()), std::to_string(p), std::to_string(cfg.seed),
                    format_double(e), format_double(exact), format_double(rel)});
  }
  auto os = open_output(dir / "energy.csv");
  write_csv(os, {"N", "p", "state_seed", "E_fmm", "E_exact", "rel_error"}, rows);
}

void cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const BoxHierarchy h = BoxHierarchy::build(cfg.lattice);
  const SynthesisOptions opts = synthesis_for(cfg);
  const Circuit c = synthesize(h, opts);
  const fs::path dir = prepare_output(cfg, "synth");
  {
    auto os = open_output(dir / "circuit.q2c");
    write_circuit(os, c);
  }
  {
    auto os = open_output(dir / "manifest.json");
    write_manifest(os, c, h, opts);
  }
  const GateCounts g = count_gates(c);
  out << "qubits = " << c.num_qubits() << ", gates = " << g.total() << " (CNOT " << g.cnot
      << ", TOFFOLI " << g.toffoli << ", CPHASE " << g.cphase << ", PHASE " << g.phase << ", FANOUT "
      << g.fanout << ")\n";
  out << "wrote " << (dir / "circuit.q2c").string() << " and " << (dir / "manifest.json").string()
      << '\n';
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto& lat = cfg.lattice;
  if (!cfg.simulate.phase_check && cfg.simulate.trotter_steps.empty()) {
    throw ValidationError("simulate: phase_check is off and no trotter_steps given; nothing to do");
  }
  const SynthesisOptions opts = synthesis_for(cfg);
  const fs::path dir = prepare_output(cfg, "simulate");
  ordered_json rep;
  std::string failure;
  if (cfg.simulate.phase_check) {
    const BoxHierarchy h = BoxHierarchy::build(lat);
    const Circuit c = synthesize(h, opts);
    const int m = lat.num_modes();
    std::vector<FockState> states;
    const bool exhaustive = m <= cfg.simulate.exhaustive_qubits;
    if (exhaustive) {
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k) {
        if (std::popcount(k) <= lat.electron_count_q) {
          states.push_back(FockState::from_basis_index(lat, k));
        }
      }
    } else {
      std::mt19937_64 rng(cfg.seed);
      for (int k = 0; k < cfg.simulate.samples; ++k) {
        const int n = static_cast<int>(rng() % static_cast<std::uint64_t>(lat.electron_count_q + 1));
        states.push_back(random_state(lat, n, rng()));
      }
    }
    const PhaseCheck pc = evaluate_phases(c, states, cfg.jobs);
    const QuantizationPlan plan = opts.order_p >= 1 ? QuantizationPlan::build(h, opts) : QuantizationPlan{};
    double max_phase = 0.0;
    double max_quant = 0.0;
    double max_exact = 0.0;
    bool bound_ok = true;
    for (std::size_t k = 0; k < states.size(); ++k) {
      const QuantizedEvaluation q =
          opts.order_p >= 1 ? quantized_fmm(h, opts, plan, states[k]) : quantized_fmm(h, opts, states[k]);
      max_phase = std::max(max_phase, phase_distance(pc.phases[k], q.phase));
      const double analytic = fmm_total_energy(h, states[k], opts.order_p);
      const double dq = std::abs(q.energy() - analytic);
      max_quant = std::max(max_quant, dq);
      bound_ok = bound_ok && dq <= q.error_bound + 1e-9;
      max_exact = std::max(max_exact, std::abs(q.energy() - brute_force_energy(lat, states[k])));
    }
    const bool restored = pc.ancillae_restored && pc.system_preserved;
    out << "states checked: " << states.size() << (exhaustive ? " (all with <= Q electrons)" : " (sampled)")
        << "\n";
    out << "ancillae restored: " << (restored ? "true" : "false")
        << "; max |phase error|: " << format_double(max_phase) << "\n";
    out << "quantization within bound: " << (bound_ok ? "true" : "false")
        << "; max |E_quantized - E_fmm|: " << format_double(max_quant) << "\n";
    out << "max |E_quantized - E_exact|: " << format_double(max_exact) << "\n";
    rep["states"] = states.size();
    rep["exhaustive"] = exhaustive;
    rep["ancillae_restored"] = pc.ancillae_restored;
    rep["system_preserved"] = pc.system_preserved;
    rep["max_phase_error"] = max_phase;
    rep["quantization_within_bound"] = bound_ok;
    rep["max_quantization_error"] = max_quant;
    rep["max_error_vs_exact"] = max_exact;
    if (!restored) {
      failure = "simulate: circuit left ancillae or system qubits changed";
    } else if (max_phase > 1e-9) {
      failure = "simulate: circuit phases disagree with the quantized oracle";
    } else if (!bound_ok) {
      failure = "simulate: quantization error exceeds its bound";
    }
  }
  if (!cfg.simulate.trotter_steps.empty()) {
    TrotterSweepOptions to;
    to.order = opts.trotter_order;
    to.eps_b = opts.eps_b;
    to.samples = cfg.simulate.trotter_samples;
    to.seed = cfg.seed;
    to.jobs = cfg.jobs;
    if (cfg.simulate.phase_check && lat.electron_count_q >= lat.num_modes()) {
      to.fmm_order = opts.order_p;
    }
    const auto rows = trotter_error_sweep(lat, cfg.simulate.t_total, cfg.simulate.trotter_steps, to);
    auto os = open_output(dir / "trotter.csv");
    write_csv(os, trotter_csv_header(), trotter_csv_rows(rows));
    for (const auto& r : rows) {
      out << "trotter d=" << r.steps << " error=" << format_double(r.total_error)
          << " trotter_part=" << format_double(r.trotter_error) << " fmm_part=" << format_double(r.fmm_error)
          << "\n";
    }
    rep["trotter_csv"] = "trotter.csv";
  }
  {
    auto os = open_output(dir / "simulate.json");
    os << rep.dump(2) << '\n';
  }
  if (!failure.empty()) {
    throw InvariantError(failure);
  }
}

void cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const BoxHierarchy h = BoxHierarchy::build(cfg.lattice);
  const SynthesisOptions opts = synthesis_for(cfg);
  const Circuit c = synthesize(h, opts);
  const Layout lay = layout(h, c, cfg.pitch);
  const fs::path dir = prepare_output(cfg, "estimate");
  ordered_json j;
  j["format"] = "q2fmm-estimate";
  j["version"] = 1;
  j["pitch"] = lay.pitch;
  j["ancillae_without_recycling"] = ancilla_peak(c, false);
  ordered_json models = ordered_json::array();
  for (auto kind : cfg.estimate.models) {
    HardwareModel m = cfg.hardware;
    m.kind = kind;
    const ResourceReport r = schedule(c, m, lay, h.max_level());
    ordered_json e;
    e["model"] = hardware_name(kind);
    e["arithmetic"] = arithmetic_name(m.arithmetic);
    e["report"] = report_json(r);
    models.push_back(e);
    out << hardware_name(kind) << ": depth " << r.depth << ", gates " << r.gates.total()
        << ", peak ancillae " << r.peak_ancillae << ", swaps " << r.swap_ops << ", shuttles "
        << r.shuttle_ops << "\n";
  }
  j["models"] = models;
  auto os = open_output(dir / "estimate.json");
  os << j.dump(2) << '\n';
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = prepare_output(cfg, "sweep");

  // Error against p on random half-filled states.
  LatticeSpec el;
  el.width = el.height = cfg.sweep.error_width;
  el.spinful = cfg.lattice.spinful;
  el.electron_count_q = el.max_occupancy();
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < cfg.sweep.error_states; ++k) {
    seeds.push_back(rng());
  }
  const ErrorSweep es = fmm_error_sweep(el, seeds, cfg.sweep.error_orders);
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : es.samples) {
      rows.push_back({std::to_string(s.n_sites), std::to_string(s.order), std::to_string(s.state_seed),
                      format_double(s.e_fmm), format_double(s.e_exact), format_double(s.rel_error)});
    }
    auto os = open_output(dir / "energy_sweep.csv");
    write_csv(os, {"N", "p", "state_seed", "E_fmm", "E_exact", "rel_error"}, rows);
  }
  std::vector<double> ps;
  std::vector<double> meds;
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : es.rows) {
      rows.push_back({std::to_string(r.order), format_double(r.median_rel_error), format_double(r.max_rel_error)});
      out << "p=" << r.order << " median rel error " << format_double(r.median_rel_error) << "\n";
      if (r.order >= 1 && r.median_rel_error > 0.0) {
        ps.push_back(r.order);
        meds.push_back(std::log(r.median_rel_error));
      }
    }
    auto os = open_output(dir / "error_vs_p.csv");
    write_csv(os, {"p", "median_rel_error", "max_rel_error"}, rows);
  }
  {
    ordered_json j;
    j["format"] = "q2fmm-error-fit";
    j["version"] = 1;
    j["N"] = el.num_sites();
    j["states"] = cfg.sweep.error_states;
    j["seed"] = cfg.seed;
    if (ps.size() >= 2) {
      const LinearFit f = fit_linear(ps, meds);
      j["log_median_vs_p"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
    }
    auto os = open_output(dir / "error_fit.json");
    os << j.dump(2) << '\n';
  }

  // Depth against N.
  auto models = default_sweep_models();
  for (auto& m : models) {
    m.hardware.shuttle_depth_cost = cfg.hardware.shuttle_depth_cost;
    m.hardware.fanout_depth_cost = cfg.hardware.fanout_depth_cost;
    m.hardware.collective_shuttles = cfg.hardware.collective_shuttles;
  }
  SweepOptions so;
  so.order_p = cfg.synthesis.order_p;
  so.eps_b = cfg.synthesis.eps_b;
  so.delta_t = cfg.synthesis.delta_t;
  so.q_fraction = cfg.sweep.q_fraction;
  so.pitch = cfg.pitch;
  const SweepResult sr = scaling_sweep(cfg.sweep.sizes, models, so);
  {
    auto os = open_output(dir / "scaling.csv");
    write_csv(os, sweep_csv_header(), sweep_csv_rows(sr));
  }
  const std::string report = sweep_fit_report(sr);
  {
    auto os = open_output(dir / "fit_report.json");
    os << report;
  }
  const auto parsed = json::parse(report);
  for (const auto& m : parsed["models"]) {
    if (!m.contains("depth_fits")) {
      continue;
    }
    out << m["model"].get<std::string>() << ":";
    for (const auto& f : m["depth_fits"]) {
      out << " " << f["form"].get<std::string>() << " R2=" << format_double(f["r2"].get<double>());
    }
    out << "\n";
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Q2FMM circuit synthesis, simulation and cost analysis"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out_dir;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--jobs", jobs, "worker threads (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.fallthrough();
  struct Cmd {
    const char* name;
    const char* help;
    void (*run)(const RunConfig&, std::ostream&);
  };
  const Cmd cmds[] = {
      {"hierarchy", "write the box hierarchy and interaction lists", cmd_hierarchy},
      {"energy", "FMM and exact Coulomb energy of one state", cmd_energy},
      {"synth", "synthesize the Trotter-step Coulomb circuit", cmd_synth},
      {"simulate", "check circuit phases against the oracle; optional Trotter sweep", cmd_simulate},
      {"estimate", "schedule the circuit on hardware models", cmd_estimate},
      {"sweep", "error-vs-p and depth-vs-N sweeps with fits", cmd_sweep},
  };
  for (const auto& c : cmds) {
    app.add_subcommand(c.name, c.help);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    RunConfig cfg = config_path.empty() ? parse_config(json::object()) : load_config(config_path);
    if (seed) {
      cfg.seed = *seed;
    }
    if (jobs) {
      cfg.jobs = *jobs;
    }
    if (!out_dir.empty()) {
      cfg.output_dir = out_dir;
    }
    cfg.validate();
    for (const auto& c : cmds) {
      if (app.got_subcommand(c.name)) {
        c.run(cfg, out);
      }
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace q2fmm
