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

#include "q2fmm/serialize.hpp"

#include "q2fmm/csv.hpp"

#include "q2fmm/lattice.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace q2fmm {

namespace {

constexpr std::string_view kHeader = "# q2fmm circuit v1";

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') {
      ++i;
    }
    const std::size_t j = line.find(' ', i);
    const std::size_t end = (j == std::string_view::npos) ? line.size() : j;
    if (end > i) {
      out.push_back(line.substr(i, end - i));
    }
    i = end;
  }
  return out;
}

template <class T>
T parse_num(std::string_view s, int line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("circuit line " + std::to_string(line_no) + ": bad number '" +
                          std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_circuit(std::ostream& os, const Circuit& c) {
  std::ostringstream out;
  out << kHeader << '\n';
  out << "qubits " << c.num_qubits() << '\n';
  for (const auto& r : c.registers()) {
    out << "register " << r.name << ' ' << role_name(r.role) << ' ' << r.format.integer_bits << ' '
        << r.format.fraction_bits << ' ' << (r.format.is_signed ? 1 : 0) << ' ' << r.level << ' '
        << r.box;
    for (Qubit q : r.qubits) {
      out << ' ' << q;
    }
    out << '\n';
  }
  for (const auto& b : c.blocks()) {
    out << "block " << block_name(b.kind) << ' ' << b.begin << ' ' << b.end << ' ' << b.width << ' '
        << b.level << '\n';
  }
  for (const auto& h : c.route_hints()) {
    out << "hint " << h.begin << ' ' << h.end << ' ' << h.dest << ' ' << h.level;
    for (Qubit q : h.moved) {
      out << ' ' << q;
    }
    out << '\n';
  }
  out << "gates " << c.size() << '\n';
  for (const auto& g : c.gates()) {
    out << gate_name(g.kind);
    if (g.kind == GateKind::Fanout) {
      out << ' ' << g.q[0];
      for (Qubit t : c.fanout_targets(g)) {
        out << ' ' << t;
      }
    } else {
      for (int i = 0; i < gate_arity(g.kind); ++i) {
        out << ' ' << g.q[i];
      }
      if (g.kind == GateKind::Phase || g.kind == GateKind::CPhase) {
        out << ' ' << format_double(g.angle);
      }
    }
    out << '\n';
  }
  os << out.str();
}

Circuit read_circuit(std::istream& is) {
  Circuit c;
  std::string line;
  int line_no = 0;
  bool header = false;
  std::size_t expected_gates = 0;
  bool in_gates = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    if (line_no == 1) {
      if (line != kHeader) {
        throw ValidationError("not a q2fmm circuit file (missing header)");
      }
      header = true;
      continue;
    }
    const auto tok = split(line);
    if (tok.empty()) {
      continue;
    }
    auto need = [&](std::size_t n) {
      if (tok.size() < n) {
        throw ValidationError("circuit line " + std::to_string(line_no) + ": too few fields");
      }
    };
    if (!in_gates) {
      if (tok[0] == "qubits") {
        need(2);
        c.set_num_qubits(parse_num<std::uint32_t>(tok[1], line_no));
      } else if (tok[0] == "register") {
        need(8);
        Register r;
        r.name = std::string(tok[1]);
        r.role = role_from_name(tok[2]);
        r.format = {parse_num<int>(tok[3], line_no), parse_num<int>(tok[4], line_no),
                    parse_num<int>(tok[5], line_no) != 0};
        r.level = parse_num<int>(tok[6], line_no);
        r.box = parse_num<int>(tok[7], line_no);
        for (std::size_t k = 8; k < tok.size(); ++k) {
          r.qubits.push_back(parse_num<Qubit>(tok[k], line_no));
        }
        c.add_register_raw(std::move(r));
      } else if (tok[0] == "block") {
        need(6);
        c.add_block({block_from_name(tok[1]), parse_num<std::size_t>(tok[2], line_no),
                     parse_num<std::size_t>(tok[3], line_no), parse_num<int>(tok[4], line_no),
                     parse_num<int>(tok[5], line_no)});
      } else if (tok[0] == "hint") {
        need(5);
        RouteHint h;
        h.begin = parse_num<std::size_t>(tok[1], line_no);
        h.end = parse_num<std::size_t>(tok[2], line_no);
        h.dest = parse_num<Qubit>(tok[3], line_no);
        h.level = parse_num<int>(tok[4], line_no);
        for (std::size_t k = 5; k < tok.size(); ++k) {
          h.moved.push_back(parse_num<Qubit>(tok[k], line_no));
        }
        c.add_route_hint_at(std::move(h));
      } else if (tok[0] == "gates") {
        need(2);
        expected_gates = parse_num<std::size_t>(tok[1], line_no);
        in_gates = true;
      } else {
        throw ValidationError("circuit line " + std::to_string(line_no) + ": unknown record '" +
                              std::string(tok[0]) + "'");
      }
      continue;
    }
    const GateKind kind = gate_kind_from_name(tok[0]);
    Gate g;
    g.kind = kind;
    if (kind == GateKind::Fanout) {
      need(2);
      g.q[0] = parse_num<Qubit>(tok[1], line_no);
      std::vector<Qubit> targets;
      for (std::size_t k = 2; k < tok.size(); ++k) {
        targets.push_back(parse_num<Qubit>(tok[k], line_no));
      }
      c.push(g, targets);
      continue;
    }
    const int arity = gate_arity(kind);
    const bool has_angle = kind == GateKind::Phase || kind == GateKind::CPhase;
    const std::size_t n = 1 + static_cast<std::size_t>(arity) + (has_angle ? 1 : 0);
    if (tok.size() != n) {
      throw ValidationError("circuit line " + std::to_string(line_no) + ": " +
                            std::string(tok[0]) + " expects " + std::to_string(n - 1) + " fields");
    }
    for (int i = 0; i < arity; ++i) {
      g.q[i] = parse_num<Qubit>(tok[static_cast<std::size_t>(i) + 1], line_no);
    }
    if (has_angle) {
      g.angle = parse_num<double>(tok[n - 1], line_no);
    }
    c.push(g);
  }
  if (!header) {
    throw ValidationError("empty circuit file");
  }
  if (c.size() != expected_gates) {
    throw ValidationError("circuit file declares " + std::to_string(expected_gates) +
                          " gates but holds " + std::to_string(c.size()));
  }
  return c;
}

std::string to_text(const Circuit& c) {
  std::ostringstream os;
  write_circuit(os, c);
  return os.str();
}

Circuit from_text(const std::string& text) {
  std::istringstream is(text);
  return read_circuit(is);
}

}  // namespace q2fmm
