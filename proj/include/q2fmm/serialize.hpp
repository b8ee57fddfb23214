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
#include "q2fmm/csv.hpp"

#include <iosfwd>
#include <string>

namespace q2fmm {

/// Line-oriented text: a header with the qubit count, register table, block
/// and route annotations, then one `KIND q0 q1 ... [angle]` line per gate.
/// Angles use the shortest round-trip decimal form, so read(write(c))
/// reproduces c exactly.
void write_circuit(std::ostream& os, const Circuit& c);
[[nodiscard]] Circuit read_circuit(std::istream& is);

[[nodiscard]] std::string to_text(const Circuit& c);
[[nodiscard]] Circuit from_text(const std::string& text);

}  // namespace q2fmm
