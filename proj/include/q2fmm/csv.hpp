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

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace q2fmm {

/// Shortest decimal that round-trips the double ("%.17g" style).
[[nodiscard]] std::string format_double(double v);

/// Quotes a field when it holds a comma, quote, CR or LF; inner quotes are
/// doubled.
[[nodiscard]] std::string csv_escape(std::string_view field);

/// Writes header and rows with CRLF line endings.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Parses text written by write_csv (or any RFC 4180 input).
[[nodiscard]] std::vector<std::vector<std::string>> read_csv(std::string_view text);

}  // namespace q2fmm
