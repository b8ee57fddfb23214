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

#include <cstdint>

namespace q2fmm {

enum class RoundingMode { NearestEven, NearestAway, TowardZero, Floor };

/// Two's-complement (or unsigned) binary fixed-point layout.
///
/// value = raw * 2^-fraction_bits, with raw held in width() bits LSB-first.
struct FixedPointFormat {
  int integer_bits = 0;
  int fraction_bits = 0;
  bool is_signed = false;

  [[nodiscard]] int width() const { return integer_bits + fraction_bits + (is_signed ? 1 : 0); }
  [[nodiscard]] double ulp() const;
  [[nodiscard]] std::int64_t min_raw() const;
  [[nodiscard]] std::int64_t max_raw() const;
  [[nodiscard]] bool representable(std::int64_t raw) const { return raw >= min_raw() && raw <= max_raw(); }

  /// Bit pattern of a representable raw value (throws otherwise).
  [[nodiscard]] std::uint64_t encode(std::int64_t raw) const;
  /// Raw value of a bit pattern; only the low width() bits are read.
  [[nodiscard]] std::int64_t decode(std::uint64_t bits) const;
  [[nodiscard]] double to_double(std::int64_t raw) const;
  /// Rounds value * 2^fraction_bits; throws ValidationError when the result
  /// does not fit.
  [[nodiscard]] std::int64_t quantize(double value, RoundingMode mode = RoundingMode::NearestEven) const;

  friend bool operator==(const FixedPointFormat&, const FixedPointFormat&) = default;
};

/// Rounds a real to an integer with the given mode.
[[nodiscard]] std::int64_t round_to_int(double v, RoundingMode mode);

struct RegisterWidth {
  int integer_bits = 0;
  int fraction_bits = 0;
  [[nodiscard]] int total(bool with_sign) const { return integer_bits + fraction_bits + (with_sign ? 1 : 0); }
};

/// ceil(log2(q + 1)) integer bits and ceil(log2(1 / eps_b)) fraction bits.
[[nodiscard]] RegisterWidth register_width_for(std::int64_t q, double eps_b);

/// Smallest b with 2^b > v, for v >= 0 (bits to hold 0..v unsigned).
[[nodiscard]] int bits_for_magnitude(std::uint64_t v);

}  // namespace q2fmm
