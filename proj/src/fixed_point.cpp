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

#include "q2fmm/fixed_point.hpp"

#include "q2fmm/lattice.hpp"

#include <cmath>
#include <string>

namespace q2fmm {

namespace {

void check_width(const FixedPointFormat& f) {
  if (f.integer_bits < 0 || f.fraction_bits < 0 || f.width() < 1 || f.width() > 62) {
    throw ValidationError("fixed-point width must lie in [1, 62], got " + std::to_string(f.width()));
  }
}

}  // namespace

double FixedPointFormat::ulp() const { return std::ldexp(1.0, -fraction_bits); }

std::int64_t FixedPointFormat::min_raw() const {
  check_width(*this);
  return is_signed ? -(std::int64_t{1} << (width() - 1)) : 0;
}

std::int64_t FixedPointFormat::max_raw() const {
  check_width(*this);
  return is_signed ? (std::int64_t{1} << (width() - 1)) - 1 : (std::int64_t{1} << width()) - 1;
}

std::uint64_t FixedPointFormat::encode(std::int64_t raw) const {
  if (!representable(raw)) {
    throw ValidationError("raw value " + std::to_string(raw) + " does not fit in " +
                          std::to_string(width()) + " bits");
  }
  const std::uint64_t mask = (std::uint64_t{1} << width()) - 1;
  return static_cast<std::uint64_t>(raw) & mask;
}

std::int64_t FixedPointFormat::decode(std::uint64_t bits) const {
  check_width(*this);
  const int w = width();
  bits &= (std::uint64_t{1} << w) - 1;
  if (is_signed && ((bits >> (w - 1)) & 1U)) {
    return static_cast<std::int64_t>(bits) - (std::int64_t{1} << w);
  }
  return static_cast<std::int64_t>(bits);
}

double FixedPointFormat::to_double(std::int64_t raw) const {
  return std::ldexp(static_cast<double>(raw), -fraction_bits);
}

std::int64_t round_to_int(double v, RoundingMode mode) {
  if (!std::isfinite(v) || std::abs(v) > 9.0e15) {
    throw ValidationError("value out of the exactly representable integer range");
  }
  switch (mode) {
    case RoundingMode::NearestEven: {
      const double f = std::floor(v);
      const double d = v - f;
      auto r = static_cast<std::int64_t>(f);
      if (d > 0.5 || (d == 0.5 && (r % 2 != 0))) {
        ++r;
      }
      return r;
    }
    case RoundingMode::NearestAway:
      return static_cast<std::int64_t>(std::round(v));
    case RoundingMode::TowardZero:
      return static_cast<std::int64_t>(std::trunc(v));
    case RoundingMode::Floor:
      return static_cast<std::int64_t>(std::floor(v));
  }
  return 0;
}

std::int64_t FixedPointFormat::quantize(double value, RoundingMode mode) const {
  const std::int64_t raw = round_to_int(std::ldexp(value, fraction_bits), mode);
  if (!representable(raw)) {
    throw ValidationError("value " + std::to_string(value) + " is not representable with " +
                          std::to_string(integer_bits) + " integer and " +
                          std::to_string(fraction_bits) + " fraction bits");
  }
  return raw;
}

int bits_for_magnitude(std::uint64_t v) {
  int b = 0;
  while (b < 64 && (v >> b) != 0) {
    ++b;
  }
  return b;
}

RegisterWidth register_width_for(std::int64_t q, double eps_b) {
  if (q < 1) {
    throw ValidationError("register_width_for: Q must be at least 1");
  }
  if (!(eps_b > 0.0 && eps_b <= 1.0)) {
    throw ValidationError("register_width_for: eps_b must lie in (0, 1]");
  }
  RegisterWidth w;
  w.integer_bits = bits_for_magnitude(static_cast<std::uint64_t>(q));
  // Smallest f with 2^-f <= eps_b.
  int f = 0;
  while (std::ldexp(1.0, -f) > eps_b) {
    ++f;
  }
  w.fraction_bits = f;
  return w;
}

}  // namespace q2fmm
