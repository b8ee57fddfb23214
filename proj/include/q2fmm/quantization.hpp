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

#include "q2fmm/fixed_point.hpp"
#include "q2fmm/hierarchy.hpp"

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

namespace q2fmm {

struct SynthesisOptions {
  int order_p = 0;
  double eps_b = 1.0 / 16.0;
  bool use_copy = false;
  bool use_fanout = false;
  bool spinful = false;
  double delta_t = 0.1;
  int trotter_order = 2;
  RoundingMode rounding = RoundingMode::NearestEven;
  /// Extra fraction bits carried by translation and interaction constants.
  int guard_bits = 4;

  void validate() const;
};

/// Real or imaginary part of a normalized moment M_lm / (r^l / sqrt((l-m)!(l+m)!)).
struct MomentComponent {
  int ell = 0;
  int m = 0;
  bool imag = false;
  friend bool operator==(const MomentComponent&, const MomentComponent&) = default;
};

/// Components that can be nonzero for charges in the plane z = 0: l + m
/// even, m >= 0, imaginary parts only for m > 0.
[[nodiscard]] std::vector<MomentComponent> planar_components(int order);

/// One entry raw * 2^-frac of a quantized linear or bilinear map, with the
/// exact real coefficient it approximates.
struct QuantizedTerm {
  int out = 0;  ///< parent component (translation) or A component (pair)
  int in = 0;   ///< child component (translation) or B component (pair)
  std::int64_t raw = 0;
  double exact = 0.0;
};

/// Fixed-point layout of every register used by the higher-order circuit,
/// together with the rounded classical constants. Shared by the synthesizer
/// and the classical quantized evaluator; nothing here depends on a state.
class QuantizationPlan {
public:
  static QuantizationPlan build(const BoxHierarchy& h, const SynthesisOptions& opts);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int fraction_bits() const { return f_; }
  [[nodiscard]] int weight_fraction_bits() const { return f_w_; }
  [[nodiscard]] const std::vector<MomentComponent>& components() const { return comps_; }
  [[nodiscard]] int num_components() const { return static_cast<int>(comps_.size()); }

  /// Level whose moments are loaded from sites; -1 when there is none.
  [[nodiscard]] int load_level() const { return load_level_; }
  /// Coarsest level holding moments.
  [[nodiscard]] int top_level() const { return top_level_; }
  [[nodiscard]] bool has_moments(int level) const {
    return load_level_ >= 0 && level >= top_level_ && level <= load_level_;
  }

  [[nodiscard]] FixedPointFormat moment_format(int level) const;
  /// Occupancy bound used for sizing: min(modes in box, Q).
  [[nodiscard]] int capacity(int level) const;

  /// Rounded R~ value of component `comp` for the site in slot `slot` of a
  /// load-level box (slots follow BoxHierarchy::sites order).
  [[nodiscard]] std::int64_t load_raw(int slot, int comp) const;
  [[nodiscard]] double load_exact(int slot, int comp) const;
  [[nodiscard]] int load_slots() const { return static_cast<int>(load_raw_.size()); }

  /// Translation of child `slot` into a parent on `parent_level`.
  [[nodiscard]] const std::vector<QuantizedTerm>& m2m_terms(int parent_level, int slot) const;
  [[nodiscard]] FixedPointFormat m2m_acc_format(int parent_level) const;

  /// Bilinear energy form for boxes on `level` with A - B = (dx, dy) boxes.
  [[nodiscard]] const std::vector<QuantizedTerm>& pair_terms(int level, int dx, int dy) const;
  [[nodiscard]] int pair_fraction_bits(int level) const;  ///< of the constants
  [[nodiscard]] FixedPointFormat energy_format(int level, int dx, int dy) const;

private:
  struct PairForm {
    std::vector<QuantizedTerm> terms;
    FixedPointFormat acc;
  };

  int order_ = 0;
  int f_ = 0;
  int f_w_ = 0;
  int load_level_ = -1;
  int top_level_ = 0;
  std::vector<MomentComponent> comps_;
  std::vector<FixedPointFormat> formats_;  ///< by level
  std::vector<int> capacity_;              ///< by level
  std::vector<std::vector<std::int64_t>> load_raw_;
  std::vector<std::vector<double>> load_exact_;
  std::vector<std::vector<std::vector<QuantizedTerm>>> m2m_;  ///< [level][slot]
  std::vector<FixedPointFormat> m2m_acc_;
  std::vector<int> pair_frac_;
  std::map<std::tuple<int, int, int>, PairForm> pairs_;
};

}  // namespace q2fmm
