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

#include <string>
#include <vector>

namespace q2fmm {

/// Least-squares fit y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

[[nodiscard]] LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log(y) against log(x).
[[nodiscard]] LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// One candidate form y = a + b * f(N, Q) of a scaling fit.
struct CandidateFit {
  std::string form;
  LinearFit fit;
};

/// Fits against sqrt(N), log N and log N * log Q; best first by R^2.
[[nodiscard]] std::vector<CandidateFit> fit_scaling_candidates(const std::vector<double>& n,
                                                               const std::vector<double>& q,
                                                               const std::vector<double>& y);

}  // namespace q2fmm
