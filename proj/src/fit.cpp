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

#include "q2fmm/fit.hpp"

#include "q2fmm/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace q2fmm {

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("linear fit needs at least two paired points");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw ValidationError("linear fit with constant abscissa");
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return f;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw ValidationError("log-log fit needs positive data");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_linear(lx, ly);
}

std::vector<CandidateFit> fit_scaling_candidates(const std::vector<double>& n,
                                                 const std::vector<double>& q,
                                                 const std::vector<double>& y) {
  if (n.size() != q.size()) {
    throw ValidationError("scaling fit needs one Q per N");
  }
  std::vector<double> sq;
  std::vector<double> ln;
  std::vector<double> lnq;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sq.push_back(std::sqrt(n[i]));
    ln.push_back(std::log2(n[i]));
    lnq.push_back(std::log2(n[i]) * std::log2(q[i]));
  }
  std::vector<CandidateFit> out = {
      {"sqrt(N)", fit_linear(sq, y)},
      {"log(N)", fit_linear(ln, y)},
      {"log(N)*log(Q)", fit_linear(lnq, y)},
  };
  std::stable_sort(out.begin(), out.end(),
                   [](const CandidateFit& a, const CandidateFit& b) { return a.fit.r2 > b.fit.r2; });
  return out;
}

}  // namespace q2fmm
