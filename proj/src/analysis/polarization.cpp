// Copyright 2026 The nvscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvscope/analysis/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nvscope/analysis/fit.hpp"
#include "nvscope/errors.hpp"

namespace nvscope {

PolarizationFit nspin_curve(const std::vector<double>& p0, double block_duration_us, double contrast) {
  const std::size_t n = p0.size();
  if (n < 6) throw FitError("N_spin analysis needs at least 6 blocks, got " + std::to_string(n));
  if (!(block_duration_us > 0.0)) throw FitError("block duration must be > 0");
  if (!(contrast > 0.0 && contrast <= 1.0)) throw FitError("contrast must lie in (0, 1]");

  const std::size_t tail = std::max<std::size_t>(2, (n + 3) / 4);
  const std::size_t first = n - tail;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    mx += static_cast<double>(i);
    my += p0[i];
  }
  mx /= static_cast<double>(tail);
  my /= static_cast<double>(tail);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    sxy += (static_cast<double>(i) - mx) * (p0[i] - my);
    sxx += (static_cast<double>(i) - mx) * (static_cast<double>(i) - mx);
  }

  PolarizationFit out;
  out.tail_slope = sxy / sxx;
  out.p0_sat = my;
  if (!(std::abs(out.tail_slope) < 1e-3)) {
    throw FitError("P0 has not saturated: tail slope " + std::to_string(out.tail_slope) + " per block");
  }
  double cumulative = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += (out.p0_sat - p0[i]) / contrast;
    out.t_us.push_back(static_cast<double>(i + 1) * block_duration_us);
    out.n_spin.push_back(cumulative);
  }

  const double scale = std::abs(*std::max_element(out.n_spin.begin(), out.n_spin.end(),
                                                  [](double a, double b) { return std::abs(a) < std::abs(b); }));
  if (scale < 1e-12) {
    out.n_spin_sat = 0.0;
    out.t_c_us = block_duration_us;
    return out;
  }

  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(out.t_us.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(out.n_spin.data(), static_cast<Eigen::Index>(n));
  // x = (N_sat, log t_c)
  auto residual = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(x[0] * (1.0 - (-t.array() / std::exp(x[1])).exp()) - y.array());
  };
  auto jacobian = [&](const Eigen::VectorXd& x) {
    const double tc = std::exp(x[1]);
    const Eigen::ArrayXd e = (-t.array() / tc).exp();
    Eigen::MatrixXd j(t.size(), 2);
    j.col(0) = 1.0 - e;
    j.col(1) = -x[0] * e * t.array() / tc;
    return j;
  };
  Eigen::VectorXd x0(2);
  x0[0] = y[y.size() - 1];
  double t_seed = block_duration_us;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) >= (1.0 - std::exp(-1.0)) * std::abs(x0[0])) {
      t_seed = t[i];
      break;
    }
  }
  x0[1] = std::log(t_seed);
  const LmResult lm = levenberg_marquardt(residual, jacobian, x0);
  if (!lm.converged) throw FitError("saturation fit did not converge after " + std::to_string(lm.iterations) + " iterations");
  if (lm.x[0] < 0.0) throw FitError("fitted N_spin,sat is negative: no net polarization transfer");
  out.n_spin_sat = lm.x[0];
  out.t_c_us = std::exp(lm.x[1]);
  return out;
}

}  // namespace nvscope
