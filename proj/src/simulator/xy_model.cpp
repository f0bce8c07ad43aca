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

#include "nvscope/xy_model.hpp"

#include <array>
#include <cmath>

#include "nvscope/errors.hpp"
#include "nvscope/units.hpp"

namespace nvscope {
namespace {

// Unit quaternion (w, x, y, z) for exp(-i angle n·σ/2).
using Quat = std::array<double, 4>;

Quat rotation(double angle, double nx, double ny, double nz) {
  const double s = std::sin(angle / 2.0);
  return {std::cos(angle / 2.0), nx * s, ny * s, nz * s};
}

// a then b: the operator product b·a.
Quat then(const Quat& a, const Quat& b) {
  return {b[0] * a[0] - b[1] * a[1] - b[2] * a[2] - b[3] * a[3],
          b[0] * a[1] + b[1] * a[0] + b[2] * a[3] - b[3] * a[2],
          b[0] * a[2] - b[1] * a[3] + b[2] * a[0] + b[3] * a[1],
          b[0] * a[3] + b[1] * a[2] - b[2] * a[1] + b[3] * a[0]};
}

}  // namespace

XyPeriod xy_period(double f_larmor_mhz, double a_par_khz, double a_perp_khz, double tau_us) {
  if (!(tau_us > 0.0)) throw ParameterError("tau must be > 0");
  const double fz = f_larmor_mhz + units::khz_to_mhz(a_par_khz);
  const double fx = units::khz_to_mhz(a_perp_khz);
  const double f1 = std::hypot(fz, fx);
  const double nx = f1 > 0.0 ? fx / f1 : 0.0;
  const double nz = f1 > 0.0 ? fz / f1 : 1.0;

  auto zero = [&](double t) { return rotation(units::kTwoPi * f_larmor_mhz * t, 0.0, 0.0, 1.0); };
  auto minus_one = [&](double t) { return rotation(units::kTwoPi * f1 * t, nx, 0.0, nz); };

  const Quat v0 = then(then(zero(tau_us / 2.0), minus_one(tau_us)), zero(tau_us / 2.0));
  const Quat v1 = then(then(minus_one(tau_us / 2.0), zero(tau_us)), minus_one(tau_us / 2.0));

  XyPeriod out;
  const double s0 = std::sqrt(v0[1] * v0[1] + v0[2] * v0[2] + v0[3] * v0[3]);
  const double s1 = std::sqrt(v1[1] * v1[1] + v1[2] * v1[2] + v1[3] * v1[3]);
  out.phi_rad = 2.0 * std::atan2(s0, v0[0]);
  if (s0 > 1e-300 && s1 > 1e-300) {
    out.axis_overlap = (v0[1] * v1[1] + v0[2] * v1[2] + v0[3] * v1[3]) / (s0 * s1);
  }
  return out;
}

double xy_signal_p0(double f_larmor_mhz, double a_par_khz, double a_perp_khz, double tau_us, int n_pulses) {
  if (n_pulses <= 0 || n_pulses % 2 != 0) throw ParameterError("pulse count must be a positive even number");
  const XyPeriod p = xy_period(f_larmor_mhz, a_par_khz, a_perp_khz, tau_us);
  const double s = std::sin(n_pulses * p.phi_rad / 4.0);
  return 1.0 - 0.5 * (1.0 - p.axis_overlap) * s * s;
}

double xy_oscillation_khz(double f_larmor_mhz, double a_par_khz, double a_perp_khz, double tau_us) {
  const XyPeriod p = xy_period(f_larmor_mhz, a_par_khz, a_perp_khz, tau_us);
  const double wrapped = std::abs(std::remainder(p.phi_rad, units::kTwoPi));
  return units::mhz_to_khz(wrapped / (2.0 * units::kTwoPi * tau_us));
}

}  // namespace nvscope
