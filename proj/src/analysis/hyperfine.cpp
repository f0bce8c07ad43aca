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

#include "nvscope/analysis/hyperfine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nvscope/errors.hpp"
#include "nvscope/units.hpp"
#include "nvscope/xy_model.hpp"

namespace nvscope {
namespace {

void check_inputs(double f0, double f1, double f_osc_khz, double tau) {
  if (!(f0 > 0.0) || !(f1 > 0.0)) throw InversionError("precession frequencies must be > 0");
  if (!(f_osc_khz >= 0.0)) throw InversionError("f_osc must be >= 0");
  if (!(tau > 0.0)) throw InversionError("tau must be > 0");
  if (units::khz_to_mhz(f_osc_khz) > 1.0 / (4.0 * tau)) {
    throw InversionError("f_osc exceeds 1/(4 tau): no period rotation angle matches it");
  }
}

HyperfineEstimate record(double f0, double f1, double f_osc_khz, double tau, double f_h) {
  HyperfineEstimate e;
  e.f0_mhz = f0;
  e.f1_mhz = f1;
  e.f_osc_khz = f_osc_khz;
  e.tau_us = tau;
  e.f_h_mhz = f_h;
  return e;
}

using Vec2 = std::array<double, 2>;

double f1_model_khz(double f0, const Vec2& a) {
  return units::mhz_to_khz(std::hypot(f0 + units::khz_to_mhz(a[0]), units::khz_to_mhz(a[1])));
}

Vec2 mismatch(double f0, double f1, double f_osc_khz, double tau, const Vec2& a) {
  return {f1_model_khz(f0, a) - units::mhz_to_khz(f1), xy_oscillation_khz(f0, a[0], a[1], tau) - f_osc_khz};
}

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

}  // namespace

HyperfineEstimate hyperfine_closed_form(double f0, double f1, double f_osc_khz, double tau, double f_h) {
  check_inputs(f0, f1, f_osc_khz, tau);
  const double h0 = units::kPi * f0 * tau;
  const double h1 = units::kPi * f1 * tau;
  const double s = std::sin(h0) * std::sin(h1);
  if (std::abs(s) < 1e-12) throw InversionError("tau is commensurate with a precession period: relation is singular");
  const double c = std::cos(h0) * std::cos(h1);
  const double half_phi = units::kTwoPi * tau * units::khz_to_mhz(f_osc_khz);
  const std::array<double, 2> candidates = {(c - std::cos(half_phi)) / s, (c + std::cos(half_phi)) / s};
  double cos_beta = -2.0;
  for (double cb : candidates) {
    if (std::abs(cb) <= 1.0 + 1e-12) cos_beta = std::max(cos_beta, std::clamp(cb, -1.0, 1.0));
  }
  if (cos_beta < -1.0) {
    throw InversionError("no hyperfine tilt is consistent with f0, f1, f_osc and tau");
  }
  const double sin_beta = std::sqrt(std::max(0.0, 1.0 - cos_beta * cos_beta));
  HyperfineEstimate e = record(f0, f1, f_osc_khz, tau, f_h);
  e.closed_par_khz = units::mhz_to_khz(f1 * cos_beta - f0);
  e.closed_perp_khz = units::mhz_to_khz(f1 * sin_beta);
  e.a_par_khz = e.closed_par_khz;
  e.a_perp_khz = e.closed_perp_khz;
  return e;
}

HyperfineEstimate hyperfine_numerical(double f0, double f1, double f_osc_khz, double tau, double f_h) {
  check_inputs(f0, f1, f_osc_khz, tau);
  Vec2 a;
  a[1] = units::kPi * f_osc_khz;
  const double f1_khz = units::mhz_to_khz(f1);
  a[0] = (a[1] < f1_khz ? std::sqrt(f1_khz * f1_khz - a[1] * a[1]) : f1_khz) - units::mhz_to_khz(f0);

  Vec2 r = mismatch(f0, f1, f_osc_khz, tau, a);
  int iterations = 0;
  constexpr double kStep = 1e-3;
  while (norm(r) > 1e-10 && iterations < 100) {
    ++iterations;
    double j[2][2];
    for (int k = 0; k < 2; ++k) {
      Vec2 up = a;
      Vec2 dn = a;
      up[static_cast<std::size_t>(k)] += kStep;
      dn[static_cast<std::size_t>(k)] -= kStep;
      const Vec2 ru = mismatch(f0, f1, f_osc_khz, tau, up);
      const Vec2 rd = mismatch(f0, f1, f_osc_khz, tau, dn);
      j[0][k] = (ru[0] - rd[0]) / (2.0 * kStep);
      j[1][k] = (ru[1] - rd[1]) / (2.0 * kStep);
    }
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if (!(std::abs(det) > 1e-14)) throw InversionError("hyperfine Newton iteration hit a singular Jacobian");
    const Vec2 step = {-(j[1][1] * r[0] - j[0][1] * r[1]) / det, -(-j[1][0] * r[0] + j[0][0] * r[1]) / det};
    double scale = 1.0;
    Vec2 trial{};
    Vec2 rt{};
    for (int halvings = 0; halvings < 40; ++halvings, scale *= 0.5) {
      trial = {a[0] + scale * step[0], std::abs(a[1] + scale * step[1])};
      rt = mismatch(f0, f1, f_osc_khz, tau, trial);
      if (norm(rt) < norm(r)) break;
    }
    if (!(norm(rt) < norm(r))) break;
    const double moved = std::hypot(trial[0] - a[0], trial[1] - a[1]);
    a = trial;
    r = rt;
    if (moved < 1e-11) break;
  }
  if (!(norm(r) < 1e-6)) {
    throw InversionError("hyperfine Newton iteration did not converge (residual " + std::to_string(norm(r)) +
                         " kHz)");
  }
  HyperfineEstimate e = record(f0, f1, f_osc_khz, tau, f_h);
  e.numeric_par_khz = a[0];
  e.numeric_perp_khz = a[1];
  e.a_par_khz = a[0];
  e.a_perp_khz = a[1];
  e.newton_iterations = iterations;
  return e;
}

HyperfineEstimate hyperfine_from_correlation(double f0, double f1, double f_osc_khz, double tau, double f_h,
                                             double tolerance_khz) {
  const HyperfineEstimate closed = hyperfine_closed_form(f0, f1, f_osc_khz, tau, f_h);
  HyperfineEstimate out = hyperfine_numerical(f0, f1, f_osc_khz, tau, f_h);
  out.closed_par_khz = closed.closed_par_khz;
  out.closed_perp_khz = closed.closed_perp_khz;
  const double gap = std::max(std::abs(out.closed_par_khz - out.numeric_par_khz),
                              std::abs(out.closed_perp_khz - out.numeric_perp_khz));
  if (gap > tolerance_khz) {
    throw InversionError("closed-form and numerical hyperfine estimates differ by " + std::to_string(gap) +
                         " kHz");
  }
  return out;
}

double predict_fp(double f0, double f1, double t_s, double t_l) {
  if (!(t_s > 0.0) || !(t_s <= t_l)) throw TimingError("f_p needs 0 < t_s <= t_L");
  return 0.5 * (f0 + f1) * (t_s / t_l) + f0 * (t_l - t_s) / t_l;
}

}  // namespace nvscope
