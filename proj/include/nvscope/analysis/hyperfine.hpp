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

#pragma once

namespace nvscope {

// Hyperfine components from correlation and pulse-number data.
struct HyperfineEstimate {
  double a_par_khz = 0.0;
  double a_perp_khz = 0.0;
  // Inputs.
  double f0_mhz = 0.0;
  double f1_mhz = 0.0;
  double f_osc_khz = 0.0;
  double tau_us = 0.0;
  double f_h_mhz = 0.0;
  // Both inversion paths.
  double closed_par_khz = 0.0;
  double closed_perp_khz = 0.0;
  double numeric_par_khz = 0.0;
  double numeric_perp_khz = 0.0;
  int newton_iterations = 0;
};

// Exact single-period relation. With θ0 = 2π f0 τ, θ1 = 2π f1 τ and the period
// rotation angle φ (|φ mod 2π| = 4π τ f_osc):
//   cos(φ/2) = cos(θ0/2) cos(θ1/2) - sin(θ0/2) sin(θ1/2) cos β
//   A_par = f1 cos β - f0,  A_perp = f1 sin β
// f0 is the bare Larmor frequency. Throws InversionError when no real β exists.
HyperfineEstimate hyperfine_closed_form(double f0_mhz, double f1_mhz, double f_osc_khz, double tau_us,
                                        double f_h_mhz);

// Newton iteration on the forward model (f1, f_osc)(A_par, A_perp), seeded from
// the resonant approximation A_perp = π f_osc.
HyperfineEstimate hyperfine_numerical(double f0_mhz, double f1_mhz, double f_osc_khz, double tau_us,
                                      double f_h_mhz);

// Runs both paths and requires them to agree within tolerance_khz; the numerical
// result is reported. Disagreement raises InversionError.
HyperfineEstimate hyperfine_from_correlation(double f0_mhz, double f1_mhz, double f_osc_khz, double tau_us,
                                             double f_h_mhz, double tolerance_khz = 0.5);

// (f0 + f1)/2 t_s/t_L + f0 (t_L - t_s)/t_L. Requires 0 < t_s <= t_L.
double predict_fp(double f0_mhz, double f1_mhz, double t_s_us, double t_l_us);

}  // namespace nvscope
