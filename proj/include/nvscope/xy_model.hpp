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

// Conditional nuclear rotation of one decoupling period τ/2–π–τ–π–τ/2 for a
// single spin-1/2 nucleus. Both NV branches rotate the nucleus by the same
// angle phi about axes n0 and n1.
struct XyPeriod {
  double phi_rad = 0.0;
  double axis_overlap = 1.0;  // n0 · n1
};

XyPeriod xy_period(double f_larmor_mhz, double a_par_khz, double a_perp_khz, double tau_us);

// P0 after L--X/2--(XY16-N)--(-X/2)--LRO with a maximally mixed nucleus:
// P0 = 1 - (1 - n0·n1) sin^2(N phi / 4) / 2.
double xy_signal_p0(double f_larmor_mhz, double a_par_khz, double a_perp_khz, double tau_us, int n_pulses);

// Frequency (kHz) of the oscillation of P0 against the evolution time N τ.
double xy_oscillation_khz(double f_larmor_mhz, double a_par_khz, double a_perp_khz, double tau_us);

}  // namespace nvscope
