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

#include "nvscope/program.hpp"

namespace nvscope {

// One XY16 cycle: τ/2 edge delays, 16 π pulses, total free evolution 16τ.
std::vector<Node> xy16_unit(double tau_us);

// One PolY or PolX cycle: 12 pulses and 8 delays of τ_pol/4.
std::vector<Node> pulsepol_unit(double tau_pol_us, PolVariant variant);

// XY16-N as a single macro block. n must be a positive multiple of 16.
PulseProgram build_xy16(int n_pulses, double tau_us);

// L--X/2--(XY16-N)--(-X/2)--LRO. The closing pulse is inverted so that an
// unperturbed sensor reads P0 = 1.
PulseProgram build_xy16_readout(int n_pulses, double tau_us);

// L--X/2--(XY16-N)--(±Y/2)--t_corr--Y/2--(XY16-N)--X/2--LRO.
// storage_sign selects the phase of the first storage pulse.
PulseProgram build_correlation(double tau_us, double t_corr_us, int storage_sign = +1,
                               int block_pulses = 32);

// (PolY|PolX)^repeats.
PulseProgram build_pulsepol(double tau_pol_us, PolVariant variant, int repeats);

// (PolX)^repeats--L--(PolY)^repeats--LRO.
PulseProgram build_pulsepol_spectrum(double tau_pol_us, int repeats);

// [(PolX)^repeats--L]^n_blocks--[(PolY)^repeats--LRO]^n_blocks.
PulseProgram build_polarization_transient(double tau_pol_us, int n_blocks, int repeats);

struct RfSpec {
  double frequency_mhz = 0.0;
  double phase_rad = 0.0;
  double rabi_khz = 0.0;
};

struct RabiSpec {
  double tau_pol_us = 0.0;
  int pol_repeats = 20;
  int blocks = 10;
  double t_rf_us = 0.0;
  RfSpec rf;
};

// [(PolY)^r--L]^b--rf(T)--[(PolY)^r--LRO]^b. No rf element when T = 0.
PulseProgram build_rabi(const RabiSpec& spec);

struct FidSpec {
  PolVariant polarity = PolVariant::PolY;
  double tau_pol_us = 0.0;
  int pol_repeats = 20;
  int pol_blocks = 5;
  double t_half_pi_us = 0.0;
  RfSpec rf;
  int n_readouts = 50;
  double tau_us = 0.0;
  double t_l_us = 0.0;
};

// [(Pol)^r--L]^b--rf(T_π/2)--[X/2--(XY16-16)--Y/2--LRO--d(t_L − 16τ)]^n.
// Adjacent X/2 pulses are separated by exactly t_L.
PulseProgram build_fid(const FidSpec& spec);

}  // namespace nvscope
