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

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nvscope/builders.hpp"
#include "nvscope/simulator.hpp"

namespace nvscope {

struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<double> p0_values;
  // Every readout of every point when a program reads more than once.
  std::vector<std::vector<double>> traces;
};

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index runs exactly once.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

// τ values whose (2τ)^-1 spans the frequency grid.
std::vector<double> tau_grid_for_frequencies(const std::vector<double>& f_mhz);

// XY16-N spectrum. Axis: (2τ)^-1 in MHz, ascending.
SweepResult sweep_tau(const SpinSystem& system, int n_pulses, const std::vector<double>& tau_us,
                      const SimulationOptions& options = {});

// P0 against pulse number at fixed τ. Axis: N.
SweepResult sweep_pulses(const SpinSystem& system, double tau_us, const std::vector<int>& n_pulses,
                         const SimulationOptions& options = {});

// Correlation spectroscopy with the storage pulse phase-cycled:
// P0 = 1/2 + (P0(+Y/2) - P0(-Y/2)) / 2. Axis: t_corr in µs.
SweepResult sweep_correlation(const SpinSystem& system, double tau_us, const std::vector<double>& t_corr_us,
                              const SimulationOptions& options = {}, int block_pulses = 32);

struct B0Point {
  double b0_mt = 0.0;
  double f0_mhz = 0.0;
  double f1_mhz = 0.0;
  double f_xy_mhz = 0.0;
};

// Branch precession frequencies of nucleus `index` and the XY16-N dip position
// at every field. The dip is located on the simulated spectrum.
std::vector<B0Point> sweep_b0(const SpinSystem& system_template, const std::vector<double>& b0_mt,
                              const SimulationOptions& options = {}, std::size_t index = 0, int n_pulses = 64);

// XY16-N dip position by simulation: grid minimum then golden-section refinement.
double locate_xy_dip(const SpinSystem& system, double f_lo_mhz, double f_hi_mhz, int n_pulses,
                     const SimulationOptions& options = {});

// (PolX)^r--L--(PolY)^r--LRO. Axis: (2τ_pol)^-1 in MHz, ascending, where 2τ_pol
// is the free evolution of one PulsePol unit.
SweepResult sweep_pulsepol(const SpinSystem& system, const std::vector<double>& tau_pol_us, int repeats = 20,
                           const SimulationOptions& options = {});

// <Iz> of every nucleus after (Pol)^repeats from NV m_S = 0 and unpolarized nuclei.
std::vector<double> pulsepol_polarization(const SpinSystem& system, double tau_pol_us, PolVariant variant,
                                          int repeats = 20, const SimulationOptions& options = {});

struct TransientResult {
  SweepResult series;  // axis: block index n = 1..n_blocks
  double block_duration_us = 0.0;
};

// [(PolX)^r--L]^n--[(PolY)^r--LRO]^n, P0 after every PolY block.
TransientResult polarization_transient(const SpinSystem& system, double tau_pol_us, int n_blocks = 20,
                                       int repeats = 20, const SimulationOptions& options = {});

// P0 at the first readout after the rf pulse. Axis: T_rf in µs.
SweepResult simulate_rabi(const SpinSystem& system, const RabiSpec& base, const std::vector<double>& t_rf_us,
                          const SimulationOptions& options = {});

struct FidResult {
  std::vector<double> t_us;  // k t_L
  std::vector<double> poly;
  std::vector<double> polx;
  std::vector<double> difference;  // PolY - PolX
  double sample_rate_mhz = 0.0;
};

// Undersampled FID readout for one polarity.
std::vector<double> simulate_fid(const SpinSystem& system, const FidSpec& spec, const SimulationOptions& options = {});

// Both polarities and their difference.
FidResult simulate_fid_pair(const SpinSystem& system, const FidSpec& spec, const SimulationOptions& options = {});

}  // namespace nvscope
