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

#include <cstdint>
#include <vector>

#include "nvscope/operators.hpp"
#include "nvscope/program.hpp"
#include "nvscope/spin_system.hpp"

namespace nvscope {

enum class ReadoutMode { Ideal, Contrast, ShotNoise };

// Maps the exact P0 to the reported value.
//   Ideal:     P0
//   Contrast:  1/2 + c (P0 - 1/2)
//   ShotNoise: Binomial(photons_per_read, contrast-mapped P0) / photons_per_read
struct ReadoutModel {
  ReadoutMode mode = ReadoutMode::Ideal;
  double contrast = 1.0;
  int photons_per_read = 1000;
  std::uint64_t seed = 0;

  static ReadoutModel ideal() { return {}; }
  static ReadoutModel with_contrast(double c) { return {ReadoutMode::Contrast, c, 1000, 0}; }
  static ReadoutModel shot_noise(double c, int photons, std::uint64_t seed) {
    return {ReadoutMode::ShotNoise, c, photons, seed};
  }

  // Throws ParameterError for contrast outside [0, 1] or photons_per_read < 1.
  void validate() const;
};

struct SimulationOptions {
  ReadoutModel readout;
  // Duration of a microwave π pulse. 0 selects ideal instantaneous pulses.
  double mw_pi_duration_us = 0.0;
  // Per-nucleus depolarization probability applied at every laser element.
  double depolarization_per_laser = 0.0;
  // Exponential NV contrast decay with time since the last laser element. 0 disables it.
  double coherence_decay_us = 0.0;
  // Apply every element individually and check the state invariants after each.
  bool check_invariants = false;
  // Noise stream index; sweeps set it to the grid-point index.
  std::uint64_t stream = 0;
  // Worker threads for sweeps. Results do not depend on it.
  unsigned threads = 1;
};

struct RunResult {
  std::vector<double> p0;
  DensityState final_state;
  double duration_us = 0.0;
};

// Runs a program from the given initial state. Laser elements project the NV to
// m_S = 0 and keep the reduced nuclear state.
RunResult run_program(const SpinSystem& system, const PulseProgram& program, const DensityState& initial,
                      const SimulationOptions& options = {});

// Starts from NV in m_S = 0 with maximally mixed nuclei.
RunResult run_program(const SpinSystem& system, const PulseProgram& program,
                      const SimulationOptions& options = {});

// Joint-space unitary of a laser-free program segment starting at program time t0_us.
Operator segment_unitary(const SpinSystem& system, const std::vector<Node>& nodes, double t0_us = 0.0,
                         const SimulationOptions& options = {});

// Block-diagonal delay propagator diag(exp(-i H0 t), exp(-i H1 t)).
Operator delay_unitary(const SpinSystem& system, double t_us);

// Ideal microwave rotation on the NV factor, identity on the nuclei.
Operator mw_unitary(const MwPulse& pulse, std::size_t nuclear_dim);

// <Iz> of every nucleus in the reduced nuclear state.
std::vector<double> nuclear_polarization(const DensityState& state);

// Deterministic 64-bit mix of (seed, stream, index).
std::uint64_t noise_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace nvscope
