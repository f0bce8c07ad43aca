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

#include <vector>

namespace nvscope {

struct PolarizationFit {
  double n_spin_sat = 0.0;
  double t_c_us = 0.0;
  double p0_sat = 0.0;
  double tail_slope = 0.0;  // per block
  std::vector<double> t_us;
  std::vector<double> n_spin;
};

// Cumulative transferred polarization N(n) = sum_{m<=n} (P0_sat - P0(m)) / contrast
// at t = n block_duration, fitted to N_sat (1 - exp(-t / t_c)). P0_sat is the
// mean of the last max(2, ceil(len/4)) points, whose slope must stay below
// 1e-3 per block. A series with no transfer gives N_sat = 0 and t_c = block_duration.
PolarizationFit nspin_curve(const std::vector<double>& p0, double block_duration_us, double contrast = 1.0);

}  // namespace nvscope
