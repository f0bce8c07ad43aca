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

#include <map>
#include <string>
#include <vector>

#include "nvscope/analysis/hyperfine.hpp"
#include "nvscope/constants.hpp"
#include "nvscope/dipolar.hpp"

namespace nvscope {

// Point-dipole coupling magnitude h (mu0/4pi) gamma_a gamma_b / r^3 in kHz.
double nn_coupling_estimate(const PhysicalConstants& constants, double distance_nm, double gamma_a_khz_per_mt,
                            double gamma_b_khz_per_mt);

struct ProvenanceStep {
  std::string stage;
  std::map<std::string, double> values;
};

struct Localization {
  Geometry geometry;
  HyperfineEstimate hyperfine;
  std::vector<ProvenanceStep> provenance;
};

// Position of a proton from its hyperfine estimate, with the chain
// frequencies -> hyperfine -> geometry. Earlier stages may be passed in.
Localization localize(const HyperfineEstimate& estimate, const PhysicalConstants& constants,
                      std::vector<ProvenanceStep> upstream = {},
                      double gamma_nucleus_khz_per_mt = 42.577);

}  // namespace nvscope
