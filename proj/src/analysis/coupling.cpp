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

#include "nvscope/analysis/coupling.hpp"

#include <cmath>

#include "nvscope/errors.hpp"

namespace nvscope {

double nn_coupling_estimate(const PhysicalConstants& constants, double distance_nm, double gamma_a_khz_per_mt,
                            double gamma_b_khz_per_mt) {
  if (!(distance_nm > 0.0)) throw DomainError("distance must be > 0");
  return std::abs(dipolar_prefactor_khz(constants, distance_nm, gamma_a_khz_per_mt, gamma_b_khz_per_mt));
}

Localization localize(const HyperfineEstimate& estimate, const PhysicalConstants& constants,
                      std::vector<ProvenanceStep> upstream, double gamma_nucleus_khz_per_mt) {
  Localization out;
  out.hyperfine = estimate;
  out.geometry = invert_dipolar(constants, Hyperfine{estimate.a_par_khz, estimate.a_perp_khz},
                                constants.gamma_e_khz_per_mt, gamma_nucleus_khz_per_mt);
  out.provenance = std::move(upstream);
  out.provenance.push_back(ProvenanceStep{"frequencies",
                                          {{"f0_mhz", estimate.f0_mhz},
                                           {"f1_mhz", estimate.f1_mhz},
                                           {"f_osc_khz", estimate.f_osc_khz},
                                           {"tau_us", estimate.tau_us}}});
  out.provenance.push_back(ProvenanceStep{"hyperfine",
                                          {{"a_par_khz", estimate.a_par_khz},
                                           {"a_perp_khz", estimate.a_perp_khz},
                                           {"closed_par_khz", estimate.closed_par_khz},
                                           {"closed_perp_khz", estimate.closed_perp_khz}}});
  out.provenance.push_back(
      ProvenanceStep{"geometry", {{"r_nm", out.geometry.r_nm}, {"theta_deg", out.geometry.theta_deg}}});
  return out;
}

}  // namespace nvscope
