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

#include "nvscope/constants.hpp"

namespace nvscope {

// Secular hyperfine components / 2pi in kHz. perp_khz is non-negative; the
// sign is absorbed into the choice of the nuclear x axis.
struct Hyperfine {
  double par_khz = 0.0;
  double perp_khz = 0.0;

  bool operator==(const Hyperfine&) const = default;
};

// Position of a nucleus relative to the NV: distance and polar angle from the NV axis.
struct Geometry {
  double r_nm = 0.0;
  double theta_deg = 0.0;

  bool operator==(const Geometry&) const = default;
};

// Angle where 3 cos^2(theta) = 1.
double magic_angle_deg();

// Point-dipole prefactor (mu0/4pi) h gamma_a gamma_b / r^3 in kHz (signed by gamma_a*gamma_b).
double dipolar_prefactor_khz(const PhysicalConstants& constants, double r_nm,
                             double gamma_a_khz_per_mt, double gamma_b_khz_per_mt);

// Purely dipolar hyperfine coupling of a nucleus at (r, theta):
//   A_par  = K (3 cos^2 theta - 1) / r^3
//   A_perp = K 3 sin theta cos theta / r^3   (returned as magnitude)
Hyperfine dipolar_coupling(const PhysicalConstants& constants, const Geometry& geometry,
                           double gamma_a_khz_per_mt, double gamma_b_khz_per_mt);

// Inverse of dipolar_coupling. The branch theta in [0, 90] deg is returned;
// theta and 180 - theta give the same (A_par, |A_perp|).
// Throws InversionError for (0, 0) and DomainError for A_perp < 0.
Geometry invert_dipolar(const PhysicalConstants& constants, const Hyperfine& hyperfine,
                        double gamma_a_khz_per_mt, double gamma_b_khz_per_mt);

}  // namespace nvscope
