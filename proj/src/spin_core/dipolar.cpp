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

#include "nvscope/dipolar.hpp"

#include <cmath>

#include "nvscope/errors.hpp"
#include "nvscope/units.hpp"

namespace nvscope {

double magic_angle_deg() { return units::rad_to_deg(std::acos(1.0 / std::sqrt(3.0))); }

double dipolar_prefactor_khz(const PhysicalConstants& c, double r_nm, double gamma_a,
                             double gamma_b) {
  if (!(r_nm > 0.0)) throw DomainError("dipolar coupling: distance must be positive");
  const double r = units::nm_to_m(r_nm);
  const double hz = c.mu0 / (4.0 * units::kPi) * c.h * units::khz_per_mt_to_hz_per_t(gamma_a) *
                    units::khz_per_mt_to_hz_per_t(gamma_b) / (r * r * r);
  return hz * 1e-3;
}

Hyperfine dipolar_coupling(const PhysicalConstants& c, const Geometry& g, double gamma_a,
                           double gamma_b) {
  if (!(g.theta_deg >= 0.0 && g.theta_deg <= 180.0)) {
    throw DomainError("dipolar coupling: theta must lie in [0, 180] degrees");
  }
  const double k = dipolar_prefactor_khz(c, g.r_nm, gamma_a, gamma_b);
  const double theta = units::deg_to_rad(g.theta_deg);
  const double cs = std::cos(theta);
  const double sn = g.theta_deg == 0.0 || g.theta_deg == 180.0 ? 0.0 : std::sin(theta);
  return {k * (3.0 * cs * cs - 1.0), std::abs(k * 3.0 * sn * cs)};
}

Geometry invert_dipolar(const PhysicalConstants& c, const Hyperfine& hf, double gamma_a,
                        double gamma_b) {
  if (hf.perp_khz < 0.0) throw DomainError("invert_dipolar: A_perp must be non-negative");
  if (hf.par_khz == 0.0 && hf.perp_khz == 0.0) {
    throw InversionError("invert_dipolar: no geometry reproduces A_par = A_perp = 0");
  }
  // Normalise by the prefactor at r = 1 nm, so a = (3cos^2 - 1)/r^3 and
  // b = 3 sin cos / r^3 with r in nm. With u = 2 theta and s = r^3:
  //   a s = (1 + 3 cos u)/2,  b s = (3/2) sin u
  // which gives (a^2 + b^2) s^2 - a s - 2 = 0.
  const double k1 = dipolar_prefactor_khz(c, 1.0, gamma_a, gamma_b);
  const double a = hf.par_khz / k1;
  const double b = hf.perp_khz / std::abs(k1);
  const double norm2 = a * a + b * b;
  const double s = (a + std::sqrt(a * a + 8.0 * norm2)) / (2.0 * norm2);
  const double cos_u = (2.0 * a * s - 1.0) / 3.0;
  const double sin_u = 2.0 * b * s / 3.0;
  const double u = std::atan2(sin_u, cos_u);
  return {std::cbrt(s), units::rad_to_deg(0.5 * u)};
}

}  // namespace nvscope
