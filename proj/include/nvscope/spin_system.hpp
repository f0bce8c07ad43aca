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
#include <optional>
#include <string>
#include <vector>

#include "nvscope/constants.hpp"
#include "nvscope/dipolar.hpp"
#include "nvscope/operators.hpp"

namespace nvscope {

inline constexpr std::size_t kMaxNuclei = 8;

struct NuclearSpec {
  std::string label;
  double gamma_khz_per_mt = 42.577;
  Hyperfine hyperfine;
  std::optional<Geometry> geometry;

  // Nucleus whose hyperfine components follow from its position (dipolar coupling to the NV).
  static NuclearSpec from_geometry(std::string label, double gamma_khz_per_mt,
                                   const Geometry& geometry,
                                   const PhysicalConstants& constants = PhysicalConstants::standard());

  bool operator==(const NuclearSpec&) const = default;
};

// Secular nuclear-nuclear coupling d_zz / 2pi in kHz between nuclei i and j.
struct NuclearCoupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double d_zz_khz = 0.0;

  bool operator==(const NuclearCoupling&) const = default;
};

struct SpinSystem {
  double b0_mt = 0.0;
  std::vector<NuclearSpec> nuclei;
  std::vector<NuclearCoupling> nn_couplings;
  double contrast = 1.0;

  // Field that puts the proton Larmor frequency exactly at f_h_mhz.
  static double b0_for_proton_larmor(double f_h_mhz,
                                     const PhysicalConstants& constants = PhysicalConstants::standard());

  std::size_t n_nuclei() const { return nuclei.size(); }
  std::size_t nuclear_dim() const { return std::size_t{1} << nuclei.size(); }
  std::size_t dim() const { return 2 * nuclear_dim(); }
  double larmor_mhz(std::size_t index) const;

  // Throws DomainError/ParameterError for B0 <= 0, more than kMaxNuclei nuclei,
  // negative A_perp, bad coupling indices or a geometry that disagrees with the
  // stored hyperfine values by more than 1e-9 relative.
  void validate(const PhysicalConstants& constants = PhysicalConstants::standard()) const;

  bool operator==(const SpinSystem&) const = default;
};

// NV sublevel that conditions the nuclear Hamiltonian.
enum class NvBranch { Zero, MinusOne };

// Nuclear Hamiltonian (rad/us) for one NV branch:
//   m_S = 0 :  sum_j 2pi f_L,j Iz_j
//   m_S = -1:  sum_j 2pi [(f_L,j + A_par,j) Iz_j + A_perp,j Ix_j]
// plus 2pi d_zz [Iz_i Iz_j - (I+_i I-_j + I-_i I+_j)/4] on both branches.
Operator branch_hamiltonian(const SpinSystem& system, NvBranch branch);

// Precession frequency (MHz) of a lone nucleus on a branch, sqrt((f_L + A_par)^2 + A_perp^2)
// on m_S = -1 and f_L on m_S = 0.
double branch_precession_mhz(const SpinSystem& system, std::size_t index, NvBranch branch);

// Sum of Iz over all nuclei (nuclear subspace).
Operator total_nuclear_iz(std::size_t n_nuclei);

}  // namespace nvscope
