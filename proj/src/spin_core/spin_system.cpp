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

#include "nvscope/spin_system.hpp"

#include <algorithm>
#include <cmath>

#include "nvscope/errors.hpp"
#include "nvscope/units.hpp"

namespace nvscope {

NuclearSpec NuclearSpec::from_geometry(std::string label, double gamma, const Geometry& geometry,
                                       const PhysicalConstants& constants) {
  NuclearSpec spec;
  spec.label = std::move(label);
  spec.gamma_khz_per_mt = gamma;
  spec.geometry = geometry;
  spec.hyperfine = dipolar_coupling(constants, geometry, constants.gamma_e_khz_per_mt, gamma);
  return spec;
}

double SpinSystem::b0_for_proton_larmor(double f_h_mhz, const PhysicalConstants& constants) {
  if (!(f_h_mhz > 0.0)) throw DomainError("proton Larmor frequency must be positive");
  return f_h_mhz * 1e3 / constants.gamma_h_khz_per_mt;
}

double SpinSystem::larmor_mhz(std::size_t index) const {
  return larmor_frequency(nuclei.at(index).gamma_khz_per_mt, b0_mt);
}

namespace {

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

void SpinSystem::validate(const PhysicalConstants& constants) const {
  if (!(b0_mt > 0.0)) throw DomainError("spin system: B0 must be positive");
  if (nuclei.size() > kMaxNuclei) {
    throw ParameterError("spin system: at most " + std::to_string(kMaxNuclei) +
                         " nuclei are supported (got " + std::to_string(nuclei.size()) + ")");
  }
  if (!(contrast >= 0.0 && contrast <= 1.0)) {
    throw ParameterError("spin system: contrast must lie in [0, 1]");
  }
  for (const auto& n : nuclei) {
    if (n.hyperfine.perp_khz < 0.0) {
      throw DomainError("nucleus '" + n.label + "': A_perp must be non-negative");
    }
    if (n.geometry) {
      const Hyperfine expect =
          dipolar_coupling(constants, *n.geometry, constants.gamma_e_khz_per_mt, n.gamma_khz_per_mt);
      const bool par_ok = close_rel(expect.par_khz, n.hyperfine.par_khz, 1e-9) ||
                          std::abs(expect.par_khz - n.hyperfine.par_khz) < 1e-12;
      const bool perp_ok = close_rel(expect.perp_khz, n.hyperfine.perp_khz, 1e-9) ||
                           std::abs(expect.perp_khz - n.hyperfine.perp_khz) < 1e-12;
      if (!par_ok || !perp_ok) {
        throw ParameterError("nucleus '" + n.label +
                             "': hyperfine values disagree with its geometry");
      }
    }
  }
  for (const auto& c : nn_couplings) {
    if (c.i >= nuclei.size() || c.j >= nuclei.size() || c.i == c.j) {
      throw ParameterError("spin system: invalid nuclear coupling indices (" +
                           std::to_string(c.i) + ", " + std::to_string(c.j) + ")");
    }
  }
}

Operator branch_hamiltonian(const SpinSystem& system, NvBranch branch) {
  const std::size_t n = system.n_nuclei();
  const auto d = static_cast<Eigen::Index>(system.nuclear_dim());
  Operator h = Operator::Zero(d, d);
  const auto iz = spin_half(SpinComponent::Z);
  const auto ix = spin_half(SpinComponent::X);
  for (std::size_t j = 0; j < n; ++j) {
    const double fl = system.larmor_mhz(j);
    const auto& hf = system.nuclei[j].hyperfine;
    if (branch == NvBranch::Zero) {
      h += units::angular(fl) * embed(iz, j, n);
    } else {
      h += units::angular(fl + units::khz_to_mhz(hf.par_khz)) * embed(iz, j, n);
      h += units::angular(units::khz_to_mhz(hf.perp_khz)) * embed(ix, j, n);
    }
  }
  const auto ip = spin_half(SpinComponent::Plus);
  const auto im = spin_half(SpinComponent::Minus);
  for (const auto& c : system.nn_couplings) {
    const Operator zz = embed(iz, c.i, n) * embed(iz, c.j, n);
    const Operator flip = embed(ip, c.i, n) * embed(im, c.j, n) + embed(im, c.i, n) * embed(ip, c.j, n);
    h += units::angular(units::khz_to_mhz(c.d_zz_khz)) * (zz - 0.25 * flip);
  }
  return h;
}

double branch_precession_mhz(const SpinSystem& system, std::size_t index, NvBranch branch) {
  const double fl = system.larmor_mhz(index);
  if (branch == NvBranch::Zero) return std::abs(fl);
  const auto& hf = system.nuclei.at(index).hyperfine;
  return std::hypot(fl + units::khz_to_mhz(hf.par_khz), units::khz_to_mhz(hf.perp_khz));
}

Operator total_nuclear_iz(std::size_t n_nuclei) {
  const auto d = Eigen::Index{1} << n_nuclei;
  Operator out = Operator::Zero(d, d);
  for (std::size_t j = 0; j < n_nuclei; ++j) out += embed(spin_half(SpinComponent::Z), j, n_nuclei);
  return out;
}

}  // namespace nvscope
