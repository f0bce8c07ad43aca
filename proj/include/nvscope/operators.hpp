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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

namespace nvscope {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;

// Spin-1/2 operators (Pauli / 2).
enum class SpinComponent { X, Y, Z, Plus, Minus };

Eigen::Matrix2cd spin_half(SpinComponent component);

// Single-spin operator acting on spin `index` of an `n_spins` register
// (index 0 is the most significant factor of the tensor product).
Operator embed(const Eigen::Matrix2cd& single, std::size_t index, std::size_t n_spins);

// Kronecker product a (x) b.
Operator kron(const Operator& a, const Operator& b);

// max |H - H^dagger|
double hermiticity_defect(const Operator& op);

// max |U^dagger U - 1|
double unitarity_defect(const Operator& op);

// Joint NV (x) nuclei density matrix. The NV two-level factor is the most
// significant index: rows [0, d) are m_S = 0, rows [d, 2d) are m_S = -1.
class DensityState {
 public:
  DensityState() = default;
  explicit DensityState(Operator rho);

  // NV in m_S = 0 with the given nuclear state.
  static DensityState nv_zero(const Operator& nuclear);
  // NV in m_S = 0, nuclei maximally mixed.
  static DensityState nv_zero_unpolarized(std::size_t n_nuclei);

  const Operator& matrix() const { return rho_; }
  Operator& matrix() { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  Eigen::Index nuclear_dim() const { return rho_.rows() / 2; }

  // Reduced nuclear state Tr_NV(rho).
  Operator nuclear_state() const;
  // <0| Tr_nuc rho |0>
  double p0() const;
  Complex expectation(const Operator& op) const;

  double trace_defect() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  // Throws SimulationError when trace, Hermiticity or positivity tolerances fail.
  void check(double trace_tol = 1e-10, double herm_tol = 1e-12, double eig_tol = 1e-9) const;

 private:
  Operator rho_;
};

}  // namespace nvscope
