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

#include "nvscope/operators.hpp"

#include <algorithm>
#include <string>

#include "nvscope/errors.hpp"

namespace nvscope {

Eigen::Matrix2cd spin_half(SpinComponent component) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (component) {
    case SpinComponent::X:
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case SpinComponent::Y:
      m << 0.0, -0.5i, 0.5i, 0.0;
      break;
    case SpinComponent::Z:
      m << 0.5, 0.0, 0.0, -0.5;
      break;
    case SpinComponent::Plus:
      m << 0.0, 1.0, 0.0, 0.0;
      break;
    case SpinComponent::Minus:
      m << 0.0, 0.0, 1.0, 0.0;
      break;
  }
  return m;
}

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator embed(const Eigen::Matrix2cd& single, std::size_t index, std::size_t n_spins) {
  Operator out = Operator::Identity(1, 1);
  for (std::size_t k = 0; k < n_spins; ++k) {
    out = kron(out, k == index ? Operator(single) : Operator(Operator::Identity(2, 2)));
  }
  return out;
}

double hermiticity_defect(const Operator& op) {
  if (op.size() == 0) return 0.0;
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Operator& op) {
  if (op.size() == 0) return 0.0;
  return (op.adjoint() * op - Operator::Identity(op.rows(), op.cols())).cwiseAbs().maxCoeff();
}

DensityState::DensityState(Operator rho) : rho_(std::move(rho)) {}

DensityState DensityState::nv_zero(const Operator& nuclear) {
  const Eigen::Index d = nuclear.rows();
  Operator rho = Operator::Zero(2 * d, 2 * d);
  rho.topLeftCorner(d, d) = nuclear;
  return DensityState(std::move(rho));
}

DensityState DensityState::nv_zero_unpolarized(std::size_t n_nuclei) {
  const Eigen::Index d = Eigen::Index{1} << n_nuclei;
  return nv_zero(Operator::Identity(d, d) / static_cast<double>(d));
}

Operator DensityState::nuclear_state() const {
  const Eigen::Index d = nuclear_dim();
  return rho_.topLeftCorner(d, d) + rho_.bottomRightCorner(d, d);
}

double DensityState::p0() const {
  const Eigen::Index d = nuclear_dim();
  return rho_.topLeftCorner(d, d).trace().real();
}

Complex DensityState::expectation(const Operator& op) const { return (rho_ * op).trace(); }

double DensityState::trace_defect() const { return std::abs(rho_.trace() - Complex(1.0, 0.0)); }

double DensityState::hermiticity_defect() const { return nvscope::hermiticity_defect(rho_); }

double DensityState::min_eigenvalue() const {
  const Operator h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityState::check(double trace_tol, double herm_tol, double eig_tol) const {
  if (trace_defect() > trace_tol) {
    throw SimulationError("density state: trace defect " + std::to_string(trace_defect()));
  }
  if (hermiticity_defect() > herm_tol) {
    throw SimulationError("density state: Hermiticity defect " +
                          std::to_string(hermiticity_defect()));
  }
  if (min_eigenvalue() < -eig_tol) {
    throw SimulationError("density state: negative eigenvalue " +
                          std::to_string(min_eigenvalue()));
  }
}

}  // namespace nvscope
