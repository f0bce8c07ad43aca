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

#include "nvscope/propagator.hpp"

#include <algorithm>
#include <string>

#include "nvscope/errors.hpp"

namespace nvscope {

namespace {

void require_hermitian(const Operator& h) {
  if (h.rows() != h.cols()) throw ContractError("propagator: Hamiltonian is not square");
  if (h.size() == 0) return;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(h);
  if (defect > 1e-10 * scale) {
    throw ContractError("propagator: Hamiltonian is not Hermitian (defect " +
                        std::to_string(defect) + ")");
  }
}

}  // namespace

SpectralPropagator::SpectralPropagator(const Operator& hamiltonian) {
  require_hermitian(hamiltonian);
  Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (hamiltonian + hamiltonian.adjoint()));
  if (solver.info() != Eigen::Success) throw ContractError("propagator: eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Operator SpectralPropagator::operator()(double t_us) const {
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    phases(k) = std::polar(1.0, -eigenvalues_(k) * t_us);
  }
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Operator propagator(const Operator& hamiltonian, double t_us) {
  return SpectralPropagator(hamiltonian)(t_us);
}

}  // namespace nvscope
