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

#include "nvscope/operators.hpp"

namespace nvscope {

// exp(-i H t) by eigendecomposition. H in rad/us, t in us.
// Throws ContractError when H is not Hermitian.
Operator propagator(const Operator& hamiltonian, double t_us);

// Diagonalises a Hamiltonian once and evaluates exp(-i H t) for any t.
class SpectralPropagator {
 public:
  SpectralPropagator() = default;
  explicit SpectralPropagator(const Operator& hamiltonian);

  Operator operator()(double t_us) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  Eigen::Index dim() const { return eigenvalues_.size(); }

 private:
  Eigen::VectorXd eigenvalues_;
  Operator eigenvectors_;
};

}  // namespace nvscope
