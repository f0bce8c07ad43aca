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
#include <functional>
#include <vector>

namespace nvscope {

struct LmOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;
};

struct LmResult {
  Eigen::VectorXd x;
  double cost = 0.0;  // 0.5 |r|^2
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt with Marquardt diagonal scaling. residual(x) returns r,
// jacobian(x) returns dr/dx. Converges when |dx| < step_tolerance (|x| + tol).
LmResult levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                             const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                             Eigen::VectorXd x0, const LmOptions& options = {});

struct SinusoidComponent {
  double freq_mhz = 0.0;
  double amplitude = 0.0;
  double phase_rad = 0.0;
  double decay_per_us = 0.0;
};

struct SinusoidFit {
  std::vector<SinusoidComponent> components;  // ascending frequency
  double offset = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
};

struct SinusoidFitOptions {
  bool fit_decay = true;
  double t0_us = 0.0;
  LmOptions lm;
};

// y(t) = offset + sum_k A_k exp(-g_k t) cos(2 pi f_k t + phi_k), t = t0 + i dt.
// Seeded from the largest Hann-window spectral peaks. Throws FitError when the
// solver does not converge or the trace is shorter than 4 n + 1 samples.
SinusoidFit fit_damped_sinusoid(const std::vector<double>& trace, double dt_us, int n_components,
                                const SinusoidFitOptions& options = {});

}  // namespace nvscope
