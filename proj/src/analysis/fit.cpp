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

#include "nvscope/analysis/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nvscope/analysis/spectrum.hpp"
#include "nvscope/errors.hpp"
#include "nvscope/units.hpp"

namespace nvscope {

LmResult levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
                             const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
                             Eigen::VectorXd x0, const LmOptions& options) {
  LmResult out;
  out.x = std::move(x0);
  Eigen::VectorXd r = residual(out.x);
  out.cost = 0.5 * r.squaredNorm();
  if (!std::isfinite(out.cost)) return out;
  double lambda = 1e-3;
  for (out.iterations = 1; out.iterations <= options.max_iterations; ++out.iterations) {
    const Eigen::MatrixXd j = jacobian(out.x);
    const Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    Eigen::VectorXd d = a.diagonal();
    const double floor = 1e-12 * std::max(d.maxCoeff(), 1e-300);
    for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = std::max(d[k], floor);
    for (;;) {
      Eigen::MatrixXd m = a;
      m.diagonal() += lambda * d;
      const Eigen::VectorXd dx = m.ldlt().solve(-g);
      if (!dx.allFinite()) {
        lambda *= 10.0;
        if (lambda > 1e16) return out;
        continue;
      }
      if (dx.norm() < options.step_tolerance * (out.x.norm() + options.step_tolerance)) {
        out.converged = true;
        return out;
      }
      const Eigen::VectorXd x_new = out.x + dx;
      const Eigen::VectorXd r_new = residual(x_new);
      const double cost_new = 0.5 * r_new.squaredNorm();
      if (std::isfinite(cost_new) && cost_new < out.cost) {
        out.x = x_new;
        r = r_new;
        out.cost = cost_new;
        lambda = std::max(lambda / 10.0, 1e-15);
        break;
      }
      lambda *= 10.0;
      // No descent direction left at machine precision: the current point is the minimum.
      if (lambda > 1e16) {
        out.converged = true;
        return out;
      }
    }
  }
  out.iterations = options.max_iterations;
  return out;
}

namespace {

struct Layout {
  int n;
  bool decay;
  int per() const { return decay ? 4 : 3; }
  int size() const { return 1 + n * per(); }
  int f(int k) const { return 1 + k * per(); }
  int a(int k) const { return f(k) + 1; }
  int b(int k) const { return f(k) + 2; }
  int g(int k) const { return f(k) + 3; }
};

}  // namespace

SinusoidFit fit_damped_sinusoid(const std::vector<double>& trace, double dt_us, int n_components,
                                const SinusoidFitOptions& options) {
  if (n_components < 1 || n_components > 2) throw FitError("component count must be 1 or 2");
  const std::size_t n = trace.size();
  if (n < static_cast<std::size_t>(4 * n_components + 1) || n < 8) {
    throw FitError("trace too short for a " + std::to_string(n_components) + "-component fit");
  }
  if (!(dt_us > 0.0)) throw FitError("sampling interval must be > 0");

  const Spectrum s = spectrum(trace, dt_us);
  std::vector<Peak> peaks = find_peaks(s);
  if (static_cast<int>(peaks.size()) < n_components) peaks = find_peaks(s, 0.01, 1);
  if (static_cast<int>(peaks.size()) < n_components) {
    throw FitError("found " + std::to_string(peaks.size()) + " spectral peaks, need " +
                   std::to_string(n_components));
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& x, const Peak& y) { return x.magnitude > y.magnitude; });
  peaks.resize(static_cast<std::size_t>(n_components));

  Eigen::VectorXd t(static_cast<Eigen::Index>(n));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    t[static_cast<Eigen::Index>(i)] = options.t0_us + static_cast<double>(i) * dt_us;
    y[static_cast<Eigen::Index>(i)] = trace[i];
  }

  const Layout lay{n_components, options.fit_decay};
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(lay.size());
  {
    // Offset and quadratures at the seed frequencies by linear least squares.
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), 1 + 2 * n_components);
    basis.col(0).setOnes();
    for (int k = 0; k < n_components; ++k) {
      const double w = units::kTwoPi * peaks[static_cast<std::size_t>(k)].freq_mhz;
      basis.col(1 + 2 * k) = (w * t).array().cos();
      basis.col(2 + 2 * k) = -(w * t).array().sin();
    }
    const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(y);
    x0[0] = c[0];
    for (int k = 0; k < n_components; ++k) {
      x0[lay.f(k)] = peaks[static_cast<std::size_t>(k)].freq_mhz;
      x0[lay.a(k)] = c[1 + 2 * k];
      x0[lay.b(k)] = c[2 + 2 * k];
    }
  }

  auto residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd model = Eigen::VectorXd::Constant(y.size(), x[0]);
    for (int k = 0; k < lay.n; ++k) {
      const Eigen::ArrayXd ph = units::kTwoPi * x[lay.f(k)] * t.array();
      const Eigen::ArrayXd env =
          lay.decay ? Eigen::ArrayXd((-x[lay.g(k)] * t.array()).exp()) : Eigen::ArrayXd::Ones(y.size());
      model.array() += env * (x[lay.a(k)] * ph.cos() - x[lay.b(k)] * ph.sin());
    }
    return Eigen::VectorXd(model - y);
  };
  auto jacobian = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd j(y.size(), lay.size());
    j.col(0).setOnes();
    for (int k = 0; k < lay.n; ++k) {
      const Eigen::ArrayXd ph = units::kTwoPi * x[lay.f(k)] * t.array();
      const Eigen::ArrayXd env =
          lay.decay ? Eigen::ArrayXd((-x[lay.g(k)] * t.array()).exp()) : Eigen::ArrayXd::Ones(y.size());
      const Eigen::ArrayXd c = ph.cos();
      const Eigen::ArrayXd sn = ph.sin();
      const double a = x[lay.a(k)];
      const double b = x[lay.b(k)];
      j.col(lay.f(k)) = env * units::kTwoPi * t.array() * (-a * sn - b * c);
      j.col(lay.a(k)) = env * c;
      j.col(lay.b(k)) = -env * sn;
      if (lay.decay) j.col(lay.g(k)) = -t.array() * env * (a * c - b * sn);
    }
    return j;
  };

  const LmResult lm = levenberg_marquardt(residual, jacobian, x0, options.lm);
  if (!lm.converged) {
    throw FitError("sinusoid fit did not converge after " + std::to_string(lm.iterations) +
                   " iterations (cost " + std::to_string(lm.cost) + ")");
  }

  SinusoidFit out;
  out.offset = lm.x[0];
  out.iterations = lm.iterations;
  out.residual_norm = std::sqrt(2.0 * lm.cost);
  for (int k = 0; k < lay.n; ++k) {
    SinusoidComponent c;
    c.freq_mhz = lm.x[lay.f(k)];
    c.amplitude = std::hypot(lm.x[lay.a(k)], lm.x[lay.b(k)]);
    c.phase_rad = std::atan2(lm.x[lay.b(k)], lm.x[lay.a(k)]);
    c.decay_per_us = lay.decay ? lm.x[lay.g(k)] : 0.0;
    out.components.push_back(c);
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const SinusoidComponent& a, const SinusoidComponent& b) { return a.freq_mhz < b.freq_mhz; });
  return out;
}

}  // namespace nvscope
