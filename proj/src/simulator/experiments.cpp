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

#include "nvscope/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "nvscope/errors.hpp"

namespace nvscope {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        // The lowest failing index wins so the reported error does not depend on scheduling.
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

SimulationOptions point_options(const SimulationOptions& options, std::uint64_t stream) {
  SimulationOptions o = options;
  o.stream = stream;
  return o;
}

std::vector<std::size_t> ascending_order(const std::vector<double>& axis) {
  std::vector<std::size_t> order(axis.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return axis[a] < axis[b]; });
  return order;
}

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw ParameterError(std::string(what) + " grid is empty");
}

double xy_point(const SpinSystem& system, int n_pulses, double f_mhz, const SimulationOptions& options) {
  const auto r = run_program(system, build_xy16_readout(n_pulses, 1.0 / (2.0 * f_mhz)), options);
  return r.p0.at(0);
}

}  // namespace

std::vector<double> tau_grid_for_frequencies(const std::vector<double>& f_mhz) {
  std::vector<double> tau;
  tau.reserve(f_mhz.size());
  for (double f : f_mhz) {
    if (!(f > 0.0)) throw ParameterError("frequency grid values must be > 0");
    tau.push_back(1.0 / (2.0 * f));
  }
  return tau;
}

SweepResult sweep_tau(const SpinSystem& system, int n_pulses, const std::vector<double>& tau_us,
                      const SimulationOptions& options) {
  require_nonempty(tau_us.size(), "tau");
  std::vector<double> axis;
  for (double t : tau_us) {
    if (!(t > 0.0)) throw ParameterError("tau grid values must be > 0");
    axis.push_back(1.0 / (2.0 * t));
  }
  const auto order = ascending_order(axis);
  SweepResult out;
  out.axis_name = "inverse_2tau_mhz";
  out.axis_values.resize(order.size());
  out.p0_values.resize(order.size());
  parallel_for(order.size(), options.threads, [&](std::size_t i) {
    const double tau = tau_us[order[i]];
    const auto r = run_program(system, build_xy16_readout(n_pulses, tau), point_options(options, i));
    out.axis_values[i] = axis[order[i]];
    out.p0_values[i] = r.p0.at(0);
  });
  return out;
}

SweepResult sweep_pulses(const SpinSystem& system, double tau_us, const std::vector<int>& n_pulses,
                         const SimulationOptions& options) {
  require_nonempty(n_pulses.size(), "pulse-number");
  std::vector<double> axis(n_pulses.begin(), n_pulses.end());
  const auto order = ascending_order(axis);
  SweepResult out;
  out.axis_name = "n_pulses";
  out.axis_values.resize(order.size());
  out.p0_values.resize(order.size());
  parallel_for(order.size(), options.threads, [&](std::size_t i) {
    const int n = n_pulses[order[i]];
    const auto r = run_program(system, build_xy16_readout(n, tau_us), point_options(options, i));
    out.axis_values[i] = n;
    out.p0_values[i] = r.p0.at(0);
  });
  return out;
}

SweepResult sweep_correlation(const SpinSystem& system, double tau_us, const std::vector<double>& t_corr_us,
                              const SimulationOptions& options, int block_pulses) {
  require_nonempty(t_corr_us.size(), "t_corr");
  const auto order = ascending_order(t_corr_us);
  SweepResult out;
  out.axis_name = "t_corr_us";
  out.axis_values.resize(order.size());
  out.p0_values.resize(order.size());
  parallel_for(order.size(), options.threads, [&](std::size_t i) {
    const double t = t_corr_us[order[i]];
    const auto plus =
        run_program(system, build_correlation(tau_us, t, +1, block_pulses), point_options(options, 2 * i));
    const auto minus =
        run_program(system, build_correlation(tau_us, t, -1, block_pulses), point_options(options, 2 * i + 1));
    out.axis_values[i] = t;
    out.p0_values[i] = 0.5 + 0.5 * (plus.p0.at(0) - minus.p0.at(0));
  });
  return out;
}

double locate_xy_dip(const SpinSystem& system, double f_lo_mhz, double f_hi_mhz, int n_pulses,
                     const SimulationOptions& options) {
  if (!(f_lo_mhz > 0.0) || !(f_hi_mhz >= f_lo_mhz)) throw ParameterError("invalid dip search interval");
  const double margin = std::max(0.25 * (f_hi_mhz - f_lo_mhz), 5e-4);
  const double lo = std::max(f_lo_mhz - margin, 0.5 * f_lo_mhz);
  const double hi = f_hi_mhz + margin;
  constexpr int kGrid = 81;
  const double step = (hi - lo) / (kGrid - 1);
  SimulationOptions o = options;
  o.readout = ReadoutModel::ideal();
  int best = 0;
  double best_p = 2.0;
  for (int k = 0; k < kGrid; ++k) {
    const double p = xy_point(system, n_pulses, lo + k * step, o);
    if (p < best_p) {
      best_p = p;
      best = k;
    }
  }
  double a = lo + std::max(best - 1, 0) * step;
  double b = lo + std::min(best + 1, kGrid - 1) * step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = xy_point(system, n_pulses, c, o);
  double fd = xy_point(system, n_pulses, d, o);
  while (b - a > 1e-9) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = xy_point(system, n_pulses, c, o);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = xy_point(system, n_pulses, d, o);
    }
  }
  return 0.5 * (a + b);
}

std::vector<B0Point> sweep_b0(const SpinSystem& system_template, const std::vector<double>& b0_mt,
                              const SimulationOptions& options, std::size_t index, int n_pulses) {
  require_nonempty(b0_mt.size(), "B0");
  if (index >= system_template.n_nuclei()) throw ParameterError("nucleus index out of range");
  const auto order = ascending_order(b0_mt);
  std::vector<B0Point> out(order.size());
  parallel_for(order.size(), options.threads, [&](std::size_t i) {
    SpinSystem s = system_template;
    s.b0_mt = b0_mt[order[i]];
    s.validate();
    B0Point p;
    p.b0_mt = s.b0_mt;
    p.f0_mhz = branch_precession_mhz(s, index, NvBranch::Zero);
    p.f1_mhz = branch_precession_mhz(s, index, NvBranch::MinusOne);
    p.f_xy_mhz = locate_xy_dip(s, std::min(p.f0_mhz, p.f1_mhz), std::max(p.f0_mhz, p.f1_mhz), n_pulses,
                               point_options(options, i));
    out[i] = p;
  });
  return out;
}

SweepResult sweep_pulsepol(const SpinSystem& system, const std::vector<double>& tau_pol_us, int repeats,
                           const SimulationOptions& options) {
  require_nonempty(tau_pol_us.size(), "tau_pol");
  std::vector<double> axis;
  for (double t : tau_pol_us) {
    if (!(t > 0.0)) throw ParameterError("tau_pol grid values must be > 0");
    axis.push_back(1.0 / (2.0 * t));
  }
  const auto order = ascending_order(axis);
  SweepResult out;
  out.axis_name = "inverse_2tau_pol_mhz";
  out.axis_values.resize(order.size());
  out.p0_values.resize(order.size());
  parallel_for(order.size(), options.threads, [&](std::size_t i) {
    const double t = tau_pol_us[order[i]];
    const auto r = run_program(system, build_pulsepol_spectrum(t, repeats), point_options(options, i));
    out.axis_values[i] = axis[order[i]];
    out.p0_values[i] = r.p0.at(0);
  });
  return out;
}

std::vector<double> pulsepol_polarization(const SpinSystem& system, double tau_pol_us, PolVariant variant,
                                          int repeats, const SimulationOptions& options) {
  const auto r = run_program(system, build_pulsepol(tau_pol_us, variant, repeats), options);
  return nuclear_polarization(r.final_state);
}

TransientResult polarization_transient(const SpinSystem& system, double tau_pol_us, int n_blocks, int repeats,
                                       const SimulationOptions& options) {
  const auto r = run_program(system, build_polarization_transient(tau_pol_us, n_blocks, repeats), options);
  TransientResult out;
  out.series.axis_name = "block";
  for (int n = 1; n <= n_blocks; ++n) out.series.axis_values.push_back(n);
  out.series.p0_values = r.p0;
  out.block_duration_us = repeats * 2.0 * tau_pol_us;
  return out;
}

SweepResult simulate_rabi(const SpinSystem& system, const RabiSpec& base, const std::vector<double>& t_rf_us,
                          const SimulationOptions& options) {
  require_nonempty(t_rf_us.size(), "T_rf");
  const auto order = ascending_order(t_rf_us);
  SweepResult out;
  out.axis_name = "t_rf_us";
  out.axis_values.resize(order.size());
  out.p0_values.resize(order.size());
  out.traces.resize(order.size());
  parallel_for(order.size(), options.threads, [&](std::size_t i) {
    RabiSpec spec = base;
    spec.t_rf_us = t_rf_us[order[i]];
    const auto r = run_program(system, build_rabi(spec), point_options(options, i));
    out.axis_values[i] = spec.t_rf_us;
    out.p0_values[i] = r.p0.at(0);
    out.traces[i] = r.p0;
  });
  return out;
}

std::vector<double> simulate_fid(const SpinSystem& system, const FidSpec& spec, const SimulationOptions& options) {
  return run_program(system, build_fid(spec), options).p0;
}

FidResult simulate_fid_pair(const SpinSystem& system, const FidSpec& spec, const SimulationOptions& options) {
  FidSpec y = spec;
  y.polarity = PolVariant::PolY;
  FidSpec x = spec;
  x.polarity = PolVariant::PolX;
  FidResult out;
  std::vector<std::vector<double>> traces(2);
  parallel_for(2, options.threads, [&](std::size_t i) {
    traces[i] = simulate_fid(system, i == 0 ? y : x, point_options(options, i));
  });
  out.poly = std::move(traces[0]);
  out.polx = std::move(traces[1]);
  out.sample_rate_mhz = 1.0 / spec.t_l_us;
  for (std::size_t k = 0; k < out.poly.size(); ++k) {
    out.t_us.push_back(static_cast<double>(k) * spec.t_l_us);
    out.difference.push_back(out.poly[k] - out.polx[k]);
  }
  return out;
}

}  // namespace nvscope
