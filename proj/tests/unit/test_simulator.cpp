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

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <set>

#include "nvscope/experiments.hpp"
#include "nvscope/propagator.hpp"
#include "nvscope/sequence.hpp"
#include "nvscope/simulator.hpp"
#include "nvscope/xy_model.hpp"

using namespace nvscope;

namespace {

constexpr double kTwoPi = 6.283185307179586;
const Complex kI(0.0, 1.0);

SpinSystem single(double f_l, double a_par, double a_perp) {
  SpinSystem s;
  s.b0_mt = SpinSystem::b0_for_proton_larmor(f_l);
  s.nuclei.push_back({"H", 42.577, {a_par, a_perp}, std::nullopt});
  return s;
}

SpinSystem nv1() { return single(1.2239, -19.0, 22.9); }

// exp(-i 2pi (bz Iz + bx Ix) t) for a spin-1/2, written out from the axis-angle form.
Eigen::Matrix2cd rotation(double bz_mhz, double bx_mhz, double t_us) {
  const double b = std::hypot(bz_mhz, bx_mhz);
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  if (b == 0.0) return u;
  const double half = 0.5 * kTwoPi * b * t_us;
  const double nz = bz_mhz / b, nx = bx_mhz / b;
  u << std::cos(half) - kI * nz * std::sin(half), -kI * nx * std::sin(half),
      -kI * nx * std::sin(half), std::cos(half) + kI * nz * std::sin(half);
  return u;
}

// XY-N readout of a lone nucleus by composing the conditional 2x2 evolutions. Each
// tau/2-pi-tau-pi-tau/2 period returns the NV to its branch, so the component starting
// in branch b sees V_b^(N/2); P0 = (1 + Re tr(W0^dag W1) / 2) / 2 for a mixed nucleus.
double xy_oracle(double f_l, double a_par_khz, double a_perp_khz, double tau, int n) {
  const double f1z = f_l + a_par_khz * 1e-3, f1x = a_perp_khz * 1e-3;
  const Eigen::Matrix2cd v0 = rotation(f_l, 0, tau / 2) * rotation(f1z, f1x, tau) * rotation(f_l, 0, tau / 2);
  const Eigen::Matrix2cd v1 = rotation(f1z, f1x, tau / 2) * rotation(f_l, 0, tau) * rotation(f1z, f1x, tau / 2);
  Eigen::Matrix2cd w0 = Eigen::Matrix2cd::Identity(), w1 = Eigen::Matrix2cd::Identity();
  for (int k = 0; k < n / 2; ++k) {
    w0 = v0 * w0;
    w1 = v1 * w1;
  }
  return 0.5 * (1.0 + 0.5 * (w0.adjoint() * w1).trace().real());
}

Operator full_space_hamiltonian(const SpinSystem& s) {
  const Operator h0 = branch_hamiltonian(s, NvBranch::Zero);
  const Operator h1 = branch_hamiltonian(s, NvBranch::MinusOne);
  const auto d = h0.rows();
  Operator h = Operator::Zero(2 * d, 2 * d);
  h.topLeftCorner(d, d) = h0;
  h.bottomRightCorner(d, d) = h1;
  return h;
}

Operator full_space_mw(const MwPulse& p, Eigen::Index d) {
  const double theta = p.angle == MwAngle::Pi ? kTwoPi / 2 : kTwoPi / 4;
  double alpha = 0.0;
  switch (p.axis) {
    case MwAxis::X: alpha = 0.0; break;
    case MwAxis::Y: alpha = kTwoPi / 4; break;
    case MwAxis::MinusX: alpha = kTwoPi / 2; break;
    case MwAxis::MinusY: alpha = 3 * kTwoPi / 4; break;
  }
  Eigen::Matrix2cd sigma;
  sigma << 0, std::cos(alpha) - kI * std::sin(alpha), std::cos(alpha) + kI * std::sin(alpha), 0;
  const Eigen::Matrix2cd r = std::cos(theta / 2) * Eigen::Matrix2cd::Identity() - kI * std::sin(theta / 2) * sigma;
  return kron(r, Operator::Identity(d, d));
}

std::vector<Node> random_coherent_nodes(std::mt19937_64& rng, int depth) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Node> out;
  const int n = 1 + static_cast<int>(rng() % 6);
  for (int i = 0; i < n; ++i) {
    const auto k = rng() % (depth > 0 ? 5 : 4);
    if (k == 0) out.push_back(MwPulse{static_cast<MwAxis>(rng() % 4), MwAngle::Pi});
    if (k == 1) out.push_back(MwPulse{static_cast<MwAxis>(rng() % 4), MwAngle::HalfPi});
    if (k == 2 || k == 3) out.push_back(Delay{u(rng) * 3.0});
    if (k == 4) out.push_back(Block{random_coherent_nodes(rng, depth - 1), 1 + static_cast<int>(rng() % 5), {}});
  }
  return out;
}

SpinSystem random_system(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> f(0.5, 3.0), a(-80.0, 80.0), ap(0.0, 80.0), d(-5.0, 5.0);
  SpinSystem s;
  s.b0_mt = SpinSystem::b0_for_proton_larmor(f(rng));
  for (std::size_t j = 0; j < n; ++j) s.nuclei.push_back({"n", j == 1 ? -4.316 : 42.577, {a(rng), ap(rng)}, {}});
  if (n >= 2) s.nn_couplings.push_back({0, 1, d(rng)});
  return s;
}

}  // namespace

TEST_CASE("bare sensor reads one after the XY16 readout") {
  SpinSystem s;
  s.b0_mt = 28.0;
  for (int n : {16, 64, 256}) {
    const auto r = run_program(s, build_xy16_readout(n, 0.37));
    REQUIRE(r.p0.size() == 1);
    CHECK(r.p0[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("XY readout agrees with composed two-level evolutions and the closed form") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> f(0.5, 3.0), a(-100.0, 100.0), ap(0.0, 100.0), tau(0.1, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double fl = f(rng), par = a(rng), perp = ap(rng), t = tau(rng);
    const int n = 16 * (1 + static_cast<int>(rng() % 16));
    const double oracle = xy_oracle(fl, par, perp, t, n);
    const double sim = run_program(single(fl, par, perp), build_xy16_readout(n, t)).p0.at(0);
    const double closed = xy_signal_p0(fl, par, perp, t, n);
    worst = std::max({worst, std::abs(sim - oracle), std::abs(closed - oracle)});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("oscillation frequency of the closed form matches the pulse-number signal") {
  const double f = xy_oscillation_khz(1.2239, -19.0, 22.9, 0.4115);
  const int period_pulses = 16;
  // Sample P0 at consecutive N and compare with 1 - (1 - n0.n1) sin^2(pi f N tau) / 2.
  const auto per = xy_period(1.2239, -19.0, 22.9, 0.4115);
  for (int n = period_pulses; n <= 656; n += 16) {
    const double s = std::sin(kTwoPi / 2 * f * 1e-3 * n * 0.4115);
    CHECK(xy_signal_p0(1.2239, -19.0, 22.9, 0.4115, n) ==
          doctest::Approx(1.0 - 0.5 * (1.0 - per.axis_overlap) * s * s).epsilon(1e-9));
  }
}

TEST_CASE("block-diagonal propagation matches full-space propagation") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 60; ++k) {
    const auto s = random_system(rng, 1 + rng() % 3);
    const auto nodes = random_coherent_nodes(rng, 2);
    const Operator h = full_space_hamiltonian(s);
    const auto d = static_cast<Eigen::Index>(s.nuclear_dim());
    Operator want = Operator::Identity(2 * d, 2 * d);
    for (const auto& e : flatten(nodes)) {
      if (const auto* mw = std::get_if<MwPulse>(&e)) want = full_space_mw(*mw, d) * want;
      if (const auto* dl = std::get_if<Delay>(&e)) want = propagator(h, dl->duration_us) * want;
    }
    const Operator got = segment_unitary(s, nodes);
    CHECK((got - want).norm() < 1e-9);
    CHECK(unitarity_defect(got) < 1e-10);
  }
}

TEST_CASE("state invariants hold on random programs with lasers and rf") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const auto s = random_system(rng, 1 + rng() % 2);
    PulseProgram p;
    p.nodes = random_coherent_nodes(rng, 2);
    p.nodes.push_back(RfPulse{s.larmor_mhz(0), u(rng), 5.0 * u(rng), 10.0 + 50.0 * u(rng)});
    p.nodes.push_back(LaserRead{});
    for (const auto& n : random_coherent_nodes(rng, 1)) p.nodes.push_back(n);
    p.nodes.push_back(Block{{LaserInit{}, MwPulse{MwAxis::X, MwAngle::HalfPi}, Delay{u(rng)}, LaserRead{}}, 3, {}});
    SimulationOptions checked;
    checked.check_invariants = true;
    checked.depolarization_per_laser = 0.1 * u(rng);
    SimulationOptions fast = checked;
    fast.check_invariants = false;
    RunResult a, b;
    CHECK_NOTHROW(a = run_program(s, p, checked));
    b = run_program(s, p, fast);
    REQUIRE(a.p0.size() == 4);
    for (std::size_t i = 0; i < a.p0.size(); ++i) {
      CHECK(a.p0[i] >= 0.0);
      CHECK(a.p0[i] <= 1.0);
      CHECK(a.p0[i] == doctest::Approx(b.p0[i]).epsilon(1e-9));
    }
    CHECK(b.final_state.trace_defect() < 1e-10);
    CHECK(b.final_state.hermiticity_defect() < 1e-12);
    CHECK(b.final_state.min_eigenvalue() > -1e-9);
  }
}

TEST_CASE("repeated blocks equal their unrolled form") {
  const auto s = nv1();
  const auto rolled = build_xy16_readout(256, 0.4115);
  PulseProgram unrolled{"", {}, {}, ""};
  for (const auto& e : flatten(rolled)) unrolled.nodes.push_back(e);
  CHECK(run_program(s, rolled).p0[0] == doctest::Approx(run_program(s, unrolled).p0[0]).epsilon(1e-10));
}

TEST_CASE("resonant rf nutates a bare nucleus at the configured Rabi frequency") {
  auto s = single(1.2239, 0.0, 0.0);
  Operator up = Operator::Zero(2, 2);
  up(0, 0) = 1.0;
  for (double t : {0.0, 1.0, 4.333, 7.5, 13.0}) {
    PulseProgram p{"", {RfPulse{1.2239, 0.0, t, 57.7}}, {}, ""};
    const auto r = run_program(s, p, DensityState::nv_zero(up));
    CHECK(nuclear_polarization(r.final_state)[0] ==
          doctest::Approx(0.5 * std::cos(kTwoPi * 57.7e-3 * t)).epsilon(1e-6));
  }
}

TEST_CASE("laser depolarization shrinks the nuclear Bloch vector") {
  auto s = single(1.2239, 0.0, 0.0);
  Operator up = Operator::Zero(2, 2);
  up(0, 0) = 1.0;
  SimulationOptions o;
  o.depolarization_per_laser = 0.2;
  const auto r = run_program(s, PulseProgram{"", {LaserInit{}, LaserInit{}}, {}, ""}, DensityState::nv_zero(up), o);
  CHECK(nuclear_polarization(r.final_state)[0] == doctest::Approx(0.5 * 0.8 * 0.8));
}

TEST_CASE("finite microwave pulses converge to ideal pulses") {
  const auto s = nv1();
  const auto p = build_xy16_readout(32, 0.4115);
  const double ideal = run_program(s, p).p0[0];
  SimulationOptions o;
  o.mw_pi_duration_us = 0.001;
  const double short_pulses = run_program(s, p, o).p0[0];
  o.mw_pi_duration_us = 0.05;
  const double long_pulses = run_program(s, p, o).p0[0];
  CHECK(std::abs(short_pulses - ideal) < 1e-3);
  CHECK(std::abs(short_pulses - ideal) < std::abs(long_pulses - ideal));
}

TEST_CASE("readout models") {
  const auto s = nv1();
  const auto p = build_xy16_readout(64, 1.0 / (2 * 1.2140));
  const double ideal = run_program(s, p).p0[0];
  SimulationOptions o;
  o.readout = ReadoutModel::with_contrast(0.3);
  CHECK(run_program(s, p, o).p0[0] == doctest::Approx(0.5 + 0.3 * (ideal - 0.5)));

  o.readout = ReadoutModel::shot_noise(0.3, 5000, 99);
  const double a = run_program(s, p, o).p0[0];
  CHECK(a == run_program(s, p, o).p0[0]);
  o.stream = 1;
  const double b = run_program(s, p, o).p0[0];
  CHECK(a != b);
  double mean = 0.0;
  for (std::uint64_t k = 0; k < 400; ++k) {
    o.stream = k;
    mean += run_program(s, p, o).p0[0] / 400.0;
  }
  const double expect = 0.5 + 0.3 * (ideal - 0.5);
  CHECK(std::abs(mean - expect) < 5.0 * std::sqrt(expect * (1 - expect) / 5000.0 / 400.0));
  CHECK_THROWS_AS(ReadoutModel::with_contrast(1.5).validate(), ParameterError);
  CHECK_THROWS_AS(ReadoutModel::shot_noise(0.3, 0, 1).validate(), ParameterError);
}

TEST_CASE("noise keys separate seeds, streams and indices") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (std::uint64_t stream = 0; stream < 16; ++stream) {
      for (std::uint64_t i = 0; i < 16; ++i) keys.insert(noise_key(seed, stream, i));
    }
  }
  CHECK(keys.size() == 4 * 16 * 16);
}

TEST_CASE("parallel_for visits every index once and rethrows the first failure") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (auto& h : hits) CHECK(h.load() == 1);
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 17 || i == 60) throw SimulationError("index " + std::to_string(i));
    });
    FAIL("no exception");
  } catch (const SimulationError& e) {
    CHECK(std::string(e.what()) == "index 17");
  }
}

TEST_CASE("sweeps do not depend on the thread count") {
  auto s = nv1();
  SimulationOptions o;
  o.readout = ReadoutModel::shot_noise(0.3, 1000, 5);
  std::vector<double> f;
  for (int k = 0; k < 41; ++k) f.push_back(1.20 + 0.0005 * k);
  const auto taus = tau_grid_for_frequencies(f);
  o.threads = 1;
  const auto a = sweep_tau(s, 64, taus, o);
  o.threads = 3;
  const auto b = sweep_tau(s, 64, taus, o);
  CHECK(a.p0_values == b.p0_values);
  CHECK(a.axis_values == b.axis_values);
  for (std::size_t i = 1; i < a.axis_values.size(); ++i) CHECK(a.axis_values[i] > a.axis_values[i - 1]);
}

TEST_CASE("PolY and PolX transfer opposite polarization") {
  const auto s = nv1();
  const double fres = 0.5 * (1.2239 + branch_precession_mhz(s, 0, NvBranch::MinusOne));
  const double tau_pol = 1.5 / fres;
  const auto y = pulsepol_polarization(s, tau_pol, PolVariant::PolY, 20);
  const auto x = pulsepol_polarization(s, tau_pol, PolVariant::PolX, 20);
  CHECK(std::abs(y[0]) > 0.01);
  CHECK(std::abs(y[0] + x[0]) < 1e-9);
}

TEST_CASE("correlation signal is phase-cycled about one half") {
  const auto s = nv1();
  std::vector<double> t;
  for (int k = 0; k < 64; ++k) t.push_back(0.1 * k);
  const auto r = sweep_correlation(s, 0.4125, t);
  double mean = 0.0;
  for (double v : r.p0_values) mean += v / static_cast<double>(t.size());
  CHECK(std::abs(mean - 0.5) < 0.05);
  CHECK(r.axis_name == "t_corr_us");
}

TEST_CASE("located XY dip matches the minimum of the closed form") {
  const auto s = nv1();
  double best = 0.0, best_p0 = 2.0;
  for (int k = 0; k <= 60000; ++k) {
    const double f = 1.19 + 1e-6 * k;
    const double p0 = xy_signal_p0(1.2239, -19.0, 22.9, 1.0 / (2.0 * f), 64);
    if (p0 < best_p0) best_p0 = p0, best = f;
  }
  CHECK(locate_xy_dip(s, 1.19, 1.25, 64) == doctest::Approx(best).epsilon(2e-6));
}
