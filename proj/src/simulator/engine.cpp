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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <type_traits>

#include "nvscope/errors.hpp"
#include "nvscope/propagator.hpp"
#include "nvscope/simulator.hpp"
#include "nvscope/units.hpp"

namespace nvscope {

void ReadoutModel::validate() const {
  if (!(contrast >= 0.0 && contrast <= 1.0)) throw ParameterError("readout contrast must lie in [0, 1]");
  if (mode == ReadoutMode::ShotNoise && photons_per_read < 1) {
    throw ParameterError("photons_per_read must be >= 1");
  }
}

std::uint64_t noise_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ index);
}

Operator mw_unitary(const MwPulse& pulse, std::size_t nuclear_dim) {
  const double theta = pulse.angle == MwAngle::Pi ? units::kPi : units::kPi / 2.0;
  double c = 1.0;
  double s = 0.0;
  switch (pulse.axis) {
    case MwAxis::X:
      break;
    case MwAxis::Y:
      c = 0.0;
      s = 1.0;
      break;
    case MwAxis::MinusX:
      c = -1.0;
      break;
    case MwAxis::MinusY:
      c = 0.0;
      s = -1.0;
      break;
  }
  // exp(-i θ (cos α σx + sin α σy) / 2)
  const double ch = std::cos(theta / 2.0);
  const double sh = std::sin(theta / 2.0);
  const Complex off = Complex(0.0, -1.0) * sh;
  Eigen::Matrix2cd r;
  r << ch, off * Complex(c, -s), off * Complex(c, s), ch;
  const auto d = static_cast<Eigen::Index>(nuclear_dim);
  return kron(Operator(r), Operator::Identity(d, d));
}

Operator delay_unitary(const SpinSystem& system, double t_us) {
  const std::size_t d = system.nuclear_dim();
  Operator u = Operator::Zero(2 * d, 2 * d);
  u.topLeftCorner(d, d) = propagator(branch_hamiltonian(system, NvBranch::Zero), t_us);
  u.bottomRightCorner(d, d) = propagator(branch_hamiltonian(system, NvBranch::MinusOne), t_us);
  return u;
}

std::vector<double> nuclear_polarization(const DensityState& state) {
  const Operator rn = state.nuclear_state();
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < rn.rows()) ++n;
  std::vector<double> out;
  out.reserve(n);
  const Eigen::Matrix2cd iz = spin_half(SpinComponent::Z);
  for (std::size_t j = 0; j < n; ++j) out.push_back((rn * embed(iz, j, n)).trace().real());
  return out;
}

namespace {

Operator power(const Operator& u, int count) {
  Operator result = Operator::Identity(u.rows(), u.cols());
  Operator base = u;
  for (unsigned k = static_cast<unsigned>(count); k > 0; k >>= 1) {
    if (k & 1U) result = base * result;
    if (k > 1) base = base * base;
  }
  return result;
}

class Engine {
 public:
  Engine(const SpinSystem& system, const SimulationOptions& options)
      : system_(system),
        options_(options),
        n_(system.n_nuclei()),
        d_(static_cast<Eigen::Index>(system.nuclear_dim())),
        h0_(branch_hamiltonian(system, NvBranch::Zero)),
        h1_(branch_hamiltonian(system, NvBranch::MinusOne)),
        u0_(h0_),
        u1_(h1_) {
    if (!(options.mw_pi_duration_us >= 0.0)) throw ParameterError("mw_pi_duration must be >= 0");
    if (!(options.depolarization_per_laser >= 0.0 && options.depolarization_per_laser <= 1.0)) {
      throw ParameterError("depolarization probability must lie in [0, 1]");
    }
    if (!(options.coherence_decay_us >= 0.0)) throw ParameterError("coherence decay time must be >= 0");
    options.readout.validate();
  }

  void start(const DensityState& initial) {
    if (initial.dim() != 2 * d_) {
      throw SimulationError("initial state dimension " + std::to_string(initial.dim()) +
                            " does not match the system dimension " + std::to_string(2 * d_));
    }
    rho_ = initial.matrix();
    pending_ = Operator::Identity(2 * d_, 2 * d_);
    has_pending_ = false;
  }

  void execute(const std::vector<Node>& nodes) {
    for (const auto& node : nodes) {
      if (const auto* e = node.element()) {
        execute_element(*e);
        continue;
      }
      const Block& b = *node.block();
      if (!options_.check_invariants && !contains_laser(b.body) && !contains_rf(b.body)) {
        apply(power(block_unitary(b), b.count));
        clock_ += b.count * span(b.body);
      } else {
        for (int k = 0; k < b.count; ++k) execute(b.body);
      }
    }
  }

  // Unitary of a laser-free segment, advancing the clock.
  Operator compile(const std::vector<Node>& nodes) {
    Operator u = Operator::Identity(2 * d_, 2 * d_);
    for (const auto& node : nodes) {
      if (const auto* e = node.element()) {
        if (std::holds_alternative<LaserInit>(*e) || std::holds_alternative<LaserRead>(*e)) {
          throw ParameterError("laser elements are not allowed in a unitary segment");
        }
        u = element_unitary(*e) * u;
        clock_ += element_span(*e);
        continue;
      }
      const Block& b = *node.block();
      if (!contains_rf(b.body)) {
        u = power(block_unitary(b), b.count) * u;
        clock_ += b.count * span(b.body);
      } else {
        for (int k = 0; k < b.count; ++k) u = compile(b.body) * u;
      }
    }
    return u;
  }

  void set_clock(double t) { clock_ = t; }
  double clock() const { return clock_; }
  std::vector<double>& reads() { return reads_; }

  DensityState finish() {
    flush();
    return DensityState(rho_);
  }

 private:
  void execute_element(const PulseElement& e) {
    if (std::holds_alternative<LaserInit>(e)) {
      flush();
      laser_init();
    } else if (std::holds_alternative<LaserRead>(e)) {
      flush();
      read();
      laser_init();
    } else {
      const Operator u = element_unitary(e);
      if (options_.check_invariants && unitarity_defect(u) > 1e-10) {
        throw SimulationError("element propagator is not unitary");
      }
      apply(u);
      clock_ += element_span(e);
    }
    if (options_.check_invariants) {
      flush();
      DensityState(rho_).check();
    }
  }

  void apply(const Operator& u) {
    pending_ = u * pending_;
    has_pending_ = true;
  }

  void flush() {
    if (!has_pending_) return;
    rho_ = pending_ * rho_ * pending_.adjoint();
    pending_.setIdentity();
    has_pending_ = false;
  }

  void laser_init() {
    Operator rn = rho_.topLeftCorner(d_, d_) + rho_.bottomRightCorner(d_, d_);
    rn = (rn + rn.adjoint()).eval() * 0.5;
    const double p = options_.depolarization_per_laser;
    if (p > 0.0) {
      for (std::size_t j = 0; j < n_; ++j) {
        const Operator x = embed(2.0 * spin_half(SpinComponent::X), j, n_);
        const Operator y = embed(2.0 * spin_half(SpinComponent::Y), j, n_);
        const Operator z = embed(2.0 * spin_half(SpinComponent::Z), j, n_);
        rn = ((1.0 - 0.75 * p) * rn + 0.25 * p * (x * rn * x + y * rn * y + z * rn * z)).eval();
      }
    }
    rho_.setZero();
    rho_.topLeftCorner(d_, d_) = rn;
    last_laser_ = clock_;
  }

  void read() {
    double p0 = std::clamp(rho_.topLeftCorner(d_, d_).trace().real(), 0.0, 1.0);
    if (options_.coherence_decay_us > 0.0) {
      p0 = 0.5 + (p0 - 0.5) * std::exp(-(clock_ - last_laser_) / options_.coherence_decay_us);
    }
    const ReadoutModel& m = options_.readout;
    if (m.mode != ReadoutMode::Ideal) p0 = 0.5 + m.contrast * (p0 - 0.5);
    if (m.mode == ReadoutMode::ShotNoise) {
      std::mt19937_64 rng(noise_key(m.seed, options_.stream, reads_.size()));
      std::binomial_distribution<int> photons(m.photons_per_read, p0);
      p0 = static_cast<double>(photons(rng)) / m.photons_per_read;
    }
    reads_.push_back(p0);
  }

  double mw_span(const MwPulse& p) const {
    return options_.mw_pi_duration_us * (p.angle == MwAngle::Pi ? 1.0 : 0.5);
  }

  double element_span(const PulseElement& e) const {
    if (const auto* p = std::get_if<MwPulse>(&e)) return mw_span(*p);
    return element_duration(e);
  }

  double span(const std::vector<Node>& nodes) const {
    double total = 0.0;
    for (const auto& node : nodes) {
      if (const auto* e = node.element()) {
        total += element_span(*e);
      } else {
        total += node.block()->count * span(node.block()->body);
      }
    }
    return total;
  }

  const Operator& block_unitary(const Block& b) {
    auto it = block_cache_.find(&b);
    if (it != block_cache_.end()) return it->second;
    const double saved = clock_;
    Operator u = compile(b.body);
    clock_ = saved;
    return block_cache_.emplace(&b, std::move(u)).first->second;
  }

  const Operator& delay(double t) {
    auto it = delay_cache_.find(t);
    if (it != delay_cache_.end()) return it->second;
    Operator u = Operator::Zero(2 * d_, 2 * d_);
    u.topLeftCorner(d_, d_) = u0_(t);
    u.bottomRightCorner(d_, d_) = u1_(t);
    return delay_cache_.emplace(t, std::move(u)).first->second;
  }

  Operator mw(const MwPulse& p) {
    if (options_.mw_pi_duration_us <= 0.0) return mw_unitary(p, static_cast<std::size_t>(d_));
    const double t = mw_span(p);
    const double omega = units::kPi / options_.mw_pi_duration_us;
    const double alpha = p.axis == MwAxis::X        ? 0.0
                         : p.axis == MwAxis::Y      ? units::kPi / 2.0
                         : p.axis == MwAxis::MinusX ? units::kPi
                                                    : -units::kPi / 2.0;
    const Eigen::Matrix2cd drive =
        omega * (std::cos(alpha) * spin_half(SpinComponent::X) + std::sin(alpha) * spin_half(SpinComponent::Y));
    Operator h = kron(Operator(drive), Operator::Identity(d_, d_));
    h.topLeftCorner(d_, d_) += h0_;
    h.bottomRightCorner(d_, d_) += h1_;
    return propagator(h, t);
  }

  Operator rf(const RfPulse& p) {
    const double w = units::angular(p.frequency_mhz);
    const Operator iz = total_nuclear_iz(n_);
    Operator drive = Operator::Zero(d_, d_);
    for (std::size_t j = 0; j < n_; ++j) {
      const double ratio =
          std::abs(system_.nuclei[j].gamma_khz_per_mt / PhysicalConstants::standard().gamma_h_khz_per_mt);
      const double omega = units::angular(units::khz_to_mhz(p.rabi_khz)) * ratio;
      drive += omega * (std::cos(p.phase_rad) * embed(spin_half(SpinComponent::X), j, n_) +
                        std::sin(p.phase_rad) * embed(spin_half(SpinComponent::Y), j, n_));
    }
    const double t0 = clock_;
    const double t1 = clock_ + p.duration_us;
    auto frame = [&](double t) { return propagator(w * iz, t); };
    Operator u = Operator::Zero(2 * d_, 2 * d_);
    u.topLeftCorner(d_, d_) = frame(t1) * propagator(h0_ - w * iz + drive, p.duration_us) * frame(t0).adjoint();
    u.bottomRightCorner(d_, d_) =
        frame(t1) * propagator(h1_ - w * iz + drive, p.duration_us) * frame(t0).adjoint();
    return u;
  }

  Operator element_unitary(const PulseElement& e) {
    return std::visit(
        [this](const auto& x) -> Operator {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, MwPulse>) {
            return mw(x);
          } else if constexpr (std::is_same_v<T, Delay>) {
            return delay(x.duration_us);
          } else if constexpr (std::is_same_v<T, RfPulse>) {
            return rf(x);
          } else {
            throw ContractError("laser elements have no unitary");
          }
        },
        e);
  }

  const SpinSystem& system_;
  SimulationOptions options_;
  std::size_t n_;
  Eigen::Index d_;
  Operator h0_;
  Operator h1_;
  SpectralPropagator u0_;
  SpectralPropagator u1_;
  std::map<double, Operator> delay_cache_;
  std::map<const Block*, Operator> block_cache_;
  Operator rho_;
  Operator pending_;
  bool has_pending_ = false;
  double clock_ = 0.0;
  double last_laser_ = 0.0;
  std::vector<double> reads_;
};

}  // namespace

RunResult run_program(const SpinSystem& system, const PulseProgram& program, const DensityState& initial,
                      const SimulationOptions& options) {
  system.validate();
  validate(program);
  Engine engine(system, options);
  engine.start(initial);
  engine.execute(program.nodes);
  RunResult result;
  result.final_state = engine.finish();
  result.p0 = std::move(engine.reads());
  result.duration_us = engine.clock();
  return result;
}

RunResult run_program(const SpinSystem& system, const PulseProgram& program, const SimulationOptions& options) {
  return run_program(system, program, DensityState::nv_zero_unpolarized(system.n_nuclei()), options);
}

Operator segment_unitary(const SpinSystem& system, const std::vector<Node>& nodes, double t0_us,
                         const SimulationOptions& options) {
  system.validate();
  Engine engine(system, options);
  engine.set_clock(t0_us);
  return engine.compile(nodes);
}

}  // namespace nvscope
