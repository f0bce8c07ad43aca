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

#include "nvscope/builders.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "nvscope/errors.hpp"

namespace nvscope {
namespace {

MwPulse pi(MwAxis axis) { return MwPulse{axis, MwAngle::Pi}; }
MwPulse half(MwAxis axis) { return MwPulse{axis, MwAngle::HalfPi}; }

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) throw ParameterError(std::string(what) + " must be > 0");
}

void require_count(int value, const char* what) {
  if (value < 1) throw ParameterError(std::string(what) + " must be >= 1");
}

Block xy16_block(int n_pulses, double tau_us) {
  if (n_pulses <= 0 || n_pulses % 16 != 0) {
    throw ParameterError("XY16 pulse count must be a positive multiple of 16, got " +
                         std::to_string(n_pulses));
  }
  require_positive(tau_us, "tau");
  return Block{xy16_unit(tau_us), n_pulses / 16, Xy16Macro{n_pulses, tau_us}};
}

Block pulsepol_block(double tau_pol_us, PolVariant variant, int repeats) {
  require_positive(tau_pol_us, "tau_pol");
  require_count(repeats, "PulsePol repeats");
  return Block{pulsepol_unit(tau_pol_us, variant), repeats, PulsePolMacro{variant, tau_pol_us}};
}

RfPulse rf_pulse(const RfSpec& rf, double duration_us) {
  require_positive(rf.rabi_khz, "rf Rabi frequency");
  if (!(duration_us >= 0.0)) throw ParameterError("rf duration must be >= 0");
  return RfPulse{rf.frequency_mhz, rf.phase_rad, duration_us, rf.rabi_khz};
}

}  // namespace

std::vector<Node> xy16_unit(double tau_us) {
  static constexpr std::array<MwAxis, 16> kPhases = {
      MwAxis::X,      MwAxis::Y,      MwAxis::X,      MwAxis::Y,      MwAxis::Y,      MwAxis::X,
      MwAxis::Y,      MwAxis::X,      MwAxis::MinusX, MwAxis::MinusY, MwAxis::MinusX, MwAxis::MinusY,
      MwAxis::MinusY, MwAxis::MinusX, MwAxis::MinusY, MwAxis::MinusX};
  std::vector<Node> unit;
  unit.reserve(33);
  unit.emplace_back(Delay{tau_us / 2.0});
  for (std::size_t k = 0; k < kPhases.size(); ++k) {
    unit.emplace_back(pi(kPhases[k]));
    unit.emplace_back(Delay{k + 1 < kPhases.size() ? tau_us : tau_us / 2.0});
  }
  return unit;
}

std::vector<Node> pulsepol_unit(double tau_pol_us, PolVariant variant) {
  const Delay q{tau_pol_us / 4.0};
  std::vector<Node> unit = {
      half(MwAxis::Y), q, pi(MwAxis::MinusX), q, half(MwAxis::Y), half(MwAxis::X), q, pi(MwAxis::Y), q,
      half(MwAxis::X), half(MwAxis::Y), q, pi(MwAxis::MinusX), q, half(MwAxis::Y), half(MwAxis::X), q,
      pi(MwAxis::Y), q, half(MwAxis::X)};
  if (variant == PolVariant::PolX) std::reverse(unit.begin(), unit.end());
  return unit;
}

PulseProgram build_xy16(int n_pulses, double tau_us) {
  PulseProgram p;
  p.name = "xy16";
  p.nodes.emplace_back(xy16_block(n_pulses, tau_us));
  p.parameters = {{"n_pulses", n_pulses}, {"tau_us", tau_us}};
  return p;
}

PulseProgram build_xy16_readout(int n_pulses, double tau_us) {
  PulseProgram p;
  p.name = "xy16_readout";
  p.nodes.emplace_back(LaserInit{});
  p.nodes.emplace_back(half(MwAxis::X));
  p.nodes.emplace_back(xy16_block(n_pulses, tau_us));
  p.nodes.emplace_back(half(MwAxis::MinusX));
  p.nodes.emplace_back(LaserRead{});
  p.parameters = {{"n_pulses", n_pulses}, {"tau_us", tau_us}};
  p.readout_axis = "X";
  return p;
}

PulseProgram build_correlation(double tau_us, double t_corr_us, int storage_sign, int block_pulses) {
  if (!(t_corr_us >= 0.0)) throw ParameterError("t_corr must be >= 0");
  if (storage_sign != 1 && storage_sign != -1) throw ParameterError("storage sign must be +1 or -1");
  PulseProgram p;
  p.name = "correlation";
  p.nodes.emplace_back(LaserInit{});
  p.nodes.emplace_back(half(MwAxis::X));
  p.nodes.emplace_back(xy16_block(block_pulses, tau_us));
  p.nodes.emplace_back(half(storage_sign > 0 ? MwAxis::Y : MwAxis::MinusY));
  if (t_corr_us > 0.0) p.nodes.emplace_back(Delay{t_corr_us});
  p.nodes.emplace_back(half(MwAxis::Y));
  p.nodes.emplace_back(xy16_block(block_pulses, tau_us));
  p.nodes.emplace_back(half(MwAxis::X));
  p.nodes.emplace_back(LaserRead{});
  p.parameters = {{"block_pulses", block_pulses},
                  {"storage_sign", storage_sign},
                  {"t_corr_us", t_corr_us},
                  {"tau_us", tau_us}};
  p.readout_axis = "X";
  return p;
}

PulseProgram build_pulsepol(double tau_pol_us, PolVariant variant, int repeats) {
  PulseProgram p;
  p.name = variant == PolVariant::PolY ? "poly" : "polx";
  p.nodes.emplace_back(pulsepol_block(tau_pol_us, variant, repeats));
  p.parameters = {{"repeats", repeats}, {"tau_pol_us", tau_pol_us}};
  return p;
}

PulseProgram build_pulsepol_spectrum(double tau_pol_us, int repeats) {
  PulseProgram p;
  p.name = "pulsepol_spectrum";
  p.nodes.emplace_back(pulsepol_block(tau_pol_us, PolVariant::PolX, repeats));
  p.nodes.emplace_back(LaserInit{});
  p.nodes.emplace_back(pulsepol_block(tau_pol_us, PolVariant::PolY, repeats));
  p.nodes.emplace_back(LaserRead{});
  p.parameters = {{"repeats", repeats}, {"tau_pol_us", tau_pol_us}};
  return p;
}

PulseProgram build_polarization_transient(double tau_pol_us, int n_blocks, int repeats) {
  require_count(n_blocks, "transient block count");
  PulseProgram p;
  p.name = "polarization_transient";
  p.nodes.emplace_back(
      Block{{pulsepol_block(tau_pol_us, PolVariant::PolX, repeats), LaserInit{}}, n_blocks, {}});
  p.nodes.emplace_back(
      Block{{pulsepol_block(tau_pol_us, PolVariant::PolY, repeats), LaserRead{}}, n_blocks, {}});
  p.parameters = {{"n_blocks", n_blocks}, {"repeats", repeats}, {"tau_pol_us", tau_pol_us}};
  return p;
}

PulseProgram build_rabi(const RabiSpec& spec) {
  require_count(spec.blocks, "Rabi block count");
  if (!(spec.t_rf_us >= 0.0)) throw ParameterError("rf duration must be >= 0");
  PulseProgram p;
  p.name = "rabi";
  p.nodes.emplace_back(Block{
      {pulsepol_block(spec.tau_pol_us, PolVariant::PolY, spec.pol_repeats), LaserInit{}}, spec.blocks, {}});
  if (spec.t_rf_us > 0.0) p.nodes.emplace_back(rf_pulse(spec.rf, spec.t_rf_us));
  p.nodes.emplace_back(Block{
      {pulsepol_block(spec.tau_pol_us, PolVariant::PolY, spec.pol_repeats), LaserRead{}}, spec.blocks, {}});
  p.parameters = {{"blocks", spec.blocks},
                  {"pol_repeats", spec.pol_repeats},
                  {"rabi_khz", spec.rf.rabi_khz},
                  {"rf_frequency_mhz", spec.rf.frequency_mhz},
                  {"t_rf_us", spec.t_rf_us},
                  {"tau_pol_us", spec.tau_pol_us}};
  return p;
}

PulseProgram build_fid(const FidSpec& spec) {
  require_count(spec.pol_blocks, "polarization block count");
  require_count(spec.n_readouts, "readout count");
  require_positive(spec.tau_us, "tau");
  const double t_s = 16.0 * spec.tau_us;
  if (!(spec.t_l_us >= t_s)) {
    throw TimingError("sampling interval t_L = " + std::to_string(spec.t_l_us) +
                      " us is shorter than the detection block t_s = " + std::to_string(t_s) + " us");
  }
  PulseProgram p;
  p.name = "fid";
  p.nodes.emplace_back(Block{
      {pulsepol_block(spec.tau_pol_us, spec.polarity, spec.pol_repeats), LaserInit{}}, spec.pol_blocks, {}});
  p.nodes.emplace_back(rf_pulse(spec.rf, spec.t_half_pi_us));
  std::vector<Node> detect = {half(MwAxis::X), xy16_block(16, spec.tau_us), half(MwAxis::Y), LaserRead{}};
  if (spec.t_l_us > t_s) detect.emplace_back(Delay{spec.t_l_us - t_s});
  p.nodes.emplace_back(Block{std::move(detect), spec.n_readouts, {}});
  p.parameters = {{"n_readouts", spec.n_readouts},
                  {"pol_blocks", spec.pol_blocks},
                  {"pol_repeats", spec.pol_repeats},
                  {"polarity", spec.polarity == PolVariant::PolY ? 1.0 : -1.0},
                  {"t_half_pi_us", spec.t_half_pi_us},
                  {"t_l_us", spec.t_l_us},
                  {"tau_pol_us", spec.tau_pol_us},
                  {"tau_us", spec.tau_us}};
  p.readout_axis = "Y";
  return p;
}

}  // namespace nvscope
