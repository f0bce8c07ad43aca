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

// Unit conventions used across nvscope:
//   frequency  MHz (hyperfine and couplings in kHz at API boundaries)
//   time       microseconds
//   field      mT
//   angle      degrees at API boundaries, radians internally
// A frequency in MHz times a time in us is a number of cycles, so angular
// quantities in rad/us are 2*pi*f_mhz.

#include <numbers>

namespace nvscope::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double khz_to_mhz(double khz) { return khz * 1e-3; }
constexpr double mhz_to_khz(double mhz) { return mhz * 1e3; }

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

constexpr double nm_to_m(double nm) { return nm * 1e-9; }

// Gyromagnetic ratio / 2pi: kHz/mT -> Hz/T.
constexpr double khz_per_mt_to_hz_per_t(double g) { return g * 1e6; }

// Angular frequency (rad/us) of a frequency given in MHz.
constexpr double angular(double f_mhz) { return kTwoPi * f_mhz; }

}  // namespace nvscope::units
