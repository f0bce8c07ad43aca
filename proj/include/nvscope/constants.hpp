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

namespace nvscope {

// Physical constants, SI unless a suffix says otherwise. Gyromagnetic ratios
// are stored divided by 2pi.
struct PhysicalConstants {
  double gamma_h_khz_per_mt = 42.577;
  double gamma_e_khz_per_mt = 28.0e3;  // 28.0 MHz/mT
  // 15N: IUPAC frequency ratio 10.136767 % of the 1H resonance (42.577478 kHz/mT).
  double gamma_n15_khz_per_mt = -4.3160;
  double hbar = 1.054571817e-34;  // J s
  double h = 6.62607015e-34;      // J s
  double mu0 = 1.25663706212e-6;  // T^2 m^3 / J

  static const PhysicalConstants& standard();
};

// Nuclear precession frequency gamma * B0 in MHz. Throws DomainError when b0_mt <= 0.
double larmor_frequency(double gamma_khz_per_mt, double b0_mt);

}  // namespace nvscope
