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

#include "nvscope/constants.hpp"

#include "nvscope/errors.hpp"

namespace nvscope {

const PhysicalConstants& PhysicalConstants::standard() {
  static const PhysicalConstants constants{};
  return constants;
}

double larmor_frequency(double gamma_khz_per_mt, double b0_mt) {
  if (!(b0_mt > 0.0)) throw DomainError("larmor_frequency: B0 must be positive");
  // kHz/mT * mT = kHz
  return gamma_khz_per_mt * b0_mt * 1e-3;
}

}  // namespace nvscope
