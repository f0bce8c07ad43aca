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

#include <cstddef>
#include <vector>

namespace nvscope {

struct DipResult {
  double center = 0.0;
  double depth = 0.0;  // max(values) - value at the vertex
  double min_value = 0.0;
  std::size_t min_index = 0;
};

// Vertex of the parabola through the grid minimum and its neighbours. Equal
// minima resolve to the lowest axis value. Needs at least 5 points on a
// strictly ascending axis; flat data raises NoDipError.
DipResult find_dip(const std::vector<double>& axis, const std::vector<double>& values);

}  // namespace nvscope
