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

#include "nvscope/analysis/dip.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nvscope/errors.hpp"

namespace nvscope {

DipResult find_dip(const std::vector<double>& axis, const std::vector<double>& values) {
  if (axis.size() != values.size()) throw AnalysisError("axis and values differ in length");
  if (axis.size() < 5) throw AnalysisError("dip search needs at least 5 points, got " + std::to_string(axis.size()));
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) throw AnalysisError("dip search axis must be strictly ascending");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double vmax = *hi_it;
  const double vmin = *lo_it;
  if (!(vmax - vmin > 1e-9 * std::max(1.0, std::abs(vmax)))) throw NoDipError("sweep is flat: no dip");

  // minmax_element returns the first minimum, i.e. the lowest axis value on ties.
  const auto i = static_cast<std::size_t>(lo_it - values.begin());
  DipResult out;
  out.min_index = i;
  out.center = axis[i];
  out.min_value = vmin;
  if (i > 0 && i + 1 < axis.size()) {
    const double x0 = axis[i - 1], x1 = axis[i], x2 = axis[i + 1];
    const double y0 = values[i - 1], y1 = values[i], y2 = values[i + 1];
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curvature = (d12 - d01) / (x2 - x0);
    if (curvature > 0.0) {
      // Interpolating parabola expanded about x1: y1 + s u + curvature u^2.
      const double slope_at_x1 = d01 + curvature * (x1 - x0);
      const double vertex = x1 - slope_at_x1 / (2.0 * curvature);
      out.center = std::clamp(vertex, x0, x2);
      const double dx = out.center - x1;
      out.min_value = y1 + slope_at_x1 * dx + curvature * dx * dx;
    }
  }
  out.depth = vmax - out.min_value;
  return out;
}

}  // namespace nvscope
