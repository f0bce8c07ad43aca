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

#include <optional>
#include <vector>

namespace nvscope {

enum class Window { Hann, Rectangular };

// One-sided magnitude spectrum of a uniformly sampled real trace.
struct Spectrum {
  std::vector<double> freqs_mhz;  // strictly ascending
  std::vector<double> magnitudes;
  int nyquist_zone = 0;
  double sample_rate_mhz = 0.0;
  // Spacing of the zero-padded frequency grid.
  double bin_mhz = 0.0;
};

struct SpectrumOptions {
  Window window = Window::Hann;
  int zero_pad = 8;
  std::optional<int> zone;
};

// Zero-mean, windowed, zero-padded FFT magnitude. With a zone k the axis is mapped
// to true frequencies: f = (k/2) fs + f_alias for even k, ((k+1)/2) fs - f_alias
// for odd k. Requires at least 8 samples and dt > 0.
Spectrum spectrum(const std::vector<double>& trace, double dt_us, const SpectrumOptions& options = {});

// Same, taking the sample times; non-uniform spacing raises AnalysisError.
Spectrum spectrum(const std::vector<double>& t_us, const std::vector<double>& trace,
                  const SpectrumOptions& options = {});

// Sampling interval of t_us, checked uniform to 1e-6 relative.
double uniform_step(const std::vector<double>& t_us);

int nyquist_zone(double f_mhz, double fs_mhz);
double alias_frequency(double f_mhz, double fs_mhz);
double reconstruct_frequency(double f_alias_mhz, int zone, double fs_mhz);

struct Peak {
  double freq_mhz = 0.0;
  double magnitude = 0.0;
};

// Local maxima at or above rel_threshold of the largest magnitude, at least
// min_separation bins apart (the larger one wins), refined by a parabola
// through the three neighbouring bins and ordered by frequency.
std::vector<Peak> find_peaks(const Spectrum& spectrum, double rel_threshold = 0.2, int min_separation = 2);

}  // namespace nvscope
