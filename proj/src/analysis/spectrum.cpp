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

#include "nvscope/analysis/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <unsupported/Eigen/FFT>

#include "nvscope/errors.hpp"
#include "nvscope/units.hpp"

namespace nvscope {

double uniform_step(const std::vector<double>& t_us) {
  if (t_us.size() < 2) throw AnalysisError("at least two sample times are needed");
  const double dt = (t_us.back() - t_us.front()) / static_cast<double>(t_us.size() - 1);
  if (!(dt > 0.0)) throw AnalysisError("sample times must be strictly ascending");
  for (std::size_t i = 1; i < t_us.size(); ++i) {
    if (std::abs(t_us[i] - t_us[i - 1] - dt) > 1e-6 * dt) {
      throw AnalysisError("non-uniform sampling between samples " + std::to_string(i - 1) + " and " +
                          std::to_string(i));
    }
  }
  return dt;
}

Spectrum spectrum(const std::vector<double>& trace, double dt_us, const SpectrumOptions& options) {
  const std::size_t n = trace.size();
  if (n < 8) throw AnalysisError("spectrum needs at least 8 samples, got " + std::to_string(n));
  if (!(dt_us > 0.0) || !std::isfinite(dt_us)) throw AnalysisError("sampling interval must be > 0");
  if (options.zero_pad < 1) throw AnalysisError("zero padding factor must be >= 1");
  if (options.zone && *options.zone < 0) throw AnalysisError("Nyquist zone must be >= 0");

  const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
  std::vector<double> x(n * static_cast<std::size_t>(options.zero_pad), 0.0);
  double window_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = options.window == Window::Hann
                         ? 0.5 * (1.0 - std::cos(units::kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1)))
                         : 1.0;
    window_sum += w;
    x[i] = (trace[i] - mean) * w;
  }

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, x);

  const std::size_t m = x.size();
  const double fs = 1.0 / dt_us;
  Spectrum out;
  out.sample_rate_mhz = fs;
  out.bin_mhz = fs / static_cast<double>(m);
  out.nyquist_zone = options.zone.value_or(0);
  const std::size_t half = m / 2;
  out.freqs_mhz.reserve(half + 1);
  out.magnitudes.reserve(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double fa = static_cast<double>(k) * out.bin_mhz;
    out.freqs_mhz.push_back(options.zone ? reconstruct_frequency(fa, *options.zone, fs) : fa);
    out.magnitudes.push_back(2.0 * std::abs(freq[k]) / window_sum);
  }
  if (options.zone && *options.zone % 2 == 1) {
    std::reverse(out.freqs_mhz.begin(), out.freqs_mhz.end());
    std::reverse(out.magnitudes.begin(), out.magnitudes.end());
  }
  return out;
}

Spectrum spectrum(const std::vector<double>& t_us, const std::vector<double>& trace,
                  const SpectrumOptions& options) {
  if (t_us.size() != trace.size()) throw AnalysisError("time and value columns differ in length");
  return spectrum(trace, uniform_step(t_us), options);
}

int nyquist_zone(double f_mhz, double fs_mhz) {
  if (!(fs_mhz > 0.0) || !(f_mhz >= 0.0)) throw AnalysisError("frequencies must be non-negative, fs > 0");
  return static_cast<int>(std::floor(2.0 * f_mhz / fs_mhz));
}

double alias_frequency(double f_mhz, double fs_mhz) {
  if (!(fs_mhz > 0.0) || !(f_mhz >= 0.0)) throw AnalysisError("frequencies must be non-negative, fs > 0");
  const double r = std::fmod(f_mhz, fs_mhz);
  return r > fs_mhz / 2.0 ? fs_mhz - r : r;
}

double reconstruct_frequency(double f_alias_mhz, int zone, double fs_mhz) {
  if (zone < 0) throw AnalysisError("Nyquist zone must be >= 0");
  if (zone % 2 == 0) return 0.5 * zone * fs_mhz + f_alias_mhz;
  return 0.5 * (zone + 1) * fs_mhz - f_alias_mhz;
}

std::vector<Peak> find_peaks(const Spectrum& s, double rel_threshold, int min_separation) {
  const auto& m = s.magnitudes;
  std::vector<Peak> peaks;
  if (m.size() < 3) return peaks;
  const double top = *std::max_element(m.begin(), m.end());
  if (!(top > 1e-12)) return peaks;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < m.size(); ++i) {
    if (m[i] > m[i - 1] && m[i] >= m[i + 1] && m[i] >= rel_threshold * top) candidates.push_back(i);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) { return m[a] > m[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t c : candidates) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return static_cast<long>(c > k ? c - k : k - c) >= min_separation;
    });
    if (clear) kept.push_back(c);
  }
  for (std::size_t i : kept) {
    const double y0 = m[i - 1];
    const double y1 = m[i];
    const double y2 = m[i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    const double delta = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
    const double half_span = 0.5 * (s.freqs_mhz[i + 1] - s.freqs_mhz[i - 1]);
    peaks.push_back(Peak{s.freqs_mhz[i] + delta * half_span, y1 - 0.25 * (y0 - y2) * delta});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.freq_mhz < b.freq_mhz; });
  return peaks;
}

}  // namespace nvscope
