// ssleval/resampler.hpp

// Copyright 2026  ssleval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "ssleval/audio.hpp"
#include "ssleval/error.hpp"

namespace ssleval {

/// Linear-phase lowpass FIR running at the higher of the two rates.
struct FirFilter {
  std::vector<float> taps;
  double nominal_cutoff = 0.0;  // cycles per sample at filter_rate
  double stopband_db = 0.0;
  double beta = 0.0;
  int fs_in = 0;
  int fs_out = 0;
  int filter_rate = 0;

  std::size_t size() const noexcept { return taps.size(); }
  std::size_t group_delay() const noexcept { return (taps.size() - 1) / 2; }
};

struct KaiserDesign {
  double stopband_db = 80.0;
  double transition_frac = 0.05;
};

inline bool is_supported_rate(int hz) { return hz == 8000 || hz == 16000; }

/// Kaiser's empirical shape parameter for a stopband attenuation in dB.
inline double kaiser_beta(double stopband_db) {
  const double a = stopband_db;
  if (a > 50.0) return 0.1102 * (a - 8.7);
  if (a >= 21.0) return 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
  return 0.0;
}

/// Odd tap count from Kaiser's length estimate; the transition width is
/// transition_frac * pi in radians per sample of the lower rate.
inline std::size_t kaiser_tap_count(double stopband_db, double transition_frac) {
  const double width = transition_frac * std::numbers::pi;
  auto n = static_cast<std::size_t>(std::ceil((stopband_db - 7.95) / (2.285 * width)));
  if (n % 2 == 0) ++n;
  return n;
}

inline FirFilter design_kaiser_sinc(int fs_in, int fs_out, KaiserDesign design = {}) {
  if (!is_supported_rate(fs_in) || !is_supported_rate(fs_out))
    throw InvalidArgument(fmt::format("unsupported rate pair {} -> {} Hz", fs_in, fs_out));
  if (!(design.stopband_db >= 40.0))
    throw InvalidArgument("stopband attenuation must be at least 40 dB");
  if (!(design.transition_frac > 0.0 && design.transition_frac < 0.5))
    throw InvalidArgument("transition fraction must lie in (0, 0.5)");

  FirFilter f;
  f.fs_in = fs_in;
  f.fs_out = fs_out;
  f.filter_rate = std::max(fs_in, fs_out);
  f.stopband_db = design.stopband_db;
  f.beta = kaiser_beta(design.stopband_db);
  const double cutoff_hz = 0.5 * (1.0 - design.transition_frac) * std::min(fs_in, fs_out);
  f.nominal_cutoff = cutoff_hz / f.filter_rate;

  const std::size_t n = kaiser_tap_count(design.stopband_db, design.transition_frac);
  const std::size_t center = (n - 1) / 2;
  std::vector<double> h(n);
  const double i0_beta = std::cyl_bessel_i(0.0, f.beta);
  for (std::size_t k = 0; k <= center; ++k) {
    const double offset = static_cast<double>(k) - static_cast<double>(center);
    const double arg = 2.0 * std::numbers::pi * f.nominal_cutoff * offset;
    const double sinc = offset == 0.0 ? 1.0 : std::sin(arg) / arg;
    const double ratio = center == 0 ? 0.0 : offset / static_cast<double>(center);
    const double window = std::cyl_bessel_i(0.0, f.beta * std::sqrt(1.0 - ratio * ratio)) / i0_beta;
    h[k] = h[n - 1 - k] = 2.0 * f.nominal_cutoff * sinc * window;
  }

  // Unity passband gain per output phase: an L-fold interpolator sums to L.
  double sum = 0.0;
  for (double v : h) sum += v;
  const double gain = fs_out > fs_in ? static_cast<double>(fs_out) / fs_in : 1.0;
  f.taps.resize(n);
  for (std::size_t k = 0; k <= center; ++k)
    f.taps[k] = f.taps[n - 1 - k] = static_cast<float>(h[k] * gain / sum);
  return f;
}

inline std::size_t resampled_length(std::size_t n, int fs_in, int fs_out) {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * fs_out / static_cast<double>(fs_in)));
}

/// Polyphase 1:2 / 2:1 conversion with zero padding outside the signal and
/// the filter's group delay removed, so output sample m sits at time m/fs_out.
inline AudioBuffer resample(const AudioBuffer& audio, int fs_out,
                            const std::optional<FirFilter>& filter = std::nullopt) {
  const int fs_in = audio.sample_rate;
  if (fs_in == fs_out) return audio;
  const bool up = fs_in * 2 == fs_out;
  const bool down = fs_out * 2 == fs_in;
  if ((!up && !down) || !is_supported_rate(fs_in) || !is_supported_rate(fs_out))
    throw InvalidArgument(fmt::format("unsupported resampling ratio {} -> {} Hz", fs_in, fs_out));

  const FirFilter designed = filter ? *filter : design_kaiser_sinc(fs_in, fs_out);
  if (designed.fs_in != fs_in || designed.fs_out != fs_out)
    throw InvalidArgument("filter was designed for a different rate pair");

  AudioBuffer out;
  out.sample_rate = fs_out;
  const std::size_t n_out = resampled_length(audio.size(), fs_in, fs_out);
  out.samples.resize(n_out);
  if (audio.empty()) return out;

  const auto& h = designed.taps;
  const auto delay = static_cast<std::ptrdiff_t>(designed.group_delay());
  const auto taps = static_cast<std::ptrdiff_t>(h.size());
  const auto n_in = static_cast<std::ptrdiff_t>(audio.size());
  const auto& x = audio.samples;

  for (std::size_t m = 0; m < n_out; ++m) {
    double acc = 0.0;
    if (up) {
      // Zero-stuffed input is non-zero only on even high-rate indices.
      const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(m) + delay;
      for (std::ptrdiff_t k = base & 1; k < taps; k += 2) {
        const std::ptrdiff_t src = (base - k) / 2;
        if (base - k < 0) break;
        if (src < n_in) acc += static_cast<double>(h[static_cast<std::size_t>(k)]) * x[static_cast<std::size_t>(src)];
      }
    } else {
      const std::ptrdiff_t base = 2 * static_cast<std::ptrdiff_t>(m) + delay;
      const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, base - (n_in - 1));
      const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(taps - 1, base);
      for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k)
        acc += static_cast<double>(h[static_cast<std::size_t>(k)]) * x[static_cast<std::size_t>(base - k)];
    }
    out.samples[m] = static_cast<float>(acc);
  }
  return out;
}

}  // namespace ssleval
