// ssleval/tasnet.hpp

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
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "ssleval/audio.hpp"
#include "ssleval/error.hpp"
#include "ssleval/features.hpp"
#include "ssleval/matrix.hpp"

namespace ssleval::tasnet {

enum class Nonlinearity { kRelu, kLinear };

/// Analysis filters (strided Conv1D) and synthesis filters (transposed
/// Conv1D), both N x L.
struct EncoderBasis {
  Matrix<float> analysis;
  Matrix<float> synthesis;
  std::size_t stride = 1;
  Nonlinearity nonlinearity = Nonlinearity::kRelu;

  EncoderBasis() = default;
  EncoderBasis(Matrix<float> a, Matrix<float> s, std::size_t hop, Nonlinearity g)
      : analysis(std::move(a)), synthesis(std::move(s)), stride(hop), nonlinearity(g) {
    if (analysis.rows() == 0 || analysis.cols() == 0)
      throw InvalidArgument("encoder basis needs at least one filter of positive length");
    if (synthesis.rows() != analysis.rows() || synthesis.cols() != analysis.cols())
      throw InvalidArgument("analysis and synthesis filters must have the same shape");
    if (stride < 1 || stride > kernel())
      throw InvalidArgument(fmt::format("stride {} must lie in [1, {}]", stride, kernel()));
    for (float v : analysis.data())
      if (!std::isfinite(v)) throw InvalidArgument("analysis filters are not finite");
    for (float v : synthesis.data())
      if (!std::isfinite(v)) throw InvalidArgument("synthesis filters are not finite");
  }

  std::size_t filters() const noexcept { return analysis.rows(); }
  std::size_t kernel() const noexcept { return analysis.cols(); }

  std::size_t frames_for(std::size_t samples) const {
    return samples < kernel() ? 0 : (samples - kernel()) / stride + 1;
  }
  std::size_t samples_for(std::size_t frames) const {
    return frames == 0 ? 0 : (frames - 1) * stride + kernel();
  }
};

/// Seeded uniform filters in [-sqrt(3/L), sqrt(3/L)); synthesis equals
/// analysis. mt19937_64 output is fixed by the standard, so bases are
/// reproducible across platforms.
inline EncoderBasis random_basis(std::size_t filters, std::size_t kernel, std::size_t stride,
                                 std::uint64_t seed,
                                 Nonlinearity g = Nonlinearity::kRelu) {
  std::mt19937_64 gen(seed);
  const double scale = std::sqrt(3.0 / static_cast<double>(std::max<std::size_t>(kernel, 1)));
  Matrix<float> a(filters, kernel);
  for (float& v : a.data()) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = static_cast<float>((2.0 * u - 1.0) * scale);
  }
  Matrix<float> s = a;
  return EncoderBasis(std::move(a), std::move(s), stride, g);
}

/// S x T x N masks, clipped into [0, 1] on construction.
class MaskSet {
 public:
  MaskSet(std::size_t sources, std::size_t frames, std::size_t filters, std::vector<float> values)
      : sources_(sources), frames_(frames), filters_(filters), values_(std::move(values)) {
    if (values_.size() != sources_ * frames_ * filters_)
      throw InvalidArgument("mask payload does not match its shape");
    for (float& v : values_) {
      if (std::isnan(v)) throw InvalidArgument("mask contains NaN");
      v = std::clamp(v, 0.0f, 1.0f);
    }
  }

  std::size_t sources() const noexcept { return sources_; }
  std::size_t frames() const noexcept { return frames_; }
  std::size_t filters() const noexcept { return filters_; }
  float operator()(std::size_t s, std::size_t t, std::size_t n) const {
    return values_[(s * frames_ + t) * filters_ + n];
  }
  const std::vector<float>& values() const noexcept { return values_; }

  /// Stack layout: n_layers = sources, n_frames = frames, dim = filters.
  static MaskSet from_stack(const FeatureStack& stack) {
    return MaskSet(stack.n_layers, stack.n_frames, stack.dim, stack.data);
  }
  FeatureStack to_stack(double frame_rate) const {
    FeatureStack s(sources_, frames_, filters_, frame_rate);
    s.data = values_;
    return s;
  }

 private:
  std::size_t sources_;
  std::size_t frames_;
  std::size_t filters_;
  std::vector<float> values_;
};

namespace detail {

inline FeatureMatrix encode_with(std::span<const float> x, int sample_rate,
                                 const EncoderBasis& basis, Nonlinearity g) {
  if (x.size() < basis.kernel())
    throw InvalidArgument(fmt::format("audio has {} samples, shorter than the {}-sample kernel",
                                      x.size(), basis.kernel()));
  const std::size_t frames = basis.frames_for(x.size());
  FeatureMatrix out(frames, basis.filters(),
                    static_cast<double>(sample_rate) / static_cast<double>(basis.stride));
  for (std::size_t t = 0; t < frames; ++t) {
    const float* window = x.data() + t * basis.stride;
    for (std::size_t n = 0; n < basis.filters(); ++n) {
      const auto filter = basis.analysis.row(n);
      double acc = 0.0;
      for (std::size_t l = 0; l < filter.size(); ++l) acc += static_cast<double>(filter[l]) * window[l];
      if (g == Nonlinearity::kRelu) acc = std::max(acc, 0.0);
      out(t, n) = static_cast<float>(acc);
    }
  }
  return out;
}

}  // namespace detail

/// Strided convolution of the waveform with the analysis filters.
/// T = floor((len - L) / stride) + 1 frames.
inline FeatureMatrix encode(const AudioBuffer& audio, const EncoderBasis& basis) {
  return detail::encode_with(audio.samples, audio.sample_rate, basis, basis.nonlinearity);
}

/// Per-source elementwise product of the latent with each mask.
inline std::vector<FeatureMatrix> apply_masks(const FeatureMatrix& latent, const MaskSet& masks) {
  if (masks.frames() != latent.n_frames() || masks.filters() != latent.dim())
    throw InvalidArgument(fmt::format("mask shape {}x{} does not match latent {}x{}",
                                      masks.frames(), masks.filters(),
                                      latent.n_frames(), latent.dim()));
  std::vector<FeatureMatrix> out;
  out.reserve(masks.sources());
  for (std::size_t s = 0; s < masks.sources(); ++s) {
    FeatureMatrix masked(latent.n_frames(), latent.dim(), latent.frame_rate);
    for (std::size_t t = 0; t < latent.n_frames(); ++t)
      for (std::size_t n = 0; n < latent.dim(); ++n)
        masked(t, n) = latent(t, n) * masks(s, t, n);
    out.push_back(std::move(masked));
  }
  return out;
}

/// Transposed convolution: overlap-add of synthesis^T * latent[t] at t * stride.
inline AudioBuffer decode(const FeatureMatrix& latent, const EncoderBasis& basis) {
  if (latent.dim() != basis.filters())
    throw InvalidArgument(fmt::format("latent has {} channels, basis has {} filters",
                                      latent.dim(), basis.filters()));
  validate(latent);
  std::vector<double> acc(basis.samples_for(latent.n_frames()), 0.0);
  for (std::size_t t = 0; t < latent.n_frames(); ++t) {
    double* frame = acc.data() + t * basis.stride;
    for (std::size_t n = 0; n < basis.filters(); ++n) {
      const double coeff = latent(t, n);
      if (coeff == 0.0) continue;
      const auto filter = basis.synthesis.row(n);
      for (std::size_t l = 0; l < filter.size(); ++l) frame[l] += coeff * filter[l];
    }
  }
  AudioBuffer out;
  out.sample_rate = static_cast<int>(std::lround(latent.frame_rate * static_cast<double>(basis.stride)));
  out.samples.resize(acc.size());
  std::transform(acc.begin(), acc.end(), out.samples.begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

inline constexpr double kOracleMaskEpsilon = 1e-8;

/// Ratio masks from the sources' ReLU encodings:
/// m[s] = enc(s) / (sum_j enc(j) + eps), clipped to [0, 1].
inline MaskSet oracle_masks(std::span<const AudioBuffer> sources, const EncoderBasis& basis,
                            double eps = kOracleMaskEpsilon) {
  if (sources.empty()) throw InvalidArgument("oracle masks need at least one source");
  for (const auto& s : sources)
    if (s.size() != sources[0].size())
      throw InvalidArgument("oracle-mask sources must have equal length");

  std::vector<FeatureMatrix> encoded;
  encoded.reserve(sources.size());
  for (const auto& s : sources)
    encoded.push_back(detail::encode_with(s.samples, s.sample_rate, basis, Nonlinearity::kRelu));

  const std::size_t frames = encoded[0].n_frames();
  const std::size_t filters = basis.filters();
  std::vector<float> values(sources.size() * frames * filters);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t n = 0; n < filters; ++n) {
      double total = eps;
      for (const auto& e : encoded) total += e(t, n);
      for (std::size_t s = 0; s < encoded.size(); ++s)
        values[(s * frames + t) * filters + n] = static_cast<float>(encoded[s](t, n) / total);
    }
  }
  return MaskSet(sources.size(), frames, filters, std::move(values));
}

/// Encode the mixture, mask it per source, and decode every source.
inline std::vector<AudioBuffer> separate_with_masks(const AudioBuffer& mixture,
                                                    const EncoderBasis& basis,
                                                    const MaskSet& masks) {
  const FeatureMatrix latent = encode(mixture, basis);
  std::vector<AudioBuffer> out;
  for (const auto& masked : apply_masks(latent, masks)) out.push_back(decode(masked, basis));
  return out;
}

}  // namespace ssleval::tasnet
