// ssleval/features.hpp

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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ssleval/error.hpp"
#include "ssleval/matrix.hpp"

namespace ssleval {

/// Self-supervised frame rate: 20 ms hop at 16 kHz.
inline constexpr double kSslFrameRate = 50.0;

/// Per-layer frame features, laid out layer-major then frame-major.
struct FeatureStack {
  std::size_t n_layers = 0;
  std::size_t n_frames = 0;
  std::size_t dim = 0;
  double frame_rate = kSslFrameRate;
  std::vector<float> data;

  FeatureStack() = default;
  FeatureStack(std::size_t layers, std::size_t frames, std::size_t d,
               double rate = kSslFrameRate)
      : n_layers(layers), n_frames(frames), dim(d), frame_rate(rate),
        data(layers * frames * d, 0.0f) {}

  float& at(std::size_t layer, std::size_t frame, std::size_t d) {
    return data[(layer * n_frames + frame) * dim + d];
  }
  float at(std::size_t layer, std::size_t frame, std::size_t d) const {
    return data[(layer * n_frames + frame) * dim + d];
  }
  std::span<const float> frame(std::size_t layer, std::size_t t) const {
    return {data.data() + (layer * n_frames + t) * dim, dim};
  }

  friend bool operator==(const FeatureStack&, const FeatureStack&) = default;
};

/// T x D features with a frame rate (the aggregated SSL representation, an
/// encoder latent, or a score matrix).
struct FeatureMatrix {
  Matrix<float> values;
  double frame_rate = kSslFrameRate;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t frames, std::size_t d, double rate = kSslFrameRate)
      : values(frames, d), frame_rate(rate) {}
  FeatureMatrix(Matrix<float> m, double rate)
      : values(std::move(m)), frame_rate(rate) {}

  std::size_t n_frames() const noexcept { return values.rows(); }
  std::size_t dim() const noexcept { return values.cols(); }
  std::span<const float> row(std::size_t t) const { return values.row(t); }
  std::span<float> row(std::size_t t) { return values.row(t); }
  float& operator()(std::size_t t, std::size_t d) { return values(t, d); }
  float operator()(std::size_t t, std::size_t d) const { return values(t, d); }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

inline void validate(const FeatureStack& s) {
  if (s.n_layers == 0 || s.n_frames == 0 || s.dim == 0)
    throw InvalidArgument("feature stack dimensions must be positive");
  if (!(s.frame_rate > 0.0) || !std::isfinite(s.frame_rate))
    throw InvalidArgument("feature stack frame rate must be positive");
  if (s.data.size() != s.n_layers * s.n_frames * s.dim)
    throw InvalidArgument("feature stack payload does not match its shape");
  for (float v : s.data)
    if (!std::isfinite(v)) throw InvalidArgument("feature stack has non-finite values");
}

inline void validate(const FeatureMatrix& m) {
  if (!(m.frame_rate > 0.0) || !std::isfinite(m.frame_rate))
    throw InvalidArgument("feature matrix frame rate must be positive");
  for (float v : m.values.data())
    if (!std::isfinite(v)) throw InvalidArgument("feature matrix has non-finite values");
}

/// One layer of a stack as a matrix.
inline FeatureMatrix layer_matrix(const FeatureStack& s, std::size_t layer) {
  if (layer >= s.n_layers) throw InvalidArgument("layer index out of range");
  const auto first = s.data.begin() + static_cast<std::ptrdiff_t>(layer * s.n_frames * s.dim);
  std::vector<float> rows(first, first + static_cast<std::ptrdiff_t>(s.n_frames * s.dim));
  return FeatureMatrix(Matrix<float>(s.n_frames, s.dim, std::move(rows)), s.frame_rate);
}

/// Packs equally shaped matrices into a stack, one layer each.
inline FeatureStack stack_matrices(std::span<const FeatureMatrix> layers) {
  if (layers.empty()) throw InvalidArgument("cannot stack zero matrices");
  FeatureStack s(layers.size(), layers[0].n_frames(), layers[0].dim(),
                 layers[0].frame_rate);
  s.data.clear();
  for (const auto& m : layers) {
    if (m.n_frames() != s.n_frames || m.dim() != s.dim)
      throw InvalidArgument("stacked matrices must share a shape");
    s.data.insert(s.data.end(), m.values.data().begin(), m.values.data().end());
  }
  return s;
}

}  // namespace ssleval
