// ssleval/fusion.hpp

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
#include <span>
#include <vector>

#include <fmt/format.h>

#include "ssleval/error.hpp"
#include "ssleval/features.hpp"

namespace ssleval {

/// Softmax of per-layer logits, so the layer weights are positive and sum
/// to one.
inline std::vector<double> normalize_weights(std::span<const float> logits) {
  if (logits.empty()) throw InvalidArgument("layer weights are empty");
  for (float w : logits)
    if (!std::isfinite(w)) throw InvalidArgument("layer weight logits must be finite");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> alpha(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    alpha[i] = std::exp(static_cast<double>(logits[i]) - peak);
    total += alpha[i];
  }
  for (double& a : alpha) a /= total;
  return alpha;
}

inline constexpr double kWeightSumTolerance = 1e-4;

/// out[t, d] = sum_i alpha[i] * stack[i, t, d]
inline FeatureMatrix weighted_sum(const FeatureStack& stack, std::span<const double> alpha) {
  if (alpha.size() != stack.n_layers)
    throw InvalidArgument(fmt::format("{} weights for {} layers", alpha.size(), stack.n_layers));
  double total = 0.0;
  for (double a : alpha) {
    if (!std::isfinite(a) || a < 0.0) throw InvalidArgument("layer weights must be finite and non-negative");
    total += a;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance)
    throw InvalidArgument(fmt::format("layer weights sum to {}, expected 1", total));

  const std::size_t plane = stack.n_frames * stack.dim;
  std::vector<double> acc(plane, 0.0);
  for (std::size_t i = 0; i < stack.n_layers; ++i) {
    const float* layer = stack.data.data() + i * plane;
    for (std::size_t j = 0; j < plane; ++j) acc[j] += alpha[i] * layer[j];
  }
  FeatureMatrix out(stack.n_frames, stack.dim, stack.frame_rate);
  std::transform(acc.begin(), acc.end(), out.values.data().begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

/// Source frame for each of target_frames output frames: floor(j * T / target).
inline std::vector<std::size_t> replication_indices(std::size_t source_frames,
                                                    std::size_t target_frames) {
  std::vector<std::size_t> idx(target_frames);
  for (std::size_t j = 0; j < target_frames; ++j)
    idx[j] = static_cast<std::size_t>(static_cast<unsigned __int128>(j) * source_frames /
                                      target_frames);
  return idx;
}

/// Brings features to the encoder's frame count by replicating rows. No
/// interpolation: every output row is a copy of an input row.
inline FeatureMatrix align_frames(const FeatureMatrix& features, std::size_t target_frames) {
  if (features.n_frames() == 0) throw InvalidArgument("cannot align an empty feature matrix");
  if (target_frames == 0) throw InvalidArgument("target frame count must be positive");
  const auto idx = replication_indices(features.n_frames(), target_frames);
  FeatureMatrix out(target_frames, features.dim(),
                    features.frame_rate * static_cast<double>(target_frames) /
                        static_cast<double>(features.n_frames()));
  for (std::size_t j = 0; j < target_frames; ++j)
    std::copy_n(features.row(idx[j]).begin(), features.dim(), out.row(j).begin());
  return out;
}

/// Row-wise [latent | ssl].
inline FeatureMatrix concat_features(const FeatureMatrix& latent, const FeatureMatrix& ssl) {
  if (latent.n_frames() != ssl.n_frames())
    throw InvalidArgument(fmt::format("frame count mismatch: latent {} vs features {}",
                                      latent.n_frames(), ssl.n_frames()));
  const std::size_t n = latent.dim();
  FeatureMatrix out(latent.n_frames(), n + ssl.dim(), latent.frame_rate);
  for (std::size_t t = 0; t < latent.n_frames(); ++t) {
    auto row = out.row(t);
    std::copy_n(latent.row(t).begin(), n, row.begin());
    std::copy_n(ssl.row(t).begin(), ssl.dim(), row.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

/// Inverse of concat_features: columns [0, n) and [n, dim).
inline std::pair<FeatureMatrix, FeatureMatrix> split_features(const FeatureMatrix& joined,
                                                              std::size_t n) {
  if (n > joined.dim()) throw InvalidArgument("split point beyond feature dimension");
  FeatureMatrix left(joined.n_frames(), n, joined.frame_rate);
  FeatureMatrix right(joined.n_frames(), joined.dim() - n, joined.frame_rate);
  for (std::size_t t = 0; t < joined.n_frames(); ++t) {
    const auto row = joined.row(t);
    std::copy_n(row.begin(), n, left.row(t).begin());
    std::copy(row.begin() + static_cast<std::ptrdiff_t>(n), row.end(), right.row(t).begin());
  }
  return {std::move(left), std::move(right)};
}

}  // namespace ssleval
