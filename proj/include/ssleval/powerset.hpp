// ssleval/powerset.hpp

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

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "ssleval/error.hpp"
#include "ssleval/matrix.hpp"

namespace ssleval {

/// Multi-class label space over speaker subsets of size <= 2:
/// [empty] ++ singletons ascending ++ pairs in lexicographic order.
/// Subsets are bitmasks over 0-based speaker slots.
class PowersetSpace {
 public:
  static constexpr int kMaxSimultaneous = 2;
  static constexpr std::size_t kMaxSpeakers = 64;

  explicit PowersetSpace(std::size_t max_speakers) : k_(max_speakers) {
    if (k_ == 0) throw InvalidArgument("powerset space needs at least one speaker");
    if (k_ > kMaxSpeakers)
      throw InvalidArgument(fmt::format("at most {} speakers supported", kMaxSpeakers));
    classes_.reserve(class_count(k_));
    classes_.push_back(0);
    for (std::size_t i = 0; i < k_; ++i) classes_.push_back(bit(i));
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = i + 1; j < k_; ++j) classes_.push_back(bit(i) | bit(j));
  }

  static constexpr std::size_t class_count(std::size_t k) {
    return 1 + k + k * (k - 1) / 2;
  }

  std::size_t max_speakers() const noexcept { return k_; }
  std::size_t num_classes() const noexcept { return classes_.size(); }
  std::uint64_t subset(std::size_t index) const { return classes_.at(index); }
  const std::vector<std::uint64_t>& classes() const noexcept { return classes_; }

  /// Class index of an activity vector. Sets with more than two active
  /// speakers map to the nearest class in Hamming distance, lowest index on
  /// ties.
  std::size_t encode(std::span<const std::uint8_t> activity) const {
    if (activity.size() != k_)
      throw InvalidArgument(fmt::format("activity vector has length {}, expected {}",
                                        activity.size(), k_));
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < k_; ++i)
      if (activity[i]) mask |= bit(i);
    if (std::popcount(mask) <= kMaxSimultaneous) return index_of(mask);

    std::size_t best = 0;
    int best_distance = std::popcount(mask);
    for (std::size_t c = 1; c < classes_.size(); ++c) {
      const int d = std::popcount(mask ^ classes_[c]);
      if (d < best_distance) {
        best_distance = d;
        best = c;
      }
    }
    return best;
  }

  std::vector<std::uint8_t> decode(std::size_t index) const {
    if (index >= classes_.size())
      throw InvalidArgument(fmt::format("class index {} out of range [0, {})",
                                        index, classes_.size()));
    std::vector<std::uint8_t> out(k_, 0);
    for (std::size_t i = 0; i < k_; ++i) out[i] = (classes_[index] >> i) & 1u;
    return out;
  }

  /// Per-frame argmax (lowest index wins ties) followed by decode.
  Matrix<std::uint8_t> decode_frames(const Matrix<float>& scores) const {
    if (scores.cols() != classes_.size())
      throw InvalidArgument(fmt::format("score matrix has {} columns, expected {}",
                                        scores.cols(), classes_.size()));
    Matrix<std::uint8_t> out(scores.rows(), k_, 0);
    for (std::size_t t = 0; t < scores.rows(); ++t) {
      const auto row = scores.row(t);
      std::size_t best = 0;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (!std::isfinite(row[c]))
          throw InvalidArgument(fmt::format("non-finite score at frame {}", t));
        if (row[c] > row[best]) best = c;
      }
      for (std::size_t i = 0; i < k_; ++i) out(t, i) = (classes_[best] >> i) & 1u;
    }
    return out;
  }

 private:
  static constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

  std::size_t index_of(std::uint64_t mask) const {
    if (mask == 0) return 0;
    const auto lo = static_cast<std::size_t>(std::countr_zero(mask));
    const std::uint64_t rest = mask & (mask - 1);
    if (rest == 0) return 1 + lo;
    const auto hi = static_cast<std::size_t>(std::countr_zero(rest));
    // Pairs starting with slot a occupy k-1-a consecutive indices.
    const std::size_t before = lo * (k_ - 1) - lo * (lo - 1) / 2;
    return 1 + k_ + before + (hi - lo - 1);
  }

  std::size_t k_;
  std::vector<std::uint64_t> classes_;
};

inline PowersetSpace build_space(std::size_t max_speakers) {
  return PowersetSpace(max_speakers);
}

}  // namespace ssleval
