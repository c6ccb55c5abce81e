// tests/unit/powerset_test.cpp

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

#include <gtest/gtest.h>

#include <bit>

#include "ssleval/powerset.hpp"
#include "support/oracles.hpp"

namespace ssleval {
namespace {

std::vector<std::uint8_t> bits(std::size_t k, std::uint64_t mask) {
  std::vector<std::uint8_t> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = (mask >> i) & 1u;
  return v;
}

TEST(Powerset, ThreeSpeakerClassOrder) {
  const auto space = build_space(3);
  // 0-based slots: {}, {0}, {1}, {2}, {0,1}, {0,2}, {1,2}
  EXPECT_EQ(space.classes(), (std::vector<std::uint64_t>{0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110}));
}

TEST(Powerset, ClassCounts) {
  EXPECT_EQ(build_space(1).num_classes(), 2u);
  EXPECT_EQ(build_space(5).num_classes(), 16u);
  for (std::size_t k = 1; k <= 8; ++k) EXPECT_EQ(build_space(k).num_classes(), 1 + k + k * (k - 1) / 2);
  EXPECT_THROW(build_space(0), InvalidArgument);
}

TEST(Powerset, EncodeExamples) {
  const auto space = build_space(3);
  EXPECT_EQ(space.encode(bits(3, 0b101)), 5u);
  EXPECT_EQ(space.encode(bits(3, 0b000)), 0u);
  EXPECT_EQ(space.encode(bits(3, 0b111)), 4u);
  EXPECT_THROW(space.encode(bits(2, 0b11)), InvalidArgument);
}

// Brute force: nearest class by Hamming distance, scanning in index order.
std::size_t nearest_class(const PowersetSpace& space, std::uint64_t mask) {
  std::size_t best = 0;
  int best_d = 1 << 30;
  for (std::size_t c = 0; c < space.num_classes(); ++c) {
    const int d = std::popcount(mask ^ space.subset(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

TEST(Powerset, EncodeIsTotalAndMatchesHammingScan) {
  for (std::size_t k = 1; k <= 8; ++k) {
    const auto space = build_space(k);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
      const std::size_t c = space.encode(bits(k, m));
      EXPECT_EQ(c, nearest_class(space, m)) << "k=" << k << " mask=" << m;
      EXPECT_LE(std::popcount(space.subset(c)), 2);
    }
  }
}

TEST(Powerset, DecodeExamplesAndRoundTrip) {
  const auto space3 = build_space(3);
  EXPECT_EQ(space3.decode(0), bits(3, 0));
  EXPECT_EQ(space3.decode(4), (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_THROW(space3.decode(7), InvalidArgument);
  const auto space4 = build_space(4);
  for (std::size_t c = 0; c < space4.num_classes(); ++c) EXPECT_EQ(space4.encode(space4.decode(c)), c);
}

TEST(Powerset, DecodeFramesOneHotAndTies) {
  const auto space = build_space(3);
  Matrix<float> one_hot(7, 7, 0.0f);
  for (std::size_t c = 0; c < 7; ++c) one_hot(c, c) = 1.0f;
  const auto act = space.decode_frames(one_hot);
  for (std::size_t c = 0; c < 7; ++c)
    EXPECT_EQ(std::vector<std::uint8_t>(act.row(c).begin(), act.row(c).end()), space.decode(c));

  const auto silent = space.decode_frames(Matrix<float>(5, 7, 0.25f));
  for (auto v : silent.data()) EXPECT_EQ(v, 0);
}

TEST(Powerset, DecodeFramesAgreesWithScalarLoop) {
  const auto space = build_space(3);
  testing::Rng rng(21);
  Matrix<float> scores(100, 7);
  for (float& v : scores.data()) v = static_cast<float>(rng.normal());
  const auto act = space.decode_frames(scores);
  for (std::size_t t = 0; t < 100; ++t) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < 7; ++c)
      if (scores(t, c) > scores(t, best)) best = c;
    int row_sum = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(act(t, k), (space.subset(best) >> k) & 1u);
      row_sum += act(t, k);
    }
    EXPECT_LE(row_sum, 2);
  }
}

TEST(Powerset, DecodeFramesRejectsBadInput) {
  const auto space = build_space(2);
  Matrix<float> scores(2, 4, 0.0f);
  scores(1, 2) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(space.decode_frames(scores), InvalidArgument);
  EXPECT_THROW(space.decode_frames(Matrix<float>(2, 3)), InvalidArgument);
}

}  // namespace
}  // namespace ssleval
