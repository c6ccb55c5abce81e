// tests/unit/tasnet_test.cpp

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

#include <cmath>

#include "ssleval/separation_metrics.hpp"
#include "ssleval/tasnet.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace ssleval::tasnet {
namespace {

using testing::Rng;

AudioBuffer noise(Rng& rng, std::size_t n, int rate = 8000, double amp = 0.3) {
  AudioBuffer a{std::vector<float>(n), rate};
  for (float& s : a.samples) s = static_cast<float>(amp * rng.normal());
  return a;
}

FeatureMatrix random_latent(Rng& rng, std::size_t t, std::size_t n, double rate = 1000.0) {
  FeatureMatrix m(t, n, rate);
  for (float& v : m.values.data()) v = static_cast<float>(rng.normal());
  return m;
}

TEST(Encode, UnitKernelIsIdentity) {
  const EncoderBasis basis(Matrix<float>(1, 1, 1.0f), Matrix<float>(1, 1, 1.0f), 1, Nonlinearity::kLinear);
  const AudioBuffer a{{0.5f, -0.25f, 0.125f}, 8000};
  const auto latent = encode(a, basis);
  ASSERT_EQ(latent.n_frames(), 3u);
  ASSERT_EQ(latent.dim(), 1u);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(latent(t, 0), a.samples[t]);
  EXPECT_DOUBLE_EQ(latent.frame_rate, 8000.0);
}

TEST(Encode, SilenceGivesZeroLatent) {
  const auto basis = random_basis(8, 16, 8, 42);
  const auto latent = encode(AudioBuffer{std::vector<float>(100, 0.0f), 8000}, basis);
  EXPECT_EQ(latent.n_frames(), (100u - 16u) / 8u + 1u);
  for (float v : latent.values.data()) EXPECT_EQ(v, 0.0f);
}

TEST(Encode, MatchesSlidingDotProduct) {
  Rng rng(31);
  const auto basis = random_basis(4, 8, 4, 7, Nonlinearity::kLinear);
  const auto relu_basis = random_basis(4, 8, 4, 7, Nonlinearity::kRelu);
  const auto a = noise(rng, 103);
  const auto latent = encode(a, basis);
  const auto relu_latent = encode(a, relu_basis);
  ASSERT_EQ(latent.n_frames(), (103u - 8u) / 4u + 1u);
  for (std::size_t t = 0; t < latent.n_frames(); ++t)
    for (std::size_t n = 0; n < 4; ++n) {
      double acc = 0.0;
      for (std::size_t l = 0; l < 8; ++l) acc += basis.analysis(n, l) * a.samples[t * 4 + l];
      EXPECT_NEAR(latent(t, n), acc, 1e-5);
      EXPECT_NEAR(relu_latent(t, n), std::max(acc, 0.0), 1e-5);
    }
}

TEST(Encode, RejectsShortAudio) {
  EXPECT_THROW(encode(AudioBuffer{std::vector<float>(15), 8000}, random_basis(2, 16, 8, 1)), InvalidArgument);
}

TEST(Basis, ValidatesShapeAndStride) {
  EXPECT_THROW(EncoderBasis(Matrix<float>(2, 4), Matrix<float>(2, 4), 5, Nonlinearity::kRelu), InvalidArgument);
  EXPECT_THROW(EncoderBasis(Matrix<float>(2, 4), Matrix<float>(2, 4), 0, Nonlinearity::kRelu), InvalidArgument);
  EXPECT_THROW(EncoderBasis(Matrix<float>(2, 4), Matrix<float>(3, 4), 2, Nonlinearity::kRelu), InvalidArgument);
  EXPECT_EQ(random_basis(3, 5, 2, 99).analysis, random_basis(3, 5, 2, 99).analysis);
  EXPECT_NE(random_basis(3, 5, 2, 99).analysis, random_basis(3, 5, 2, 100).analysis);
}

TEST(ApplyMasks, OnesAndZeros) {
  Rng rng(2);
  const auto latent = random_latent(rng, 10, 6);
  std::vector<float> values(2 * 10 * 6, 1.0f);
  std::fill(values.begin() + 60, values.end(), 0.0f);
  const auto out = apply_masks(latent, MaskSet(2, 10, 6, values));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], latent);
  for (float v : out[1].values.data()) EXPECT_EQ(v, 0.0f);
}

// Float products are rounded once each, so m*x + (1-m)*x can miss x by one
// rounding step of |x|.
TEST(ApplyMasks, ComplementaryMasksPartitionTheLatent) {
  Rng rng(3);
  const auto latent = random_latent(rng, 50, 16);
  std::vector<float> values(2 * 50 * 16);
  for (std::size_t i = 0; i < 800; ++i) {
    values[i] = static_cast<float>(rng.uniform());
    values[800 + i] = 1.0f - values[i];
  }
  const auto out = apply_masks(latent, MaskSet(2, 50, 16, values));
  for (std::size_t i = 0; i < 800; ++i) {
    const float x = latent.values.data()[i];
    EXPECT_LE(std::abs(out[0].values.data()[i] + out[1].values.data()[i] - x),
              std::ldexp(std::abs(x), -23));
  }
}

TEST(ApplyMasks, ShapeMismatchAndClipping) {
  Rng rng(4);
  const auto latent = random_latent(rng, 4, 3);
  EXPECT_THROW(apply_masks(latent, MaskSet(1, 5, 3, std::vector<float>(15))), InvalidArgument);
  const MaskSet clipped(1, 1, 2, {-0.5f, 1.5f});
  EXPECT_EQ(clipped.values(), (std::vector<float>{0.0f, 1.0f}));
}

TEST(Decode, ZeroLatentAndLength) {
  const auto basis = random_basis(8, 16, 8, 5);
  const auto out = decode(FeatureMatrix(11, 8, 1000.0), basis);
  EXPECT_EQ(out.size(), 10u * 8u + 16u);
  EXPECT_EQ(out.sample_rate, 8000);
  for (float v : out.samples) EXPECT_EQ(v, 0.0f);
}

TEST(Decode, Linearity) {
  Rng rng(5);
  const auto basis = random_basis(8, 16, 8, 5);
  const auto x = random_latent(rng, 20, 8), y = random_latent(rng, 20, 8);
  FeatureMatrix mix(20, 8, 1000.0);
  const float a = 0.6f, b = -1.3f;
  for (std::size_t i = 0; i < 160; ++i)
    mix.values.data()[i] = a * x.values.data()[i] + b * y.values.data()[i];
  const auto dx = decode(x, basis), dy = decode(y, basis), dm = decode(mix, basis);
  for (std::size_t i = 0; i < dm.size(); ++i) EXPECT_NEAR(dm.samples[i], a * dx.samples[i] + b * dy.samples[i], 1e-5);
}

TEST(Decode, OverlapAddMatchesScatterLoop) {
  Rng rng(6);
  const auto basis = random_basis(4, 6, 2, 8);
  const auto latent = random_latent(rng, 9, 4, 4000.0);
  const auto out = decode(latent, basis);
  std::vector<double> expect((9 - 1) * 2 + 6, 0.0);
  for (std::size_t t = 0; t < 9; ++t)
    for (std::size_t n = 0; n < 4; ++n)
      for (std::size_t l = 0; l < 6; ++l) expect[t * 2 + l] += latent(t, n) * basis.synthesis(n, l);
  ASSERT_EQ(out.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(out.samples[i], expect[i], 1e-5);
}

TEST(Decode, OrthonormalBasisReconstructsFrameAlignedInput) {
  Rng rng(7);
  const auto basis = testing::orthonormal_basis(16, rng);
  const auto a = noise(rng, 16 * 100);
  const auto back = decode(encode(a, basis), basis);
  ASSERT_EQ(back.size(), a.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(static_cast<double>(back.samples[i]) - a.samples[i]));
  EXPECT_LT(worst, 1e-6);

  // Not frame aligned: the tail that does not fill a frame is dropped.
  const auto b = noise(rng, 16 * 10 + 5);
  EXPECT_EQ(decode(encode(b, basis), basis).size(), 160u);
}

TEST(OracleMasks, SingleSourceIsOneOnActiveCells) {
  Rng rng(8);
  const auto basis = random_basis(16, 16, 8, 3);
  const std::vector<AudioBuffer> sources{noise(rng, 800)};
  const auto masks = oracle_masks(sources, basis);
  const auto enc = encode(sources[0], random_basis(16, 16, 8, 3, Nonlinearity::kRelu));
  for (std::size_t t = 0; t < masks.frames(); ++t)
    for (std::size_t n = 0; n < masks.filters(); ++n)
      if (enc(t, n) > 1e-4f) {
        EXPECT_NEAR(masks(0, t, n), 1.0f, 1e-3);
      }
}

TEST(OracleMasks, IdenticalSourcesShareEqually) {
  Rng rng(9);
  const auto basis = random_basis(16, 16, 8, 3);
  const auto s = noise(rng, 800);
  const std::vector<AudioBuffer> sources{s, s};
  const auto masks = oracle_masks(sources, basis);
  const auto enc = encode(s, basis);
  for (std::size_t t = 0; t < masks.frames(); ++t)
    for (std::size_t n = 0; n < masks.filters(); ++n)
      if (enc(t, n) > 1e-4f) {
        EXPECT_NEAR(masks(0, t, n), 0.5f, 1e-3);
        EXPECT_NEAR(masks(1, t, n), 0.5f, 1e-3);
      }
}

TEST(OracleMasks, LengthMismatch) {
  Rng rng(10);
  const std::vector<AudioBuffer> sources{noise(rng, 100), noise(rng, 101)};
  EXPECT_THROW(oracle_masks(sources, random_basis(4, 8, 4, 1)), InvalidArgument);
}

TEST(OracleMasks, TimeDisjointSourcesSeparate) {
  Rng rng(11);
  const std::size_t half = 4000;
  AudioBuffer s1{std::vector<float>(2 * half, 0.0f), 8000}, s2 = s1, mix = s1;
  for (std::size_t i = 0; i < half; ++i) {
    s1.samples[i] = static_cast<float>(0.4 * std::sin(0.05 * i) + 0.1 * rng.normal());
    s2.samples[half + i] = static_cast<float>(0.3 * std::sin(0.11 * i) + 0.1 * rng.normal());
  }
  for (std::size_t i = 0; i < mix.size(); ++i) mix.samples[i] = s1.samples[i] + s2.samples[i];

  const auto basis = testing::split_orthonormal_basis(16, rng);
  const std::vector<AudioBuffer> sources{s1, s2};
  const auto est = separate_with_masks(mix, basis, oracle_masks(sources, basis));
  ASSERT_EQ(est.size(), 2u);
  const std::span<const float> r1(s1.samples.data(), half), e1(est[0].samples.data(), half);
  const std::span<const float> r2(s2.samples.data() + half, half), e2(est[1].samples.data() + half, half);
  EXPECT_GE(sep::si_sdr(r1, e1), 30.0);
  EXPECT_GE(sep::si_sdr(r2, e2), 30.0);
}

TEST(MaskSet, StackRoundTrip) {
  const MaskSet m(2, 3, 4, std::vector<float>(24, 0.5f));
  const auto stack = m.to_stack(1000.0);
  EXPECT_EQ(stack.n_layers, 2u);
  EXPECT_EQ(MaskSet::from_stack(stack).values(), m.values());
}

}  // namespace
}  // namespace ssleval::tasnet
