// tests/unit/separation_metrics_test.cpp

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
#include "support/oracles.hpp"

namespace ssleval::sep {
namespace {

using testing::Rng;

std::vector<double> random_signal(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

AudioBuffer random_audio(Rng& rng, std::size_t n) {
  AudioBuffer a{std::vector<float>(n), 8000};
  for (float& x : a.samples) x = static_cast<float>(0.3 * rng.normal());
  return a;
}

AudioBuffer add(const AudioBuffer& a, const AudioBuffer& b, float gain = 1.0f) {
  AudioBuffer out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += gain * b.samples[i];
  return out;
}

double sdr_d(const std::vector<double>& r, const std::vector<double>& e) { return sdr<double>(r, e); }
double si_sdr_d(const std::vector<double>& r, const std::vector<double>& e) { return si_sdr<double>(r, e); }

TEST(Sdr, HandComputedCases) {
  EXPECT_EQ(sdr_d({1.0, 0.0}, {1.0, 0.0}), kInf);
  EXPECT_NEAR(sdr_d({1.0, 0.0}, {1.0, 0.1}), 20.0, 1e-9);
  Rng rng(1);
  const auto s = random_signal(rng, 64);
  std::vector<double> twice(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) twice[i] = 2.0 * s[i];
  EXPECT_EQ(sdr_d(s, twice), 0.0);
}

TEST(Sdr, Errors) {
  EXPECT_THROW(sdr_d({1.0, 0.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(sdr_d({0.0, 0.0}, {1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(sdr_d({}, {}), InvalidArgument);
}

TEST(SiSdr, HandComputedCases) {
  EXPECT_NEAR(si_sdr_d({1.0, 0.0}, {1.0, 1.0}), 0.0, 1e-12);
  EXPECT_EQ(si_sdr_d({1.0, 0.0}, {-3.0, 0.0}), kInf);
  EXPECT_EQ(si_sdr_d({1.0, 0.0}, {0.0, 1.0}), -kInf);
}

TEST(SiSdr, ScaleInvariance) {
  Rng rng(2);
  const auto s = random_signal(rng, 256);
  auto est = s;
  for (double& x : est) x += 0.3 * rng.normal();
  const double base = si_sdr_d(s, est);
  for (int i = 0; i < 20; ++i) {
    const double c = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.01, 100.0);
    auto scaled = est;
    for (double& x : scaled) x *= c;
    EXPECT_NEAR(si_sdr_d(s, scaled), base, 1e-9) << c;
  }
  for (double c : {0.125, 2.0, -4.0, 1024.0}) {
    auto scaled = est;
    for (double& x : scaled) x *= c;
    EXPECT_EQ(si_sdr_d(s, scaled), base) << c;
  }
  auto times37 = est;
  for (double& x : times37) x *= 3.7;
  EXPECT_NEAR(si_sdr_d(s, times37), base, 1e-9);
}

// The projection minimises |est - beta * ref|, so the SI-SDR residual never
// exceeds the plain SDR residual; with a projection coefficient >= 1 the
// numerator is also no smaller and SI-SDR >= SDR.
TEST(SiSdr, DominatesSdrWhenProjectionAtLeastOne) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_signal(rng, 32);
    auto est = s;
    const double gain = rng.uniform(1.0, 3.0);
    for (double& x : est) x = gain * x + rng.uniform(0.0, 2.0) * rng.normal();
    double dot = 0.0, energy = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      dot += est[i] * s[i];
      energy += s[i] * s[i];
    }
    if (dot / energy < 1.0) continue;
    EXPECT_LE(sdr_d(s, est), si_sdr_d(s, est) + 1e-9);
  }
}

TEST(SiSdr, CanFallBelowSdrForSmallProjections) {
  // Projection coefficient 0.1: SDR +0.46 dB, SI-SDR -9.54 dB.
  EXPECT_NEAR(sdr_d({1.0, 0.0}, {0.1, 0.3}), 10.0 * std::log10(1.0 / 0.9), 1e-12);
  EXPECT_NEAR(si_sdr_d({1.0, 0.0}, {0.1, 0.3}), 10.0 * std::log10(0.01 / 0.09), 1e-12);
}

TEST(SdrImprovement, Arithmetic) {
  // est SDR 10 dB and mixture SDR 2 dB against the same reference.
  AudioBuffer ref{{1.0f, 0.0f}, 8000};
  AudioBuffer est{{1.0f, static_cast<float>(std::sqrt(0.1))}, 8000};
  AudioBuffer mix{{1.0f, static_cast<float>(std::sqrt(std::pow(10.0, -0.2)))}, 8000};
  const std::vector<AudioBuffer> refs{ref}, ests{est};
  const auto r = sdr_improvement(refs, ests, mix);
  EXPECT_NEAR(r.per_source_sdr[0], 10.0, 1e-5);
  EXPECT_NEAR(r.mixture_sdr[0], 2.0, 1e-5);
  EXPECT_NEAR(r.per_source_sdri[0], 8.0, 1e-5);
}

TEST(SdrImprovement, PerfectAndMixtureEstimates) {
  Rng rng(4);
  const auto s1 = random_audio(rng, 500), s2 = random_audio(rng, 500);
  const auto mix = add(s1, s2);
  const std::vector<AudioBuffer> refs{s1, s2};
  const auto perfect = sdr_improvement(refs, refs, mix);
  EXPECT_EQ(perfect.per_source_sdri, (std::vector<double>{kInf, kInf}));
  EXPECT_EQ(perfect.mean_sdri, kInf);

  const std::vector<AudioBuffer> mixes{mix, mix};
  for (Metric m : {Metric::kSdr, Metric::kSiSdr}) {
    const auto r = sdr_improvement(refs, mixes, mix, m);
    EXPECT_EQ(r.per_source_sdri, (std::vector<double>{0.0, 0.0}));
  }
  // A lone source that equals the mixture: inf - inf counts as no change.
  const std::vector<AudioBuffer> lone{s1};
  EXPECT_EQ(sdr_improvement(lone, lone, s1).per_source_sdri[0], 0.0);
}

TEST(SdrImprovement, ExplicitPermutationValidated) {
  Rng rng(5);
  const std::vector<AudioBuffer> refs{random_audio(rng, 50), random_audio(rng, 50)};
  EXPECT_THROW(sdr_improvement(refs, refs, refs[0], Metric::kSdr, std::vector<std::size_t>{0, 0}),
               InvalidArgument);
  const auto r = sdr_improvement(refs, refs, add(refs[0], refs[1]), Metric::kSdr, std::vector<std::size_t>{1, 0});
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_LT(r.mean_sdr, 10.0);
}

TEST(Pit, SingleSourceAndSwap) {
  Rng rng(6);
  const auto s1 = random_audio(rng, 200), s2 = random_audio(rng, 200);
  const std::vector<AudioBuffer> one{s1};
  EXPECT_EQ(pit(one, one).permutation, (std::vector<std::size_t>{0}));
  const std::vector<AudioBuffer> refs{s1, s2}, swapped{s2, s1};
  const auto r = pit(refs, swapped);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(r.mean, kInf);
  EXPECT_THROW(pit(refs, one), InvalidArgument);
}

TEST(Pit, TiesPickLexicographicallySmallest) {
  Matrix<double> table(3, 3, 1.0);
  EXPECT_EQ(pit_exhaustive(table).permutation, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(pit_hungarian(table).permutation, (std::vector<std::size_t>{0, 1, 2}));
  Matrix<double> two_inf(2, 2, 0.0);
  two_inf(0, 1) = two_inf(1, 0) = kInf;
  two_inf(0, 0) = kInf;
  EXPECT_EQ(pit_exhaustive(two_inf).permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(pit_hungarian(two_inf).permutation, (std::vector<std::size_t>{1, 0}));
}

TEST(Pit, HungarianEqualsExhaustiveUpToSix) {
  Rng rng(7);
  for (std::size_t s = 1; s <= 6; ++s)
    for (int trial = 0; trial < 40; ++trial) {
      Matrix<double> table(s, s);
      for (double& v : table.data()) v = rng.uniform() < 0.05 ? kInf : rng.uniform(-10.0, 30.0);
      const auto a = pit_exhaustive(table), b = pit_hungarian(table);
      EXPECT_EQ(a.permutation, b.permutation);
      EXPECT_EQ(a.mean, b.mean);
    }
}

TEST(Pit, MeanMatchesEnumerationOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<AudioBuffer> refs, ests;
    for (int i = 0; i < 4; ++i) refs.push_back(random_audio(rng, 120));
    for (int i = 0; i < 4; ++i) ests.push_back(add(refs[(i + 1) % 4], random_audio(rng, 120), 0.5f));
    std::vector<std::vector<double>> table(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) table[i][j] = sdr(refs[i], ests[j]);
    EXPECT_NEAR(pit(refs, ests).mean, testing::exhaustive_best_mean(table), 1e-9);
  }
}

TEST(Pit, InvariantToJointReordering) {
  Rng rng(9);
  std::vector<AudioBuffer> refs, ests;
  for (int i = 0; i < 5; ++i) refs.push_back(random_audio(rng, 100));
  for (int i = 0; i < 5; ++i) ests.push_back(add(refs[(i + 2) % 5], random_audio(rng, 100), 0.7f));
  const double base = pit(refs, ests, Metric::kSiSdr).mean;
  const std::vector<std::size_t> order{3, 1, 4, 0, 2};
  std::vector<AudioBuffer> r2, e2;
  for (std::size_t i : order) {
    r2.push_back(refs[i]);
    e2.push_back(ests[i]);
  }
  EXPECT_NEAR(pit(r2, e2, Metric::kSiSdr).mean, base, 1e-9);
}

TEST(Pit, LargeInstancesUseAssignment) {
  Rng rng(10);
  std::vector<AudioBuffer> refs;
  for (int i = 0; i < 8; ++i) refs.push_back(random_audio(rng, 64));
  std::vector<AudioBuffer> ests(refs.rbegin(), refs.rend());
  const auto r = pit(refs, ests);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{7, 6, 5, 4, 3, 2, 1, 0}));
  EXPECT_EQ(r.mean, kInf);
}

}  // namespace
}  // namespace ssleval::sep
