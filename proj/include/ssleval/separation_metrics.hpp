// ssleval/separation_metrics.hpp

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
#include <concepts>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "ssleval/assignment.hpp"
#include "ssleval/audio.hpp"
#include "ssleval/error.hpp"
#include "ssleval/matrix.hpp"

namespace ssleval::sep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Metric { kSdr, kSiSdr };

namespace detail {

template <std::floating_point T>
void check_pair(std::span<const T> ref, std::span<const T> est) {
  if (ref.size() != est.size())
    throw InvalidArgument(fmt::format("length mismatch: reference {} vs estimate {}",
                                      ref.size(), est.size()));
  if (ref.empty()) throw InvalidArgument("signals are empty");
  if (std::all_of(ref.begin(), ref.end(), [](T v) { return v == T{0}; }))
    throw InvalidArgument("reference signal is all zeros");
}

inline double ratio_db(double signal, double noise) {
  if (noise == 0.0) return kInf;
  if (signal == 0.0) return -kInf;
  return 10.0 * std::log10(signal / noise);
}

}  // namespace detail

/// 10 log10(|s|^2 / |s - s_hat|^2); +inf for a perfect estimate.
template <std::floating_point T>
double sdr(std::span<const T> ref, std::span<const T> est) {
  detail::check_pair(ref, est);
  double signal = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double s = ref[i];
    const double e = s - static_cast<double>(est[i]);
    signal += s * s;
    residual += e * e;
  }
  return detail::ratio_db(signal, residual);
}

/// Scale-invariant SDR: the reference is rescaled by the least-squares
/// projection coefficient <s_hat, s> / |s|^2 before taking the ratio.
/// Orthogonal estimates give -inf.
template <std::floating_point T>
double si_sdr(std::span<const T> ref, std::span<const T> est) {
  detail::check_pair(ref, est);
  double dot = 0.0, ref_energy = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dot += static_cast<double>(est[i]) * ref[i];
    ref_energy += static_cast<double>(ref[i]) * ref[i];
  }
  if (dot == 0.0) return -kInf;
  const double scale = dot / ref_energy;
  double target = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double t = scale * ref[i];
    const double e = static_cast<double>(est[i]) - t;
    target += t * t;
    residual += e * e;
  }
  return detail::ratio_db(target, residual);
}

inline double sdr(const AudioBuffer& ref, const AudioBuffer& est) {
  return sdr<float>(ref.samples, est.samples);
}
inline double si_sdr(const AudioBuffer& ref, const AudioBuffer& est) {
  return si_sdr<float>(ref.samples, est.samples);
}

inline double score(Metric m, const AudioBuffer& ref, const AudioBuffer& est) {
  return m == Metric::kSdr ? sdr(ref, est) : si_sdr(ref, est);
}

/// Mean of dB values; any +inf makes the mean +inf.
inline double mean_db(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

struct PitResult {
  std::vector<std::size_t> permutation;  // reference i is paired with estimate permutation[i]
  double mean = 0.0;
};

/// Finite stand-in for +-inf when searching permutations.
inline constexpr double kInfSubstituteDb = 300.0;

inline double searchable(double db) {
  if (db == kInf) return kInfSubstituteDb;
  if (db == -kInf) return -kInfSubstituteDb;
  return db;
}

inline constexpr std::size_t kExhaustivePitLimit = 6;

namespace detail {

inline double permutation_mean(const Matrix<double>& pairwise, std::span<const std::size_t> perm) {
  std::vector<double> picked(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) picked[i] = pairwise(i, perm[i]);
  return mean_db(picked);
}

inline double permutation_key(const Matrix<double>& pairwise, std::span<const std::size_t> perm) {
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) total += searchable(pairwise(i, perm[i]));
  return total;
}

inline void check_square(const Matrix<double>& pairwise) {
  if (pairwise.rows() == 0 || pairwise.rows() != pairwise.cols())
    throw InvalidArgument("permutation search needs a non-empty square score matrix");
  for (double v : pairwise.data())
    if (std::isnan(v)) throw InvalidArgument("pairwise scores contain NaN");
}

}  // namespace detail

/// Best permutation by enumerating all S! candidates in lexicographic order;
/// the first maximizer wins ties.
inline PitResult pit_exhaustive(const Matrix<double>& pairwise) {
  detail::check_square(pairwise);
  std::vector<std::size_t> perm(pairwise.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best = perm;
  double best_key = detail::permutation_key(pairwise, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double key = detail::permutation_key(pairwise, perm);
    if (key > best_key) {
      best_key = key;
      best = perm;
    }
  }
  return {best, detail::permutation_mean(pairwise, best)};
}

/// Best permutation via maximum-weight assignment. Among optimal
/// assignments the lexicographically smallest permutation is returned.
inline PitResult pit_hungarian(const Matrix<double>& pairwise) {
  detail::check_square(pairwise);
  const std::size_t n = pairwise.rows();
  Matrix<double> gain(n, n);
  double scale = 1.0;
  for (std::size_t i = 0; i < n * n; ++i) {
    gain.data()[i] = searchable(pairwise.data()[i]);
    scale = std::max(scale, std::abs(gain.data()[i]));
  }
  const double optimum = solve_max_assignment(gain).value;
  const double tol = 1e-12 * scale * static_cast<double>(n);

  // Fix rows in order, each to the smallest column that keeps the optimum.
  std::vector<std::size_t> perm(n);
  std::vector<char> col_used(n, 0);
  double fixed = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (col_used[c]) continue;
      const std::size_t rest = n - r - 1;
      double best_rest = 0.0;
      if (rest > 0) {
        Matrix<double> sub(rest, rest);
        std::size_t si = 0;
        for (std::size_t rr = r + 1; rr < n; ++rr, ++si) {
          std::size_t sj = 0;
          for (std::size_t cc = 0; cc < n; ++cc)
            if (!col_used[cc] && cc != c) sub(si, sj++) = gain(rr, cc);
        }
        best_rest = solve_max_assignment(sub).value;
      }
      if (fixed + gain(r, c) + best_rest >= optimum - tol) {
        perm[r] = c;
        col_used[c] = 1;
        fixed += gain(r, c);
        break;
      }
    }
  }
  return {perm, detail::permutation_mean(pairwise, perm)};
}

inline Matrix<double> pairwise_scores(std::span<const AudioBuffer> refs,
                                      std::span<const AudioBuffer> ests, Metric metric) {
  if (refs.size() != ests.size())
    throw InvalidArgument(fmt::format("{} references but {} estimates", refs.size(), ests.size()));
  if (refs.empty()) throw InvalidArgument("need at least one source");
  Matrix<double> m(refs.size(), ests.size());
  for (std::size_t i = 0; i < refs.size(); ++i)
    for (std::size_t j = 0; j < ests.size(); ++j) m(i, j) = score(metric, refs[i], ests[j]);
  return m;
}

/// Permutation-invariant score: exhaustive up to six sources, assignment
/// beyond.
inline PitResult pit(std::span<const AudioBuffer> refs, std::span<const AudioBuffer> ests,
                     Metric metric = Metric::kSdr) {
  const Matrix<double> pairwise = pairwise_scores(refs, ests, metric);
  return refs.size() <= kExhaustivePitLimit ? pit_exhaustive(pairwise) : pit_hungarian(pairwise);
}

struct SepReport {
  Metric metric = Metric::kSdr;
  std::vector<double> per_source_sdr;   // estimate score, metric-dependent
  double mean_sdr = 0.0;
  std::vector<double> per_source_sdri;  // improvement over the mixture
  double mean_sdri = 0.0;
  std::vector<double> mixture_sdr;
  std::vector<std::size_t> permutation;
};

/// Improvement of each estimate over the unprocessed mixture, scored with
/// the same metric against the same reference. Without an explicit
/// permutation the PIT-optimal one is used.
inline SepReport sdr_improvement(std::span<const AudioBuffer> refs,
                                 std::span<const AudioBuffer> ests, const AudioBuffer& mixture,
                                 Metric metric = Metric::kSdr,
                                 std::optional<std::vector<std::size_t>> permutation = std::nullopt) {
  if (refs.size() != ests.size())
    throw InvalidArgument(fmt::format("{} references but {} estimates", refs.size(), ests.size()));
  if (refs.empty()) throw InvalidArgument("need at least one source");

  SepReport report;
  report.metric = metric;
  if (permutation) {
    std::vector<std::size_t> sorted = *permutation;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted.size() != refs.size() || sorted[i] != i)
        throw InvalidArgument("permutation is not a bijection over the sources");
    report.permutation = *permutation;
  } else {
    report.permutation = pit(refs, ests, metric).permutation;
  }

  for (std::size_t i = 0; i < refs.size(); ++i) {
    const double est = score(metric, refs[i], ests[report.permutation[i]]);
    const double mix = score(metric, refs[i], mixture);
    report.per_source_sdr.push_back(est);
    report.mixture_sdr.push_back(mix);
    // Identical scores (including inf == inf) improve by exactly zero.
    report.per_source_sdri.push_back(est == mix ? 0.0 : est - mix);
  }
  report.mean_sdr = mean_db(report.per_source_sdr);
  report.mean_sdri = mean_db(report.per_source_sdri);
  return report;
}

}  // namespace ssleval::sep
