// tests/support/fixtures.hpp

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
#include <vector>

#include "ssleval/tasnet.hpp"
#include "support/oracles.hpp"

namespace ssleval::testing {

/// Random L x L orthonormal matrix (Gram-Schmidt on Gaussian rows).
inline Matrix<double> random_orthonormal(std::size_t l, Rng& rng) {
  Matrix<double> q(l, l);
  for (std::size_t i = 0; i < l; ++i) {
    std::vector<double> v(l);
    for (double& x : v) x = rng.normal();
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < i; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < l; ++k) dot += v[k] * q(j, k);
        for (std::size_t k = 0; k < l; ++k) v[k] -= dot * q(j, k);
      }
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (std::size_t k = 0; k < l; ++k) q(i, k) = v[k] / n;
  }
  return q;
}

/// Non-overlapping orthonormal basis (stride = L, synthesis = analysis).
inline tasnet::EncoderBasis orthonormal_basis(std::size_t l, Rng& rng,
                                              tasnet::Nonlinearity g = tasnet::Nonlinearity::kLinear) {
  const auto q = random_orthonormal(l, rng);
  Matrix<float> a(l, l);
  for (std::size_t i = 0; i < l * l; ++i) a.data()[i] = static_cast<float>(q.data()[i]);
  return tasnet::EncoderBasis(a, a, l, g);
}

/// 2L filters [Q; -Q] with ReLU: relu(Qx) - relu(-Qx) = Qx, so the ReLU
/// encoder followed by the decoder is still perfect reconstruction.
inline tasnet::EncoderBasis split_orthonormal_basis(std::size_t l, Rng& rng) {
  const auto q = random_orthonormal(l, rng);
  Matrix<float> a(2 * l, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t k = 0; k < l; ++k) {
      a(i, k) = static_cast<float>(q(i, k));
      a(l + i, k) = static_cast<float>(-q(i, k));
    }
  return tasnet::EncoderBasis(a, a, l, tasnet::Nonlinearity::kRelu);
}

}  // namespace ssleval::testing
