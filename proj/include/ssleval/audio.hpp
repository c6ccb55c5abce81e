// ssleval/audio.hpp

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
#include <span>
#include <vector>

#include "ssleval/error.hpp"

namespace ssleval {

/// Mono waveform. Samples are nominally in [-1, 1].
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = 16000;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  std::span<const float> view() const noexcept { return samples; }
};

inline void validate(const AudioBuffer& audio) {
  if (audio.sample_rate <= 0)
    throw InvalidArgument("sample rate must be positive");
  for (float s : audio.samples)
    if (!std::isfinite(s)) throw InvalidArgument("audio contains non-finite samples");
}

}  // namespace ssleval
