// ssleval/annotation.hpp

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
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ssleval/error.hpp"

namespace ssleval {

/// Half-open time interval in seconds.
struct Interval {
  double begin = 0.0;
  double end = 0.0;

  double length() const noexcept { return end - begin; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Segment {
  double onset = 0.0;
  double duration = 0.0;
  std::string speaker;

  double offset() const noexcept { return onset + duration; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// "Who speaks when" for one recording.
struct Annotation {
  std::string uri;
  std::vector<Segment> segments;

  std::set<std::string> speakers() const {
    std::set<std::string> out;
    for (const auto& s : segments) out.insert(s.speaker);
    return out;
  }

  bool empty() const noexcept { return segments.empty(); }

  /// Sorts by onset, then speaker label, then duration.
  void sort() {
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) {
                return std::tie(a.onset, a.speaker, a.duration) <
                       std::tie(b.onset, b.speaker, b.duration);
              });
  }
};

inline void validate(const Segment& s) {
  if (!std::isfinite(s.onset) || s.onset < 0.0)
    throw InvalidArgument("segment onset must be finite and >= 0");
  if (!std::isfinite(s.duration) || s.duration <= 0.0)
    throw InvalidArgument("segment duration must be finite and > 0");
  if (s.speaker.empty()) throw InvalidArgument("segment speaker label is empty");
}

inline void validate(const Annotation& a) {
  for (const auto& s : a.segments) validate(s);
}

}  // namespace ssleval
