// ssleval/der.hpp

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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ssleval/annotation.hpp"
#include "ssleval/assignment.hpp"
#include "ssleval/error.hpp"
#include "ssleval/matrix.hpp"

namespace ssleval::der {

/// Raised when the reference has no speech but the hypothesis does.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

struct DerReport {
  double false_alarm = 0.0;
  double missed = 0.0;
  double confusion = 0.0;
  double total_speech = 0.0;
  double fa_pct = 0.0;
  double md_pct = 0.0;
  double sc_pct = 0.0;
  double der_pct = 0.0;
  std::map<std::string, std::string> mapping;  // reference -> hypothesis
};

/// Percentages from error times. der_pct is the sum of the three component
/// percentages, so the decomposition holds by construction.
inline DerReport make_report(double false_alarm, double missed, double confusion,
                             double total_speech) {
  DerReport r;
  r.false_alarm = false_alarm;
  r.missed = missed;
  r.confusion = confusion;
  r.total_speech = total_speech;
  if (total_speech <= 0.0) {
    if (false_alarm + missed + confusion > 0.0)
      throw UndefinedRateError("reference contains no speech; error rate is undefined");
    return r;
  }
  r.fa_pct = 100.0 * false_alarm / total_speech;
  r.md_pct = 100.0 * missed / total_speech;
  r.sc_pct = 100.0 * confusion / total_speech;
  r.der_pct = r.fa_pct + r.md_pct + r.sc_pct;
  return r;
}

/// Time-weighted combination over files.
inline DerReport aggregate(std::span<const DerReport> reports) {
  double fa = 0.0, md = 0.0, sc = 0.0, total = 0.0;
  for (const auto& r : reports) {
    fa += r.false_alarm;
    md += r.missed;
    sc += r.confusion;
    total += r.total_speech;
  }
  return make_report(fa, md, sc, total);
}

/// Stretch of time where the active speaker sets do not change.
struct ElementaryInterval {
  double duration = 0.0;
  std::vector<std::size_t> ref;  // indices into sorted reference labels
  std::vector<std::size_t> hyp;
};

struct Timeline {
  std::vector<std::string> ref_labels;
  std::vector<std::string> hyp_labels;
  std::vector<ElementaryInterval> intervals;
};

/// Sweeps the union of all boundaries and keeps the scored elementary
/// intervals: inside eval_regions (when given) and outside +-collar around
/// every reference boundary.
inline Timeline build_timeline(const Annotation& ref, const Annotation& hyp, double collar,
                               const std::optional<std::vector<Interval>>& eval_regions) {
  validate(ref);
  validate(hyp);
  if (!(collar >= 0.0)) throw InvalidArgument("collar must be non-negative");

  Timeline tl;
  const auto ref_set = ref.speakers();
  const auto hyp_set = hyp.speakers();
  tl.ref_labels.assign(ref_set.begin(), ref_set.end());
  tl.hyp_labels.assign(hyp_set.begin(), hyp_set.end());
  auto index_in = [](const std::vector<std::string>& labels, const std::string& s) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), s) - labels.begin());
  };

  enum class Kind { kRef, kHyp, kRegion, kCollar };
  struct Event {
    double time;
    Kind kind;
    std::size_t id;
    int delta;
  };
  std::vector<Event> events;
  auto add = [&](double b, double e, Kind k, std::size_t id) {
    if (e <= b) return;
    events.push_back({b, k, id, +1});
    events.push_back({e, k, id, -1});
  };
  for (const auto& s : ref.segments) {
    add(s.onset, s.offset(), Kind::kRef, index_in(tl.ref_labels, s.speaker));
    if (collar > 0.0) {
      add(s.onset - collar, s.onset + collar, Kind::kCollar, 0);
      add(s.offset() - collar, s.offset() + collar, Kind::kCollar, 0);
    }
  }
  for (const auto& s : hyp.segments) add(s.onset, s.offset(), Kind::kHyp, index_in(tl.hyp_labels, s.speaker));
  if (eval_regions)
    for (const auto& r : *eval_regions) add(r.begin, r.end, Kind::kRegion, 0);

  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.time < b.time; });

  std::vector<int> ref_count(tl.ref_labels.size(), 0), hyp_count(tl.hyp_labels.size(), 0);
  int region_count = 0, collar_count = 0;
  for (std::size_t i = 0; i < events.size();) {
    const double t = events[i].time;
    for (; i < events.size() && events[i].time == t; ++i) {
      const Event& e = events[i];
      switch (e.kind) {
        case Kind::kRef: ref_count[e.id] += e.delta; break;
        case Kind::kHyp: hyp_count[e.id] += e.delta; break;
        case Kind::kRegion: region_count += e.delta; break;
        case Kind::kCollar: collar_count += e.delta; break;
      }
    }
    if (i == events.size()) break;
    const double d = events[i].time - t;
    const bool scored = (!eval_regions || region_count > 0) && collar_count == 0;
    if (!scored || d <= 0.0) continue;
    ElementaryInterval iv;
    iv.duration = d;
    for (std::size_t r = 0; r < ref_count.size(); ++r)
      if (ref_count[r] > 0) iv.ref.push_back(r);
    for (std::size_t h = 0; h < hyp_count.size(); ++h)
      if (hyp_count[h] > 0) iv.hyp.push_back(h);
    if (!iv.ref.empty() || !iv.hyp.empty()) tl.intervals.push_back(std::move(iv));
  }
  return tl;
}

struct SpeakerMapping {
  std::map<std::string, std::string> ref_to_hyp;
  double matched = 0.0;  // total co-active time of mapped pairs
};

namespace detail {

/// Returns hyp index per ref index (-1 when unmapped) and the matched time.
inline std::pair<std::vector<int>, double> map_timeline(const Timeline& tl) {
  Matrix<double> overlap(tl.ref_labels.size(), tl.hyp_labels.size(), 0.0);
  for (const auto& iv : tl.intervals)
    for (std::size_t r : iv.ref)
      for (std::size_t h : iv.hyp) overlap(r, h) += iv.duration;
  const Assignment a = solve_max_assignment(overlap);
  std::vector<int> mapping = a.row_to_col;
  double matched = 0.0;
  for (std::size_t r = 0; r < mapping.size(); ++r) {
    if (mapping[r] < 0) continue;
    const double v = overlap(r, static_cast<std::size_t>(mapping[r]));
    // Zero-overlap pairs carry no information; leave them unmapped.
    if (v > 0.0) matched += v;
    else mapping[r] = -1;
  }
  return {mapping, matched};
}

inline std::map<std::string, std::string> named(const Timeline& tl, const std::vector<int>& m) {
  std::map<std::string, std::string> out;
  for (std::size_t r = 0; r < m.size(); ++r)
    if (m[r] >= 0) out[tl.ref_labels[r]] = tl.hyp_labels[static_cast<std::size_t>(m[r])];
  return out;
}

}  // namespace detail

/// One-to-one speaker map maximizing co-active time (Hungarian).
inline SpeakerMapping optimal_mapping(const Annotation& ref, const Annotation& hyp,
                                      const std::optional<std::vector<Interval>>& eval_regions = std::nullopt) {
  const Timeline tl = build_timeline(ref, hyp, 0.0, eval_regions);
  const auto [m, matched] = detail::map_timeline(tl);
  return {detail::named(tl, m), matched};
}

/// False alarm, missed detection and speaker confusion under the optimal
/// one-to-one mapping, with overlapping speech scored.
inline DerReport compute_der(const Annotation& ref, const Annotation& hyp, double collar = 0.0,
                             const std::optional<std::vector<Interval>>& eval_regions = std::nullopt) {
  const Timeline tl = build_timeline(ref, hyp, collar, eval_regions);
  const auto [mapping, matched] = detail::map_timeline(tl);

  double fa = 0.0, md = 0.0, sc = 0.0, total = 0.0;
  for (const auto& iv : tl.intervals) {
    const auto n_ref = static_cast<double>(iv.ref.size());
    const auto n_hyp = static_cast<double>(iv.hyp.size());
    double n_correct = 0.0;
    for (std::size_t r : iv.ref) {
      const int h = mapping[r];
      if (h >= 0 && std::binary_search(iv.hyp.begin(), iv.hyp.end(), static_cast<std::size_t>(h)))
        n_correct += 1.0;
    }
    total += iv.duration * n_ref;
    md += iv.duration * std::max(0.0, n_ref - n_hyp);
    fa += iv.duration * std::max(0.0, n_hyp - n_ref);
    sc += iv.duration * (std::min(n_ref, n_hyp) - n_correct);
  }
  DerReport report = make_report(fa, md, sc, total);
  report.mapping = detail::named(tl, mapping);
  return report;
}

}  // namespace ssleval::der
