// ssleval/diarize.hpp

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
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "ssleval/annotation.hpp"
#include "ssleval/error.hpp"
#include "ssleval/features.hpp"
#include "ssleval/matrix.hpp"
#include "ssleval/powerset.hpp"

namespace ssleval::diar {

// ---------------------------------------------------------------------------
// Chunking

struct ChunkWindow {
  double onset = 0.0;
  double duration = 0.0;
  friend bool operator==(const ChunkWindow&, const ChunkWindow&) = default;
};

/// Windows at onsets 0, hop, 2*hop, ... below total_duration, each clamped
/// to the end of the file. A file no longer than one window is a single
/// chunk.
inline std::vector<ChunkWindow> slide_chunks(double total_duration, double window = 10.0,
                                             double hop = 5.0) {
  if (!(hop > 0.0)) throw InvalidArgument("hop must be positive");
  if (!(window >= hop)) throw InvalidArgument("hop must not exceed the window");
  if (!(total_duration >= 0.0) || !std::isfinite(total_duration))
    throw InvalidArgument("total duration must be finite and non-negative");
  std::vector<ChunkWindow> out;
  if (total_duration == 0.0) return out;
  if (total_duration <= window) return {{0.0, total_duration}};
  constexpr double kEps = 1e-9;
  for (std::size_t k = 0;; ++k) {
    const double onset = static_cast<double>(k) * hop;
    if (onset >= total_duration - kEps) break;
    out.push_back({onset, std::min(window, total_duration - onset)});
  }
  return out;
}

/// Local segmentation output for one chunk: T x K_local binary activity.
struct ChunkSegmentation {
  double onset = 0.0;
  double frame_rate = kSslFrameRate;
  Matrix<std::uint8_t> activity;

  std::size_t n_frames() const noexcept { return activity.rows(); }
  std::size_t n_speakers() const noexcept { return activity.cols(); }
  double end() const noexcept { return onset + static_cast<double>(n_frames()) / frame_rate; }
};

inline void validate(const ChunkSegmentation& c) {
  if (!(c.frame_rate > 0.0) || !std::isfinite(c.frame_rate))
    throw InvalidArgument("chunk frame rate must be positive");
  if (!(c.onset >= 0.0) || !std::isfinite(c.onset))
    throw InvalidArgument("chunk onset must be finite and non-negative");
  for (std::size_t t = 0; t < c.n_frames(); ++t) {
    int active = 0;
    for (auto v : c.activity.row(t)) active += v != 0;
    if (active > PowersetSpace::kMaxSimultaneous)
      throw InvalidArgument(fmt::format("frame {} has {} active speakers, at most {} allowed",
                                        t, active, PowersetSpace::kMaxSimultaneous));
  }
}

// ---------------------------------------------------------------------------
// Single-speaker regions

struct LocalSegment {
  double onset = 0.0;  // absolute seconds
  double duration = 0.0;
  std::size_t local_speaker = 0;
  std::size_t first_frame = 0;
  std::size_t n_frames = 0;
};

/// Maximal runs of frames in which exactly one local speaker is active,
/// kept when at least min_duration long.
inline std::vector<LocalSegment> single_speaker_segments(const ChunkSegmentation& chunk,
                                                         double min_duration) {
  validate(chunk);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  auto sole_speaker = [&](std::size_t t) {
    std::size_t who = kNone;
    int count = 0;
    for (std::size_t k = 0; k < chunk.n_speakers(); ++k)
      if (chunk.activity(t, k)) {
        who = k;
        ++count;
      }
    return count == 1 ? who : kNone;
  };

  std::vector<LocalSegment> out;
  std::size_t t = 0;
  while (t < chunk.n_frames()) {
    const std::size_t who = sole_speaker(t);
    std::size_t end = t + 1;
    while (end < chunk.n_frames() && sole_speaker(end) == who) ++end;
    if (who != kNone) {
      LocalSegment seg;
      seg.local_speaker = who;
      seg.first_frame = t;
      seg.n_frames = end - t;
      seg.onset = chunk.onset + static_cast<double>(t) / chunk.frame_rate;
      seg.duration = static_cast<double>(seg.n_frames) / chunk.frame_rate;
      if (seg.duration >= min_duration - 1e-9) out.push_back(seg);
    }
    t = end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clustering

struct Embedding {
  std::vector<float> vector;
  std::size_t chunk = 0;
  std::size_t local_speaker = 0;
};

inline double norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

/// 1 - cos(u, v), clamped to [0, 2].
inline double cosine_distance(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw InvalidArgument("embedding dimensions differ");
  const double nu = norm(u), nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw InvalidArgument("zero-norm embedding");
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += static_cast<double>(u[i]) * v[i];
  return std::clamp(1.0 - dot / (nu * nv), 0.0, 2.0);
}

/// Average-linkage agglomerative clustering on cosine distance. The closest
/// pair of clusters (smallest index pair on ties) is merged while its
/// linkage is <= threshold. Labels are numbered by first appearance.
inline std::vector<int> ahc_cluster(std::span<const std::vector<float>> embeddings,
                                    double threshold) {
  const std::size_t n = embeddings.size();
  if (n == 0) throw InvalidArgument("clustering needs at least one embedding");
  for (const auto& e : embeddings) {
    if (e.size() != embeddings[0].size()) throw InvalidArgument("embedding dimensions differ");
    if (norm(e) == 0.0) throw InvalidArgument("zero-norm embedding");
  }

  // Cluster i is identified by its smallest member; linkage kept for live
  // clusters and updated with the Lance-Williams average-linkage rule.
  Matrix<double> link(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      link(i, j) = link(j, i) = cosine_distance(embeddings[i], embeddings[j]);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<char> alive(n, 1);

  for (std::size_t live = n; live > 1; --live) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j)
        if (alive[j] && link(i, j) < best) {
          best = link(i, j);
          bi = i;
          bj = j;
        }
    }
    if (best > threshold) break;
    const double wi = static_cast<double>(size[bi]), wj = static_cast<double>(size[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      link(bi, k) = link(k, bi) = (wi * link(bi, k) + wj * link(bj, k)) / (wi + wj);
    }
    size[bi] += size[bj];
    alive[bj] = 0;
    parent[bj] = bi;
  }

  std::vector<int> labels(n, -1);
  std::map<std::size_t, int> root_label;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = i;
    while (parent[root] != root) root = parent[root];
    auto [it, inserted] = root_label.try_emplace(root, static_cast<int>(root_label.size()));
    labels[i] = it->second;
  }
  return labels;
}

inline std::vector<int> ahc_cluster(std::span<const Embedding> embeddings, double threshold) {
  std::vector<std::vector<float>> vectors;
  vectors.reserve(embeddings.size());
  for (const auto& e : embeddings) vectors.push_back(e.vector);
  return ahc_cluster(std::span<const std::vector<float>>(vectors), threshold);
}

// ---------------------------------------------------------------------------
// Stitching

/// (chunk index, local speaker) -> global speaker.
using SlotKey = std::pair<std::size_t, std::size_t>;
using SlotAssignment = std::map<SlotKey, int>;

inline std::string global_speaker_label(int g) { return fmt::format("SPEAKER_{:02d}", g); }

/// Projects chunk activities onto a file-level frame grid per global
/// speaker, averages over the chunks covering each frame and keeps frames
/// whose mean is >= 0.5. Maximal active runs become segments.
inline Annotation stitch(std::span<const ChunkSegmentation> chunks, const SlotAssignment& assignment,
                         double frame_rate, double total_duration, std::string uri = {}) {
  if (!(frame_rate > 0.0)) throw InvalidArgument("frame rate must be positive");
  if (!(total_duration >= 0.0)) throw InvalidArgument("total duration must be non-negative");
  const auto n_total = static_cast<std::size_t>(std::llround(total_duration * frame_rate));

  int n_global = 0;
  for (const auto& [key, g] : assignment) {
    if (g < 0) throw InvalidArgument("global speaker labels must be non-negative");
    n_global = std::max(n_global, g + 1);
  }

  std::vector<std::uint32_t> coverage(n_total, 0);
  Matrix<std::uint32_t> votes(static_cast<std::size_t>(n_global), n_total, 0);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const auto& chunk = chunks[c];
    if (std::abs(chunk.frame_rate - frame_rate) > 1e-9 * frame_rate)
      throw InvalidArgument("chunk frame rate differs from the stitching grid");
    validate(chunk);
    std::vector<int> slot_global(chunk.n_speakers(), -1);
    for (std::size_t k = 0; k < chunk.n_speakers(); ++k) {
      const auto it = assignment.find({c, k});
      if (it != assignment.end()) slot_global[k] = it->second;
    }
    const auto start = static_cast<std::size_t>(std::llround(chunk.onset * frame_rate));
    for (std::size_t t = 0; t < chunk.n_frames() && start + t < n_total; ++t) {
      const std::size_t f = start + t;
      ++coverage[f];
      std::vector<char> seen(static_cast<std::size_t>(n_global), 0);
      for (std::size_t k = 0; k < chunk.n_speakers(); ++k) {
        if (!chunk.activity(t, k)) continue;
        if (slot_global[k] < 0)
          throw InvalidArgument(fmt::format("chunk {} local speaker {} is active but unassigned", c, k));
        auto& s = seen[static_cast<std::size_t>(slot_global[k])];
        if (!s) {
          s = 1;
          ++votes(static_cast<std::size_t>(slot_global[k]), f);
        }
      }
    }
  }

  Annotation out;
  out.uri = std::move(uri);
  for (std::size_t g = 0; g < static_cast<std::size_t>(n_global); ++g) {
    auto active = [&](std::size_t f) { return coverage[f] > 0 && 2 * votes(g, f) >= coverage[f]; };
    for (std::size_t f = 0; f < n_total;) {
      if (!active(f)) {
        ++f;
        continue;
      }
      std::size_t end = f + 1;
      while (end < n_total && active(end)) ++end;
      out.segments.push_back({static_cast<double>(f) / frame_rate,
                              static_cast<double>(end - f) / frame_rate,
                              global_speaker_label(static_cast<int>(g))});
      f = end;
    }
  }
  out.sort();
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

/// Supplies one embedding per (chunk, local speaker). `segments` holds the
/// speaker's kept single-speaker segments; when empty the provider may fall
/// back to all frames where the speaker is active.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::optional<std::vector<float>> embed(std::size_t chunk_index,
                                                  const ChunkSegmentation& chunk,
                                                  std::size_t local_speaker,
                                                  std::span<const LocalSegment> segments) const = 0;
};

/// Mean of the chunk's feature rows over the selected frames, L2-normalised.
class MeanPoolEmbeddings final : public EmbeddingProvider {
 public:
  explicit MeanPoolEmbeddings(std::vector<FeatureMatrix> chunk_features)
      : features_(std::move(chunk_features)) {}

  std::optional<std::vector<float>> embed(std::size_t chunk_index, const ChunkSegmentation& chunk,
                                          std::size_t local_speaker,
                                          std::span<const LocalSegment> segments) const override {
    if (chunk_index >= features_.size())
      throw InvalidArgument(fmt::format("no features for chunk {}", chunk_index));
    const FeatureMatrix& feats = features_[chunk_index];
    if (feats.n_frames() != chunk.n_frames())
      throw InvalidArgument(fmt::format("chunk {} has {} frames but {} feature rows",
                                        chunk_index, chunk.n_frames(), feats.n_frames()));
    std::vector<double> acc(feats.dim(), 0.0);
    std::size_t count = 0;
    auto add_row = [&](std::size_t t) {
      const auto row = feats.row(t);
      for (std::size_t d = 0; d < row.size(); ++d) acc[d] += row[d];
      ++count;
    };
    if (!segments.empty()) {
      for (const auto& s : segments)
        for (std::size_t t = s.first_frame; t < s.first_frame + s.n_frames; ++t) add_row(t);
    } else {
      for (std::size_t t = 0; t < chunk.n_frames(); ++t)
        if (chunk.activity(t, local_speaker)) add_row(t);
    }
    if (count == 0) return std::nullopt;
    double sq = 0.0;
    for (double& v : acc) {
      v /= static_cast<double>(count);
      sq += v * v;
    }
    const double n = std::sqrt(sq);
    std::vector<float> out(acc.size());
    for (std::size_t d = 0; d < acc.size(); ++d)
      out[d] = static_cast<float>(n > 0.0 ? acc[d] / n : 0.0);
    return out;
  }

 private:
  std::vector<FeatureMatrix> features_;
};

/// Precomputed embeddings keyed by slot. Text form: one
/// "chunk local v1 v2 ... vD" row per line.
class TableEmbeddings final : public EmbeddingProvider {
 public:
  explicit TableEmbeddings(std::map<SlotKey, std::vector<float>> table) : table_(std::move(table)) {}

  static TableEmbeddings parse(std::string_view text) {
    std::map<SlotKey, std::vector<float>> table;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream row(line);
      long long chunk = -1, local = -1;
      if (!(row >> chunk)) continue;
      if (!(row >> local) || chunk < 0 || local < 0)
        throw FormatError(fmt::format("embedding line {}: expected 'chunk local values...'", line_no));
      std::vector<float> values;
      double v;
      while (row >> v) {
        if (!std::isfinite(v)) throw FormatError(fmt::format("embedding line {}: non-finite value", line_no));
        values.push_back(static_cast<float>(v));
      }
      if (!row.eof()) throw FormatError(fmt::format("embedding line {}: bad number", line_no));
      if (values.empty()) throw FormatError(fmt::format("embedding line {}: no values", line_no));
      if (dim != 0 && values.size() != dim)
        throw FormatError(fmt::format("embedding line {}: dimension {} differs from {}", line_no,
                                      values.size(), dim));
      dim = values.size();
      table[{static_cast<std::size_t>(chunk), static_cast<std::size_t>(local)}] = std::move(values);
    }
    return TableEmbeddings(std::move(table));
  }

  std::optional<std::vector<float>> embed(std::size_t chunk_index, const ChunkSegmentation&,
                                          std::size_t local_speaker,
                                          std::span<const LocalSegment>) const override {
    const auto it = table_.find({chunk_index, local_speaker});
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<SlotKey, std::vector<float>> table_;
};

// ---------------------------------------------------------------------------
// Pipeline

struct DiarizationConfig {
  double window = 10.0;
  double hop = 5.0;
  double min_segment = 0.25;
  double ahc_threshold = 0.5;
};

/// Places per-chunk activity matrices on the sliding-window grid.
inline std::vector<ChunkSegmentation> place_chunks(std::vector<Matrix<std::uint8_t>> activities,
                                                   double frame_rate, double total_duration,
                                                   const DiarizationConfig& config) {
  const auto windows = slide_chunks(total_duration, config.window, config.hop);
  if (windows.size() != activities.size())
    throw InvalidArgument(fmt::format("{} chunks given but a {:.3f} s file with window {} s and hop {} s has {}",
                                      activities.size(), total_duration, config.window, config.hop,
                                      windows.size()));
  std::vector<ChunkSegmentation> out;
  for (std::size_t i = 0; i < windows.size(); ++i)
    out.push_back({windows[i].onset, frame_rate, std::move(activities[i])});
  return out;
}

/// Decodes powerset scores of one chunk into local speaker activity.
inline Matrix<std::uint8_t> activity_from_scores(const PowersetSpace& space, const Matrix<float>& scores) {
  return space.decode_frames(scores);
}

/// Single-speaker segments -> one embedding per local speaker -> AHC ->
/// stitching. Chunks are handled in onset order, so the result does not
/// depend on the order they are passed in.
inline Annotation diarize_file(std::span<const ChunkSegmentation> chunks,
                               const EmbeddingProvider& embeddings,
                               const DiarizationConfig& config = {},
                               std::optional<double> total_duration = std::nullopt,
                               std::string uri = {}) {
  if (chunks.empty()) return Annotation{std::move(uri), {}};
  const double frame_rate = chunks[0].frame_rate;
  double file_end = 0.0;
  for (const auto& c : chunks) {
    validate(c);
    if (std::abs(c.frame_rate - frame_rate) > 1e-9 * frame_rate)
      throw InvalidArgument("chunks use different frame rates");
    file_end = std::max(file_end, c.end());
  }

  std::vector<std::size_t> order(chunks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chunks[a].onset < chunks[b].onset;
  });

  std::vector<Embedding> primary;   // from single-speaker segments
  std::vector<Embedding> fallback;  // active slots without a usable segment
  for (std::size_t c : order) {
    const auto& chunk = chunks[c];
    const auto segments = single_speaker_segments(chunk, config.min_segment);
    for (std::size_t k = 0; k < chunk.n_speakers(); ++k) {
      bool active = false;
      for (std::size_t t = 0; t < chunk.n_frames() && !active; ++t) active = chunk.activity(t, k) != 0;
      if (!active) continue;
      std::vector<LocalSegment> own;
      for (const auto& s : segments)
        if (s.local_speaker == k) own.push_back(s);
      auto vec = embeddings.embed(c, chunk, k, own);
      if (!vec && !own.empty()) vec = embeddings.embed(c, chunk, k, {});
      if (!vec)
        throw InvalidArgument(fmt::format("no embedding available for chunk {} local speaker {}", c, k));
      (own.empty() ? fallback : primary).push_back({std::move(*vec), c, k});
    }
  }

  SlotAssignment assignment;
  if (primary.empty()) std::swap(primary, fallback);
  if (!primary.empty()) {
    const auto labels = ahc_cluster(std::span<const Embedding>(primary), config.ahc_threshold);
    for (std::size_t i = 0; i < primary.size(); ++i)
      assignment[{primary[i].chunk, primary[i].local_speaker}] = labels[i];
    // Slots heard only in overlap join the nearest cluster by average distance.
    const int n_clusters = *std::max_element(labels.begin(), labels.end()) + 1;
    for (const auto& e : fallback) {
      std::vector<double> total(static_cast<std::size_t>(n_clusters), 0.0);
      std::vector<std::size_t> count(static_cast<std::size_t>(n_clusters), 0);
      for (std::size_t i = 0; i < primary.size(); ++i) {
        total[static_cast<std::size_t>(labels[i])] += cosine_distance(e.vector, primary[i].vector);
        ++count[static_cast<std::size_t>(labels[i])];
      }
      int best = 0;
      for (int g = 1; g < n_clusters; ++g)
        if (total[static_cast<std::size_t>(g)] / count[static_cast<std::size_t>(g)] <
            total[static_cast<std::size_t>(best)] / count[static_cast<std::size_t>(best)])
          best = g;
      assignment[{e.chunk, e.local_speaker}] = best;
    }
  }

  return stitch(chunks, assignment, frame_rate, total_duration.value_or(file_end), std::move(uri));
}

/// Convenience overload pooling embeddings from per-chunk features.
inline Annotation diarize_file(std::span<const ChunkSegmentation> chunks,
                               std::vector<FeatureMatrix> chunk_features,
                               const DiarizationConfig& config = {},
                               std::optional<double> total_duration = std::nullopt,
                               std::string uri = {}) {
  return diarize_file(chunks, MeanPoolEmbeddings(std::move(chunk_features)), config, total_duration,
                      std::move(uri));
}

}  // namespace ssleval::diar
