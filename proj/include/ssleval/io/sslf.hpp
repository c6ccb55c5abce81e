// ssleval/io/sslf.hpp

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
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "ssleval/error.hpp"
#include "ssleval/features.hpp"
#include "ssleval/io/binary.hpp"

namespace ssleval::io {

// SSLF container, all fields little-endian:
//   "SSLF" | u32 version=1 | u32 n_layers | u32 n_frames | u32 dim |
//   f32 frame_rate | f32 payload[n_layers][n_frames][dim]
inline constexpr std::uint32_t kSslfVersion = 1;
inline constexpr std::size_t kSslfHeaderBytes = 24;

inline std::vector<std::uint8_t> encode_feature_stack(const FeatureStack& stack) {
  validate(stack);
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (stack.n_layers > kMax || stack.n_frames > kMax || stack.dim > kMax)
    throw InvalidArgument("feature stack too large for the SSLF container");
  std::vector<std::uint8_t> out;
  out.reserve(kSslfHeaderBytes + 4 * stack.data.size());
  detail::put_tag(out, "SSLF");
  detail::put_u32(out, kSslfVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(stack.n_layers));
  detail::put_u32(out, static_cast<std::uint32_t>(stack.n_frames));
  detail::put_u32(out, static_cast<std::uint32_t>(stack.dim));
  detail::put_f32(out, static_cast<float>(stack.frame_rate));
  for (float v : stack.data) detail::put_f32(out, v);
  return out;
}

inline FeatureStack decode_feature_stack(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSslfHeaderBytes || !detail::has_tag(bytes.data(), "SSLF"))
    throw FormatError("bad magic: not an SSLF feature stack");
  const std::uint8_t* h = bytes.data();
  const std::uint32_t version = detail::load_u32(h + 4);
  if (version != kSslfVersion)
    throw FormatError(fmt::format("unsupported SSLF version {}", version));

  FeatureStack s;
  s.n_layers = detail::load_u32(h + 8);
  s.n_frames = detail::load_u32(h + 12);
  s.dim = detail::load_u32(h + 16);
  s.frame_rate = detail::load_f32(h + 20);
  if (s.n_layers == 0 || s.n_frames == 0 || s.dim == 0)
    throw FormatError("SSLF declares a zero dimension");
  if (!std::isfinite(s.frame_rate) || s.frame_rate <= 0.0)
    throw FormatError("SSLF frame rate must be positive");

  // 32-bit fields cannot overflow a 64-bit product of three.
  const unsigned __int128 count = static_cast<unsigned __int128>(s.n_layers) *
                                  s.n_frames * s.dim;
  if (count * 4 != bytes.size() - kSslfHeaderBytes)
    throw FormatError(fmt::format("SSLF size mismatch: header declares {}x{}x{} floats, payload has {} bytes",
                                  s.n_layers, s.n_frames, s.dim,
                                  bytes.size() - kSslfHeaderBytes));
  s.data.resize(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    s.data[i] = detail::load_f32(h + kSslfHeaderBytes + 4 * i);
    if (!std::isfinite(s.data[i]))
      throw FormatError(fmt::format("SSLF payload value {} is not finite", i));
  }
  return s;
}

inline FeatureStack read_feature_stack(const std::filesystem::path& path) {
  return decode_feature_stack(detail::read_file(path));
}

inline void write_feature_stack(const FeatureStack& stack,
                                const std::filesystem::path& path) {
  detail::write_file(path, encode_feature_stack(stack));
}

}  // namespace ssleval::io
