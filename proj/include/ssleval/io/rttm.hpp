// ssleval/io/rttm.hpp

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

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "ssleval/annotation.hpp"
#include "ssleval/error.hpp"

namespace ssleval::io {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool parse_double(std::string_view text, double& value) {
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace detail

/// Parses RTTM text into one Annotation per recording. Only SPEAKER rows
/// are read; other row types and ";;" comments are skipped.
inline std::map<std::string, Annotation> parse_rttm(std::string_view text) {
  std::map<std::string, Annotation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const auto fields = detail::split_ws(line);
    if (fields.empty() || fields[0].starts_with(";;")) continue;
    auto fail = [&](const std::string& why) {
      throw FormatError(fmt::format("rttm line {}: {}", line_no, why));
    };
    if (fields[0] != "SPEAKER") {
      if (fields.size() < 9) fail("expected at least 9 fields");
      continue;
    }
    if (fields.size() < 9)
      fail(fmt::format("expected at least 9 fields, got {}", fields.size()));

    Segment seg;
    if (!detail::parse_double(fields[3], seg.onset))
      fail("onset is not a number: '" + std::string(fields[3]) + "'");
    if (!detail::parse_double(fields[4], seg.duration))
      fail("duration is not a number: '" + std::string(fields[4]) + "'");
    if (seg.onset < 0.0) fail("negative onset");
    if (seg.duration <= 0.0) fail("duration must be positive");
    seg.speaker = std::string(fields[7]);

    auto& ann = out[std::string(fields[1])];
    ann.uri = std::string(fields[1]);
    ann.segments.push_back(std::move(seg));
  }
  return out;
}

/// One SPEAKER line per segment, onset-then-label order, millisecond times.
inline std::string emit_rttm(const Annotation& annotation) {
  Annotation sorted = annotation;
  sorted.sort();
  std::string out;
  for (const auto& s : sorted.segments)
    out += fmt::format("SPEAKER {} 1 {:.3f} {:.3f} <NA> <NA> {} <NA> <NA>\n",
                       sorted.uri, s.onset, s.duration, s.speaker);
  return out;
}

inline std::string emit_rttm(const std::map<std::string, Annotation>& annotations) {
  std::string out;
  for (const auto& [uri, ann] : annotations) out += emit_rttm(ann);
  return out;
}

inline std::map<std::string, Annotation> read_rttm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rttm(buf.str());
}

/// Evaluation regions, one "uri channel onset offset" row per line.
inline std::map<std::string, std::vector<Interval>> parse_uem(std::string_view text) {
  std::map<std::string, std::vector<Interval>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto fields = detail::split_ws(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (fields.empty() || fields[0].starts_with(";;")) continue;
    Interval iv;
    if (fields.size() != 4 || !detail::parse_double(fields[2], iv.begin) ||
        !detail::parse_double(fields[3], iv.end) || iv.end < iv.begin || iv.begin < 0.0)
      throw FormatError(fmt::format("uem line {}: expected 'uri channel onset offset'", line_no));
    out[std::string(fields[0])].push_back(iv);
  }
  return out;
}

}  // namespace ssleval::io
