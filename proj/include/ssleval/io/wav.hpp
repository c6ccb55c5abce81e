// ssleval/io/wav.hpp

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
#include <filesystem>
#include <string>
#include <vector>

#include "ssleval/audio.hpp"
#include "ssleval/error.hpp"
#include "ssleval/io/binary.hpp"

namespace ssleval::io {

/// WAV decoding failure. kind() separates the three rejection reasons.
class WavError : public FormatError {
 public:
  enum class Kind { kMalformedHeader, kMultichannel, kUnsupportedEncoding };

  WavError(Kind kind, const std::string& what) : FormatError(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Decodes RIFF/WAVE PCM16 mono from memory. Samples are raw / 32768.
inline AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  using detail::has_tag;
  using detail::load_u16;
  using detail::load_u32;
  using K = WavError::Kind;

  if (bytes.size() < 12 || !has_tag(bytes.data(), "RIFF") ||
      !has_tag(bytes.data() + 8, "WAVE"))
    throw WavError(K::kMalformedHeader, "not a RIFF/WAVE file");

  bool have_fmt = false;
  AudioBuffer out;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = load_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (has_tag(chunk, "fmt ")) {
      if (size < 16 || body + size > bytes.size())
        throw WavError(K::kMalformedHeader, "truncated fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      std::uint16_t format = load_u16(f);
      const std::uint16_t channels = load_u16(f + 2);
      const std::uint32_t rate = load_u32(f + 4);
      const std::uint16_t bits = load_u16(f + 14);
      // WAVE_FORMAT_EXTENSIBLE carries the real format code in its GUID.
      if (format == 0xFFFE && size >= 40) format = load_u16(f + 24);
      if (channels == 0 || rate == 0)
        throw WavError(K::kMalformedHeader, "fmt chunk declares zero channels or rate");
      if (channels != 1)
        throw WavError(K::kMultichannel,
                       "expected mono audio, got " + std::to_string(channels) + " channels");
      if (format != 1 || bits != 16)
        throw WavError(K::kUnsupportedEncoding,
                       "expected PCM 16-bit, got format " + std::to_string(format) +
                           " with " + std::to_string(bits) + " bits");
      out.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (has_tag(chunk, "data")) {
      if (!have_fmt) throw WavError(K::kMalformedHeader, "data chunk before fmt chunk");
      if (body + size > bytes.size() || size % 2 != 0)
        throw WavError(K::kMalformedHeader, "data chunk size inconsistent with file length");
      out.samples.resize(size / 2);
      for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(load_u16(bytes.data() + body + 2 * i));
        out.samples[i] = static_cast<float>(raw) / 32768.0f;
      }
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw WavError(K::kMalformedHeader, have_fmt ? "missing data chunk" : "missing fmt chunk");
}

inline AudioBuffer read_wav(const std::filesystem::path& path) {
  return decode_wav(detail::read_file(path));
}

/// PCM16 quantisation used by the writer: round(x * 32767), clamped.
inline std::int16_t quantize_pcm16(float sample) {
  const double q = std::round(static_cast<double>(sample) * 32767.0);
  return static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
}

inline std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio) {
  if (audio.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  detail::put_tag(out, "RIFF");
  detail::put_u32(out, 36 + data_bytes);
  detail::put_tag(out, "WAVE");
  detail::put_tag(out, "fmt ");
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);
  detail::put_u16(out, 1);
  detail::put_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  detail::put_u16(out, 2);
  detail::put_u16(out, 16);
  detail::put_tag(out, "data");
  detail::put_u32(out, data_bytes);
  for (float s : audio.samples) {
    if (!std::isfinite(s)) throw InvalidArgument("cannot write non-finite samples");
    detail::put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
  }
  return out;
}

inline void write_wav(const AudioBuffer& audio, const std::filesystem::path& path) {
  detail::write_file(path, encode_wav(audio));
}

}  // namespace ssleval::io
