// Copyright 2026 The Morphgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal PNG encoder: 8-bit grayscale and RGB, zlib stream with stored
// (uncompressed) deflate blocks. Byte output is a pure function of the
// pixels, which keeps dataset runs reproducible.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "morphgen/error.hpp"
#include "morphgen/stl_io.hpp"

namespace morphgen {

namespace detail::png {

inline std::uint32_t crc32(std::span<const std::uint8_t> bytes, std::uint32_t seed = 0xFFFFFFFFu) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t n = 0; n < 256; ++n) {
      std::uint32_t c = n;
      for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[n] = c;
    }
    return t;
  }();
  std::uint32_t c = seed;
  for (std::uint8_t b : bytes) c = table[(c ^ b) & 0xFFu] ^ (c >> 8);
  return c;
}

inline std::uint32_t adler32(std::span<const std::uint8_t> bytes) {
  std::uint32_t a = 1, b = 0;
  for (std::uint8_t byte : bytes) {
    a = (a + byte) % 65521u;
    b = (b + a) % 65521u;
  }
  return (b << 16) | a;
}

inline void append_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                         std::span<const std::uint8_t> payload) {
  append_u32be(out, std::uint32_t(payload.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const std::uint32_t crc =
      crc32({out.data() + crc_start, out.size() - crc_start}) ^ 0xFFFFFFFFu;
  append_u32be(out, crc);
}

inline std::vector<std::uint8_t> zlib_store(std::span<const std::uint8_t> raw) {
  std::vector<std::uint8_t> z{0x78, 0x01};
  std::size_t pos = 0;
  do {
    const std::size_t len = std::min<std::size_t>(raw.size() - pos, 65535);
    const bool final = pos + len == raw.size();
    z.push_back(final ? 1 : 0);  // BFINAL, BTYPE = 00 (stored)
    z.push_back(std::uint8_t(len & 0xFF));
    z.push_back(std::uint8_t(len >> 8));
    z.push_back(std::uint8_t(~len & 0xFF));
    z.push_back(std::uint8_t((~len >> 8) & 0xFF));
    z.insert(z.end(), raw.begin() + std::ptrdiff_t(pos), raw.begin() + std::ptrdiff_t(pos + len));
    pos += len;
  } while (pos < raw.size());
  append_u32be(z, adler32(raw));
  return z;
}

}  // namespace detail::png

/// Encodes 8-bit pixels as PNG; channels = 1 (grayscale) or 3 (RGB),
/// row-major, interleaved.
inline std::vector<std::uint8_t> encode_png(int width, int height, int channels,
                                            std::span<const std::uint8_t> pixels) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3) ||
      pixels.size() != std::size_t(width) * std::size_t(height) * std::size_t(channels)) {
    throw Error(ErrorKind::validation, "encode_png: bad dimensions or pixel count");
  }
  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

  std::vector<std::uint8_t> ihdr;
  detail::png::append_u32be(ihdr, std::uint32_t(width));
  detail::png::append_u32be(ihdr, std::uint32_t(height));
  ihdr.push_back(8);                              // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);          // color type: gray / truecolor
  ihdr.push_back(0);                              // compression
  ihdr.push_back(0);                              // filter
  ihdr.push_back(0);                              // interlace
  detail::png::append_chunk(out, "IHDR", ihdr);

  // Filter byte 0 (None) per scanline.
  std::vector<std::uint8_t> raw;
  const std::size_t stride = std::size_t(width) * std::size_t(channels);
  raw.reserve(std::size_t(height) * (stride + 1));
  for (int row = 0; row < height; ++row) {
    raw.push_back(0);
    const auto* begin = pixels.data() + std::size_t(row) * stride;
    raw.insert(raw.end(), begin, begin + stride);
  }
  detail::png::append_chunk(out, "IDAT", detail::png::zlib_store(raw));
  detail::png::append_chunk(out, "IEND", {});
  return out;
}

inline void write_png_file(const std::filesystem::path& path, int width, int height, int channels,
                           std::span<const std::uint8_t> pixels) {
  write_file_bytes(path, encode_png(width, height, channels, pixels));
}

}  // namespace morphgen
