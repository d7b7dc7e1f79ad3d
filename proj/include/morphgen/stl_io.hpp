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

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morphgen/error.hpp"
#include "morphgen/mesh.hpp"

namespace morphgen {

struct StlLoadOptions {
  bool weld_vertices = false;  // off by default: keep the raw soup
};

namespace detail {

inline float read_f32le(const std::uint8_t* p) {
  const std::uint32_t u = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                          (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
  float f;
  std::memcpy(&f, &u, sizeof(f));
  return f;
}

inline std::uint32_t read_u32le(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

inline void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t u) {
  out.push_back(std::uint8_t(u & 0xFF));
  out.push_back(std::uint8_t((u >> 8) & 0xFF));
  out.push_back(std::uint8_t((u >> 16) & 0xFF));
  out.push_back(std::uint8_t((u >> 24) & 0xFF));
}

inline void append_f32le(std::vector<std::uint8_t>& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, sizeof(u));
  append_u32le(out, u);
}

// Whitespace-delimited token scanner that remembers byte offsets for error
// reporting.
class AsciiScanner {
 public:
  explicit AsciiScanner(std::string_view text) : text_(text) {}

  bool next(std::string_view& token, std::size_t& offset) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return false;
    offset = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end]))) ++end;
    token = text_.substr(pos_, end - pos_);
    pos_ = end;
    return true;
  }

  void skip_rest_of_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] inline void format_error_at(std::size_t offset, const std::string& what) {
  throw Error(ErrorKind::format, "STL format error at byte " + std::to_string(offset) + ": " + what);
}

inline TriangleMesh parse_binary_stl(std::span<const std::uint8_t> bytes) {
  const std::uint32_t declared = read_u32le(bytes.data() + 80);
  const std::size_t payload = bytes.size() - 84;
  const std::size_t complete = payload / 50;
  if (complete < declared) {
    format_error_at(84 + complete * 50, "declared " + std::to_string(declared) +
                                            " triangles but payload holds " +
                                            std::to_string(complete));
  }
  TriangleMesh mesh;
  mesh.vertices.reserve(std::size_t(declared) * 3);
  mesh.triangles.reserve(declared);
  mesh.normals.reserve(declared);
  const std::uint8_t* p = bytes.data() + 84;
  for (std::uint32_t t = 0; t < declared; ++t, p += 50) {
    mesh.normals.push_back({read_f32le(p), read_f32le(p + 4), read_f32le(p + 8)});
    const std::uint32_t base = std::uint32_t(mesh.vertices.size());
    for (int v = 0; v < 3; ++v) {
      const std::uint8_t* q = p + 12 + 12 * v;
      const Vec3f vert{read_f32le(q), read_f32le(q + 4), read_f32le(q + 8)};
      if (!std::isfinite(vert.x) || !std::isfinite(vert.y) || !std::isfinite(vert.z)) {
        format_error_at(std::size_t(q - bytes.data()), "non-finite vertex coordinate");
      }
      mesh.vertices.push_back(vert);
    }
    mesh.triangles.push_back({base, base + 1, base + 2});
  }
  return mesh;
}

inline TriangleMesh parse_ascii_stl(std::span<const std::uint8_t> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  AsciiScanner scan(text);
  std::string_view tok;
  std::size_t off = 0;

  const auto expect = [&](std::string_view want) {
    if (!scan.next(tok, off)) format_error_at(text.size(), "unexpected end of file, expected '" + std::string(want) + "'");
    if (tok != want) format_error_at(off, "expected '" + std::string(want) + "', got '" + std::string(tok) + "'");
  };
  const auto number = [&]() -> float {
    if (!scan.next(tok, off)) format_error_at(text.size(), "unexpected end of file, expected a number");
    float value = 0.0f;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
      format_error_at(off, "unparseable number '" + std::string(tok) + "'");
    }
    return value;
  };

  expect("solid");
  scan.skip_rest_of_line();  // optional solid name

  TriangleMesh mesh;
  while (true) {
    if (!scan.next(tok, off)) format_error_at(text.size(), "unexpected end of file, expected 'facet' or 'endsolid'");
    if (tok == "endsolid") break;
    if (tok != "facet") format_error_at(off, "expected 'facet' or 'endsolid', got '" + std::string(tok) + "'");
    expect("normal");
    Vec3f n{number(), number(), number()};
    expect("outer");
    expect("loop");
    const std::uint32_t base = std::uint32_t(mesh.vertices.size());
    for (int v = 0; v < 3; ++v) {
      expect("vertex");
      mesh.vertices.push_back({number(), number(), number()});
    }
    expect("endloop");
    expect("endfacet");
    mesh.triangles.push_back({base, base + 1, base + 2});
    mesh.normals.push_back(n);
  }
  return mesh;
}

}  // namespace detail

/**
 * Parses an STL byte stream, auto-detecting the format: binary when the
 * 80-byte header plus declared triangle count matches the payload length,
 * ASCII otherwise. A stream that is neither is reported as a truncated or
 * over-long binary file with the offending byte offset.
 */
inline TriangleMesh load_stl(std::span<const std::uint8_t> bytes, const StlLoadOptions& options = {}) {
  TriangleMesh mesh;
  const bool binary_sized = bytes.size() >= 84 &&
                            84 + std::uint64_t(detail::read_u32le(bytes.data() + 80)) * 50 == bytes.size();
  if (binary_sized) {
    mesh = detail::parse_binary_stl(bytes);
  } else {
    std::string_view head(reinterpret_cast<const char*>(bytes.data()),
                          std::min<std::size_t>(bytes.size(), 512));
    const std::size_t first = head.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && head.substr(first).starts_with("solid")) {
      mesh = detail::parse_ascii_stl(bytes);
    } else if (bytes.size() >= 84) {
      mesh = detail::parse_binary_stl(bytes);  // raises the count-mismatch error
    } else {
      detail::format_error_at(bytes.size(), "stream too short for any STL format");
    }
  }
  if (options.weld_vertices) mesh = weld_vertices(mesh);
  return mesh;
}

/// Serializes to canonical binary STL: fixed header, little-endian count,
/// recomputed right-hand-rule unit normals, zero attribute bytes.
inline std::vector<std::uint8_t> save_stl(const TriangleMesh& mesh) {
  validate_mesh(mesh);
  std::vector<std::uint8_t> out;
  out.reserve(84 + mesh.triangles.size() * 50);
  const char header[] = "morphgen binary STL";
  out.resize(80, 0);
  std::memcpy(out.data(), header, sizeof(header) - 1);
  detail::append_u32le(out, std::uint32_t(mesh.triangles.size()));
  for (const auto& tri : mesh.triangles) {
    const Vec3d a = to_double(mesh.vertices[tri[0]]);
    const Vec3d b = to_double(mesh.vertices[tri[1]]);
    const Vec3d c = to_double(mesh.vertices[tri[2]]);
    Vec3d n = cross(b - a, c - a);
    const double len = norm(n);
    n = len > 0.0 ? n / len : Vec3d{0.0, 0.0, 0.0};
    detail::append_f32le(out, float(n.x));
    detail::append_f32le(out, float(n.y));
    detail::append_f32le(out, float(n.z));
    for (std::uint32_t idx : tri) {
      detail::append_f32le(out, mesh.vertices[idx].x);
      detail::append_f32le(out, mesh.vertices[idx].y);
      detail::append_f32le(out, mesh.vertices[idx].z);
    }
    out.push_back(0);
    out.push_back(0);
  }
  return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::io, "read failure on " + path.string());
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw Error(ErrorKind::io, "write failure on " + path.string());
}

inline TriangleMesh load_stl_file(const std::filesystem::path& path, const StlLoadOptions& options = {}) {
  const auto bytes = read_file_bytes(path);
  return load_stl(bytes, options);
}

inline void save_stl_file(const TriangleMesh& mesh, const std::filesystem::path& path) {
  write_file_bytes(path, save_stl(mesh));
}

}  // namespace morphgen
