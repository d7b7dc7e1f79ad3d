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
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "morphgen/error.hpp"
#include "morphgen/mesh.hpp"
#include "morphgen/stl_io.hpp"
#include "morphgen/vec.hpp"

namespace morphgen {

/**
 * Structured Cartesian grid over a bounding box. Voxel (i,j,k) has its
 * center at origin + ((i,j,k) + 0.5) * spacing; storage order is x-fastest.
 */
struct GridSpec {
  std::array<std::uint32_t, 3> dims{};
  Vec3d origin{};
  Vec3d spacing{};

  std::size_t voxel_count() const {
    return std::size_t(dims[0]) * dims[1] * dims[2];
  }
  std::size_t index(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
    return std::size_t(i) + std::size_t(dims[0]) * (std::size_t(j) + std::size_t(dims[1]) * k);
  }
  Vec3d voxel_center(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
    return {origin.x + (i + 0.5) * spacing.x, origin.y + (j + 0.5) * spacing.y,
            origin.z + (k + 0.5) * spacing.z};
  }
  Vec3d max_corner() const {
    return {origin.x + dims[0] * spacing.x, origin.y + dims[1] * spacing.y,
            origin.z + dims[2] * spacing.z};
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.dims == b.dims && a.origin == b.origin && a.spacing == b.spacing;
  }
};

/// Grid spec covering `box` grown by `padding` on every side.
inline GridSpec make_grid(const Aabb& box, std::array<std::uint32_t, 3> resolution,
                          double padding) {
  if (padding < 0.0) throw Error(ErrorKind::validation, "make_grid: padding must be >= 0");
  GridSpec spec;
  spec.dims = resolution;
  const Vec3d extent = box.extent();
  for (int a = 0; a < 3; ++a) {
    if (resolution[std::size_t(a)] < 2) {
      throw Error(ErrorKind::validation, "make_grid: resolution must be >= 2 per axis");
    }
    const double padded = extent[a] + 2.0 * padding;
    if (padded <= 0.0) {
      throw Error(ErrorKind::validation,
                  "make_grid: box is degenerate on axis " + std::to_string(a) +
                      " and padding is zero");
    }
    spec.origin[a] = box.min[a] - padding;
    spec.spacing[a] = padded / resolution[std::size_t(a)];
  }
  return spec;
}

/// Grid spec with one shared voxel pitch on all axes: the padded box is
/// grown symmetrically on the tighter axes until spacing is isotropic.
/// Distance transforms require isotropic spacing, so this is the variant
/// dataset pipelines use for their shared basis grid.
inline GridSpec make_isotropic_grid(const Aabb& box, std::array<std::uint32_t, 3> resolution,
                                    double padding) {
  GridSpec spec = make_grid(box, resolution, padding);
  const double pitch = std::max({spec.spacing.x, spec.spacing.y, spec.spacing.z});
  const Vec3d center = box.center();
  for (int a = 0; a < 3; ++a) {
    spec.spacing[a] = pitch;
    spec.origin[a] = center[a] - 0.5 * pitch * resolution[std::size_t(a)];
  }
  return spec;
}

/// Dense bit grid, x-fastest, bit value in {0,1} per voxel.
struct BinaryGrid {
  GridSpec spec;
  std::vector<std::uint64_t> words;

  explicit BinaryGrid() = default;
  explicit BinaryGrid(const GridSpec& s) : spec(s), words((s.voxel_count() + 63) / 64, 0) {}

  bool get(std::size_t linear) const {
    return (words[linear >> 6] >> (linear & 63)) & 1u;
  }
  void set(std::size_t linear, bool value = true) {
    if (value) {
      words[linear >> 6] |= std::uint64_t(1) << (linear & 63);
    } else {
      words[linear >> 6] &= ~(std::uint64_t(1) << (linear & 63));
    }
  }
  bool get(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
    return get(spec.index(i, j, k));
  }
  void set(std::uint32_t i, std::uint32_t j, std::uint32_t k, bool value = true) {
    set(spec.index(i, j, k), value);
  }

  std::size_t count() const {
    std::size_t total = 0;
    for (std::uint64_t w : words) total += std::size_t(__builtin_popcountll(w));
    return total;
  }

  void or_with(const BinaryGrid& other) {
    for (std::size_t w = 0; w < words.size(); ++w) words[w] |= other.words[w];
  }

  friend bool operator==(const BinaryGrid& a, const BinaryGrid& b) {
    return a.spec == b.spec && a.words == b.words;
  }
};

/// Dense scalar field on a grid; values are stored in single precision so
/// the on-disk format round-trips bit-exactly.
struct ScalarField {
  GridSpec spec;
  std::vector<float> values;

  explicit ScalarField() = default;
  explicit ScalarField(const GridSpec& s, float fill = 0.0f)
      : spec(s), values(s.voxel_count(), fill) {}

  float at(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
    return values[spec.index(i, j, k)];
  }
  float& at(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    return values[spec.index(i, j, k)];
  }

  friend bool operator==(const ScalarField& a, const ScalarField& b) {
    if (!(a.spec == b.spec) || a.values.size() != b.values.size()) return false;
    // Bitwise comparison so that NaN payloads and signed zeros count.
    return std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(float)) == 0;
  }
};

namespace detail {

inline void append_u64le(std::vector<std::uint8_t>& out, std::uint64_t u) {
  for (int b = 0; b < 8; ++b) out.push_back(std::uint8_t((u >> (8 * b)) & 0xFF));
}

inline void append_f64le(std::vector<std::uint8_t>& out, double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof(u));
  append_u64le(out, u);
}

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  std::uint32_t u32() {
    need(4);
    const std::uint32_t v = read_u32le(bytes_.data() + pos_);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b) u |= std::uint64_t(bytes_[pos_ + std::size_t(b)]) << (8 * b);
    pos_ += 8;
    double d;
    std::memcpy(&d, &u, sizeof(d));
    return d;
  }
  float f32() {
    need(4);
    const float v = read_f32le(bytes_.data() + pos_);
    pos_ += 4;
    return v;
  }
  std::span<const std::uint8_t> raw(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw Error(ErrorKind::format,
                  name_ + ": truncated at byte " + std::to_string(pos_));
    }
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

inline void append_spec(std::vector<std::uint8_t>& out, const GridSpec& spec) {
  for (int a = 0; a < 3; ++a) append_u32le(out, spec.dims[std::size_t(a)]);
  for (int a = 0; a < 3; ++a) append_f64le(out, spec.origin[a]);
  for (int a = 0; a < 3; ++a) append_f64le(out, spec.spacing[a]);
}

inline GridSpec read_spec(ByteReader& r) {
  GridSpec spec;
  for (int a = 0; a < 3; ++a) spec.dims[std::size_t(a)] = r.u32();
  for (int a = 0; a < 3; ++a) spec.origin[a] = r.f64();
  for (int a = 0; a < 3; ++a) spec.spacing[a] = r.f64();
  return spec;
}

constexpr std::uint32_t kGridFormatVersion = 1;

}  // namespace detail

// BinaryGrid file format (MGVX): magic "MGVX", version u32, dims 3xu32,
// origin 3xf64, spacing 3xf64, then bit-packed voxels x-fastest. Bit n of
// the payload (byte n/8, bit n%8 LSB-first) is voxel n in linear order.

inline std::vector<std::uint8_t> encode_grid(const BinaryGrid& grid) {
  std::vector<std::uint8_t> out{'M', 'G', 'V', 'X'};
  detail::append_u32le(out, detail::kGridFormatVersion);
  detail::append_spec(out, grid.spec);
  const std::size_t n = grid.spec.voxel_count();
  for (std::size_t byte = 0; byte < (n + 7) / 8; ++byte) {
    std::uint8_t b = 0;
    for (std::size_t bit = 0; bit < 8; ++bit) {
      const std::size_t linear = byte * 8 + bit;
      if (linear < n && grid.get(linear)) b |= std::uint8_t(1u << bit);
    }
    out.push_back(b);
  }
  return out;
}

inline BinaryGrid decode_grid(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "MGVX");
  const auto magic = r.raw(4);
  if (std::memcmp(magic.data(), "MGVX", 4) != 0) {
    throw Error(ErrorKind::format, "MGVX: bad magic");
  }
  if (r.u32() != detail::kGridFormatVersion) {
    throw Error(ErrorKind::format, "MGVX: unsupported version");
  }
  BinaryGrid grid(detail::read_spec(r));
  const std::size_t n = grid.spec.voxel_count();
  const auto payload = r.raw((n + 7) / 8);
  for (std::size_t linear = 0; linear < n; ++linear) {
    if ((payload[linear / 8] >> (linear % 8)) & 1u) grid.set(linear);
  }
  return grid;
}

// ScalarField file format (MGSF): header as MGVX with magic "MGSF", then
// one little-endian f32 per voxel, x-fastest.

inline std::vector<std::uint8_t> encode_field(const ScalarField& field) {
  std::vector<std::uint8_t> out{'M', 'G', 'S', 'F'};
  detail::append_u32le(out, detail::kGridFormatVersion);
  detail::append_spec(out, field.spec);
  out.reserve(out.size() + field.values.size() * 4);
  for (float v : field.values) detail::append_f32le(out, v);
  return out;
}

inline ScalarField decode_field(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "MGSF");
  const auto magic = r.raw(4);
  if (std::memcmp(magic.data(), "MGSF", 4) != 0) {
    throw Error(ErrorKind::format, "MGSF: bad magic");
  }
  if (r.u32() != detail::kGridFormatVersion) {
    throw Error(ErrorKind::format, "MGSF: unsupported version");
  }
  ScalarField field(detail::read_spec(r));
  for (float& v : field.values) v = r.f32();
  return field;
}

inline void save_grid_file(const BinaryGrid& grid, const std::filesystem::path& path) {
  write_file_bytes(path, encode_grid(grid));
}
inline BinaryGrid load_grid_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_grid(bytes);
}
inline void save_field_file(const ScalarField& field, const std::filesystem::path& path) {
  write_file_bytes(path, encode_field(field));
}
inline ScalarField load_field_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_field(bytes);
}

}  // namespace morphgen
