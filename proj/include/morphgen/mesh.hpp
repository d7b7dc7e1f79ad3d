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
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "morphgen/error.hpp"
#include "morphgen/vec.hpp"

namespace morphgen {

/**
 * Triangle soup with optional shared-vertex indexing.
 *
 * Vertices are stored in single precision to match the STL format; loading a
 * binary STL and saving it again is therefore bit-exact. `normals` is either
 * empty or holds one per-triangle normal in triangle order.
 */
struct TriangleMesh {
  std::vector<Vec3f> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<Vec3f> normals;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
};

/// Axis-aligned bounding box, min <= max componentwise.
struct Aabb {
  Vec3d min{}, max{};

  Vec3d extent() const { return max - min; }
  Vec3d center() const { return (min + max) * 0.5; }
};

inline Aabb merge(const Aabb& a, const Aabb& b) {
  return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y), std::min(a.min.z, b.min.z)},
          {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y), std::max(a.max.z, b.max.z)}};
}

/// Throws ErrorKind::validation unless all coordinates are finite and all
/// triangle indices are in range. Degenerate triangles are allowed.
inline void validate_mesh(const TriangleMesh& mesh) {
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3f v = mesh.vertices[i];
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
      throw Error(ErrorKind::validation,
                  "mesh vertex " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (std::uint32_t idx : mesh.triangles[t]) {
      if (idx >= mesh.vertices.size()) {
        throw Error(ErrorKind::validation, "triangle " + std::to_string(t) +
                                               " references vertex " + std::to_string(idx) +
                                               " beyond vertex count " +
                                               std::to_string(mesh.vertices.size()));
      }
    }
  }
}

/// Tight bounds over all vertices referenced by at least one triangle.
inline Aabb bounding_box(const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) {
    throw Error(ErrorKind::validation, "bounding_box: mesh has no triangles");
  }
  validate_mesh(mesh);
  constexpr double inf = std::numeric_limits<double>::infinity();
  Aabb box{{inf, inf, inf}, {-inf, -inf, -inf}};
  for (const auto& tri : mesh.triangles) {
    for (std::uint32_t idx : tri) {
      const Vec3d p = to_double(mesh.vertices[idx]);
      box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
      box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
    }
  }
  return box;
}

namespace detail {

struct VertexKey {
  std::uint64_t a, b;
  friend bool operator==(const VertexKey&, const VertexKey&) = default;
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& k) const {
    std::uint64_t h = k.a * 0x9E3779B97F4A7C15ULL;
    h ^= k.b + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

inline std::uint32_t float_bits(float f) {
  std::uint32_t u;
  static_assert(sizeof(u) == sizeof(f));
  std::memcpy(&u, &f, sizeof(u));
  return u;
}

// Exact weld key on float bit patterns.
inline VertexKey weld_key(Vec3f v, double /*tol*/ = 0.0) {
  return {(std::uint64_t(float_bits(v.x)) << 32) | float_bits(v.y),
          std::uint64_t(float_bits(v.z))};
}

inline VertexKey bucket_key(std::int64_t bx, std::int64_t by, std::int64_t bz) {
  return {(std::uint64_t(bx) << 21) ^ std::uint64_t(by), std::uint64_t(bz)};
}

/// Remaps every triangle index through a weld of coincident vertex
/// positions: exact bit equality for tol == 0, Euclidean distance <= tol
/// otherwise (probing neighbor buckets so pairs straddling a bucket
/// boundary still merge).
inline std::vector<std::uint32_t> weld_map(const TriangleMesh& mesh, double tol,
                                           std::size_t* welded_count = nullptr) {
  std::vector<std::uint32_t> remap(mesh.vertices.size());
  std::uint32_t next = 0;
  if (tol <= 0.0) {
    std::unordered_map<VertexKey, std::uint32_t, VertexKeyHash> first_index;
    first_index.reserve(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      const auto [it, inserted] = first_index.emplace(weld_key(mesh.vertices[i]), next);
      if (inserted) ++next;
      remap[i] = it->second;
    }
  } else {
    std::unordered_map<VertexKey, std::vector<std::uint32_t>, VertexKeyHash> buckets;
    const auto snap = [tol](double c) { return std::int64_t(std::floor(c / tol)); };
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      const Vec3d p = to_double(mesh.vertices[i]);
      const std::int64_t bx = snap(p.x), by = snap(p.y), bz = snap(p.z);
      std::uint32_t found = std::uint32_t(-1);
      for (std::int64_t dz = -1; dz <= 1 && found == std::uint32_t(-1); ++dz) {
        for (std::int64_t dy = -1; dy <= 1 && found == std::uint32_t(-1); ++dy) {
          for (std::int64_t dx = -1; dx <= 1 && found == std::uint32_t(-1); ++dx) {
            const auto it = buckets.find(bucket_key(bx + dx, by + dy, bz + dz));
            if (it == buckets.end()) continue;
            for (std::uint32_t candidate : it->second) {
              if (norm(to_double(mesh.vertices[candidate]) - p) <= tol) {
                found = remap[candidate];
                break;
              }
            }
          }
        }
      }
      if (found == std::uint32_t(-1)) {
        found = next++;
        buckets[bucket_key(bx, by, bz)].push_back(std::uint32_t(i));
      }
      remap[i] = found;
    }
  }
  if (welded_count != nullptr) *welded_count = next;
  return remap;
}

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t(std::min(a, b)) << 32) | std::uint64_t(std::max(a, b));
}

}  // namespace detail

struct WatertightReport {
  bool watertight = false;
  std::size_t boundary_edges = 0;      // incident to exactly one triangle
  std::size_t non_manifold_edges = 0;  // incident to more than two triangles
  std::size_t degenerate_triangles = 0;
};

/**
 * Edge-incidence diagnostics after welding coincident vertices.
 *
 * The default weld is exact coordinate equality, which is the right notion
 * for marching-cubes output (shared vertices are bit-identical); pass a
 * positive tolerance to weld nearly-coincident soups instead. Triangles with
 * repeated welded indices are counted as degenerate and excluded from edge
 * incidence; zero-area triangles with distinct vertices are counted but kept.
 */
inline WatertightReport watertight_check(const TriangleMesh& mesh, double weld_tolerance = 0.0) {
  const auto remap = detail::weld_map(mesh, weld_tolerance);
  WatertightReport report;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_count;
  edge_count.reserve(mesh.triangles.size() * 3);
  for (const auto& tri : mesh.triangles) {
    const std::uint32_t a = remap[tri[0]], b = remap[tri[1]], c = remap[tri[2]];
    if (a == b || b == c || a == c) {
      ++report.degenerate_triangles;
      continue;
    }
    const Vec3d e1 = to_double(mesh.vertices[tri[1]]) - to_double(mesh.vertices[tri[0]]);
    const Vec3d e2 = to_double(mesh.vertices[tri[2]]) - to_double(mesh.vertices[tri[0]]);
    const Vec3d n = cross(e1, e2);
    if (n.x == 0.0 && n.y == 0.0 && n.z == 0.0) ++report.degenerate_triangles;
    ++edge_count[detail::edge_key(a, b)];
    ++edge_count[detail::edge_key(b, c)];
    ++edge_count[detail::edge_key(a, c)];
  }
  for (const auto& [key, count] : edge_count) {
    if (count == 1) ++report.boundary_edges;
    if (count > 2) ++report.non_manifold_edges;
  }
  report.watertight = report.boundary_edges == 0 && report.non_manifold_edges == 0 &&
                      !mesh.triangles.empty();
  return report;
}

/// Returns a copy with coincident vertices merged and indices remapped.
inline TriangleMesh weld_vertices(const TriangleMesh& mesh, double tolerance = 0.0) {
  std::size_t welded = 0;
  const auto remap = detail::weld_map(mesh, tolerance, &welded);
  TriangleMesh out;
  out.vertices.resize(welded);
  std::vector<bool> written(welded, false);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!written[remap[i]]) {
      out.vertices[remap[i]] = mesh.vertices[i];
      written[remap[i]] = true;
    }
  }
  out.triangles.reserve(mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    out.triangles.push_back({remap[tri[0]], remap[tri[1]], remap[tri[2]]});
  }
  out.normals = mesh.normals;
  return out;
}

inline double surface_area(const TriangleMesh& mesh) {
  double area = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3d a = to_double(mesh.vertices[tri[0]]);
    const Vec3d b = to_double(mesh.vertices[tri[1]]);
    const Vec3d c = to_double(mesh.vertices[tri[2]]);
    area += 0.5 * norm(cross(b - a, c - a));
  }
  return area;
}

/// Signed volume by the divergence theorem; positive for outward-oriented
/// closed surfaces.
inline double signed_volume(const TriangleMesh& mesh) {
  double vol = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3d a = to_double(mesh.vertices[tri[0]]);
    const Vec3d b = to_double(mesh.vertices[tri[1]]);
    const Vec3d c = to_double(mesh.vertices[tri[2]]);
    vol += dot(a, cross(b, c)) / 6.0;
  }
  return vol;
}

/// Connected components over exactly-welded shared vertices.
inline std::size_t connected_component_count(const TriangleMesh& mesh) {
  std::size_t welded = 0;
  const auto remap = detail::weld_map(mesh, 0.0, &welded);
  std::vector<std::uint32_t> parent(welded);
  for (std::uint32_t i = 0; i < welded; ++i) parent[i] = i;
  const auto find = [&parent](std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  bool any_used = false;
  std::vector<bool> used(welded, false);
  for (const auto& tri : mesh.triangles) {
    const std::uint32_t a = remap[tri[0]], b = remap[tri[1]], c = remap[tri[2]];
    used[a] = used[b] = used[c] = true;
    any_used = true;
    parent[find(a)] = find(b);
    parent[find(b)] = find(c);
  }
  if (!any_used) return 0;
  std::size_t roots = 0;
  for (std::uint32_t i = 0; i < welded; ++i) {
    if (used[i] && find(i) == i) ++roots;
  }
  return roots;
}

/// V - E + F over exactly-welded vertices (2 for a topological sphere).
inline long euler_characteristic(const TriangleMesh& mesh) {
  std::size_t welded = 0;
  const auto remap = detail::weld_map(mesh, 0.0, &welded);
  std::unordered_map<std::uint64_t, bool> edges;
  std::vector<bool> used(welded, false);
  for (const auto& tri : mesh.triangles) {
    const std::uint32_t a = remap[tri[0]], b = remap[tri[1]], c = remap[tri[2]];
    used[a] = used[b] = used[c] = true;
    edges[detail::edge_key(a, b)] = true;
    edges[detail::edge_key(b, c)] = true;
    edges[detail::edge_key(a, c)] = true;
  }
  long vertices = 0;
  for (std::size_t i = 0; i < welded; ++i) vertices += used[i] ? 1 : 0;
  return vertices - static_cast<long>(edges.size()) + static_cast<long>(mesh.triangles.size());
}

}  // namespace morphgen
