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

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphgen/grid.hpp"
#include "morphgen/mesh.hpp"
#include "morphgen/vec.hpp"

namespace morphgen::testing {

/// Soup mesh from explicit triangles (three fresh vertices per triangle).
inline TriangleMesh mesh_from_triangles(const std::vector<std::array<Vec3f, 3>>& tris) {
  TriangleMesh mesh;
  for (const auto& t : tris) {
    const std::uint32_t base = std::uint32_t(mesh.vertices.size());
    mesh.vertices.push_back(t[0]);
    mesh.vertices.push_back(t[1]);
    mesh.vertices.push_back(t[2]);
    mesh.triangles.push_back({base, base + 1, base + 2});
  }
  return mesh;
}

/// Axis-aligned box as 12 outward-oriented triangles (soup).
inline TriangleMesh box_mesh(Vec3f lo = {0, 0, 0}, Vec3f hi = {1, 1, 1}) {
  const float x0 = lo.x, y0 = lo.y, z0 = lo.z, x1 = hi.x, y1 = hi.y, z1 = hi.z;
  std::vector<std::array<Vec3f, 3>> tris;
  const auto quad = [&tris](Vec3f a, Vec3f b, Vec3f c, Vec3f d) {
    tris.push_back({a, b, c});
    tris.push_back({a, c, d});
  };
  quad({x0, y0, z0}, {x0, y1, z0}, {x1, y1, z0}, {x1, y0, z0});  // z = z0, normal -z
  quad({x0, y0, z1}, {x1, y0, z1}, {x1, y1, z1}, {x0, y1, z1});  // z = z1, normal +z
  quad({x0, y0, z0}, {x1, y0, z0}, {x1, y0, z1}, {x0, y0, z1});  // y = y0, normal -y
  quad({x0, y1, z0}, {x0, y1, z1}, {x1, y1, z1}, {x1, y1, z0});  // y = y1, normal +y
  quad({x0, y0, z0}, {x0, y0, z1}, {x0, y1, z1}, {x0, y1, z0});  // x = x0, normal -x
  quad({x1, y0, z0}, {x1, y1, z0}, {x1, y1, z1}, {x1, y0, z1});  // x = x1, normal +x
  return mesh_from_triangles(tris);
}

/// Icosphere with shared vertices: icosahedron subdivided `subdivisions`
/// times, projected onto the sphere of radius r about center.
inline TriangleMesh icosphere(Vec3d center, double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3d> verts = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                              {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                              {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<std::uint32_t, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : verts) v = v / norm(v);

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    const auto mid = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3d m = (verts[a] + verts[b]) * 0.5;
      m = m / norm(m);
      verts.push_back(m);
      const std::uint32_t idx = std::uint32_t(verts.size() - 1);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<std::uint32_t, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const std::uint32_t ab = mid(f[0], f[1]);
      const std::uint32_t bc = mid(f[1], f[2]);
      const std::uint32_t ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  TriangleMesh mesh;
  mesh.vertices.reserve(verts.size());
  for (const auto& v : verts) mesh.vertices.push_back(to_float(center + v * radius));
  mesh.triangles = std::move(faces);
  return mesh;
}

/// Analytic inside-positive ball SDF sampled at voxel centers, in
/// voxel-pitch units (isotropic spacing assumed).
inline ScalarField ball_field(const GridSpec& spec, Vec3d center, double radius) {
  ScalarField field(spec);
  for (std::uint32_t k = 0; k < spec.dims[2]; ++k) {
    for (std::uint32_t j = 0; j < spec.dims[1]; ++j) {
      for (std::uint32_t i = 0; i < spec.dims[0]; ++i) {
        const Vec3d p = spec.voxel_center(i, j, k);
        field.at(i, j, k) = float((radius - norm(p - center)) / spec.spacing.x);
      }
    }
  }
  return field;
}

/// Solid ball occupancy grid (voxel centers inside the ball).
inline BinaryGrid ball_grid(const GridSpec& spec, Vec3d center, double radius) {
  BinaryGrid grid(spec);
  for (std::uint32_t k = 0; k < spec.dims[2]; ++k) {
    for (std::uint32_t j = 0; j < spec.dims[1]; ++j) {
      for (std::uint32_t i = 0; i < spec.dims[0]; ++i) {
        if (norm(spec.voxel_center(i, j, k) - center) <= radius) grid.set(i, j, k);
      }
    }
  }
  return grid;
}

inline std::vector<std::uint8_t> ascii_stl_bytes(const TriangleMesh& mesh,
                                                 const std::string& name = "fixture") {
  std::string text = "solid " + name + "\n";
  for (const auto& tri : mesh.triangles) {
    text += "  facet normal 0 0 0\n    outer loop\n";
    for (std::uint32_t idx : tri) {
      const Vec3f v = mesh.vertices[idx];
      text += "      vertex " + std::to_string(v.x) + " " + std::to_string(v.y) + " " +
              std::to_string(v.z) + "\n";
    }
    text += "    endloop\n  endfacet\n";
  }
  text += "endsolid " + name + "\n";
  return {text.begin(), text.end()};
}

}  // namespace morphgen::testing
