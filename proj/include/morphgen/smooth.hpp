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

#include <cstdint>
#include <vector>

#include "morphgen/error.hpp"
#include "morphgen/mesh.hpp"

namespace morphgen {

/**
 * Iterative Laplacian (umbrella) smoothing.
 *
 * Per iteration every vertex moves toward the mean of its 1-ring neighbors
 * by factor lambda: v' = v + lambda * (mean(neighbors) - v). The update is
 * synchronous (two-buffer), the neighbor average keeps the step stable for
 * any vertex degree with lambda in [0,1), and connectivity comes from shared
 * vertex indices, so topology is unchanged. lambda = 0 or zero iterations
 * return the mesh bit-exactly.
 */
inline TriangleMesh laplacian_smooth(const TriangleMesh& mesh, double lambda, int iters) {
  if (lambda < 0.0 || lambda >= 1.0) {
    throw Error(ErrorKind::validation, "laplacian_smooth: lambda must be in [0, 1)");
  }
  if (iters < 0) {
    throw Error(ErrorKind::validation, "laplacian_smooth: iters must be >= 0");
  }
  TriangleMesh out = mesh;
  if (lambda == 0.0 || iters == 0 || mesh.vertices.empty()) return out;
  validate_mesh(mesh);

  // 1-ring adjacency in CSR form, unique neighbors per vertex.
  std::vector<std::vector<std::uint32_t>> neighbors(mesh.vertices.size());
  const auto link = [&neighbors](std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    auto& list = neighbors[a];
    for (std::uint32_t n : list) {
      if (n == b) return;
    }
    list.push_back(b);
  };
  for (const auto& tri : mesh.triangles) {
    link(tri[0], tri[1]);
    link(tri[1], tri[0]);
    link(tri[1], tri[2]);
    link(tri[2], tri[1]);
    link(tri[0], tri[2]);
    link(tri[2], tri[0]);
  }

  std::vector<Vec3f> current = out.vertices;
  std::vector<Vec3f> next(current.size());
  for (int it = 0; it < iters; ++it) {
    for (std::size_t v = 0; v < current.size(); ++v) {
      const auto& ring = neighbors[v];
      if (ring.empty()) {
        next[v] = current[v];
        continue;
      }
      Vec3d mean{0.0, 0.0, 0.0};
      for (std::uint32_t n : ring) mean = mean + to_double(current[n]);
      mean = mean / double(ring.size());
      const Vec3d p = to_double(current[v]);
      next[v] = to_float(p + (mean - p) * lambda);
    }
    std::swap(current, next);
  }
  out.vertices = std::move(current);
  out.normals.clear();  // positions moved; stale normals would mislead
  return out;
}

}  // namespace morphgen
