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
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "morphgen/grid.hpp"
#include "morphgen/mesh.hpp"
#include "morphgen/raycast.hpp"

namespace morphgen {

struct VoxelizeOptions {
  int threads = 0;          // 0 = hardware concurrency
  bool brute_force = false; // test every triangle against every ray (oracle mode)
};

namespace detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

// Maps an intersection point to a voxel index along one axis. Points exactly
// on the grid max face clamp to the last voxel; anything outside the grid is
// rejected.
inline bool voxel_index_1d(double p, double origin, double spacing, std::uint32_t dim,
                           std::uint32_t& out) {
  const double q = (p - origin) / spacing;
  if (q < 0.0 || q > double(dim)) return false;
  const double f = std::floor(q);
  std::uint32_t idx = f >= double(dim) ? dim - 1 : std::uint32_t(f);
  out = idx;
  return true;
}

// One pass of axis-aligned rays: `axis` is the ray direction, (b_axis,
// c_axis) index the perpendicular row lattice. All intersections of every
// ray are attributed, not just the first.
inline void voxelize_axis_pass(const TriangleMesh& mesh, const GridSpec& spec, int axis,
                               const VoxelizeOptions& options, BinaryGrid& out) {
  const int b_axis = (axis + 1) % 3;
  const int c_axis = (axis + 2) % 3;
  const std::uint32_t nb = spec.dims[std::size_t(b_axis)];
  const std::uint32_t nc = spec.dims[std::size_t(c_axis)];
  const std::size_t rows = std::size_t(nb) * nc;

  // Bin triangles by the rows their bounding rectangle covers, so each row
  // only tests nearby triangles. Brute-force mode keeps the all-pairs path
  // available as an oracle.
  std::vector<std::vector<std::uint32_t>> row_bins;
  if (!options.brute_force) {
    row_bins.resize(rows);
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      double bmin = 1e300, bmax = -1e300, cmin = 1e300, cmax = -1e300;
      for (std::uint32_t idx : tri) {
        const Vec3d p = to_double(mesh.vertices[idx]);
        bmin = std::min(bmin, p[b_axis]);
        bmax = std::max(bmax, p[b_axis]);
        cmin = std::min(cmin, p[c_axis]);
        cmax = std::max(cmax, p[c_axis]);
      }
      // Rows are indexed by voxel centers; widen by one row to cover centers
      // straddling the triangle rectangle.
      const auto row_range = [](double lo, double hi, double org, double sp, std::uint32_t n,
                                std::uint32_t& r0, std::uint32_t& r1) {
        const double q0 = (lo - org) / sp - 1.0;
        const double q1 = (hi - org) / sp + 1.0;
        if (q1 < 0.0 || q0 > double(n)) return false;
        r0 = q0 <= 0.0 ? 0 : std::uint32_t(q0);
        r1 = q1 >= double(n - 1) ? n - 1 : std::uint32_t(q1);
        return r0 <= r1;
      };
      std::uint32_t b0, b1, c0, c1;
      if (!row_range(bmin, bmax, spec.origin[b_axis], spec.spacing[b_axis], nb, b0, b1)) continue;
      if (!row_range(cmin, cmax, spec.origin[c_axis], spec.spacing[c_axis], nc, c0, c1)) continue;
      for (std::uint32_t cb = c0; cb <= c1; ++cb) {
        for (std::uint32_t bb = b0; bb <= b1; ++bb) {
          row_bins[std::size_t(cb) * nb + bb].push_back(t);
        }
      }
    }
  }

  const int threads = std::min<int>(resolve_threads(options.threads), int(rows));
  std::vector<BinaryGrid> partial;
  partial.assign(std::size_t(threads), BinaryGrid(spec));

  const auto worker = [&](int which) {
    BinaryGrid& local = partial[std::size_t(which)];
    const std::size_t begin = rows * std::size_t(which) / std::size_t(threads);
    const std::size_t end = rows * std::size_t(which + 1) / std::size_t(threads);
    for (std::size_t row = begin; row < end; ++row) {
      const std::uint32_t cb = std::uint32_t(row / nb);
      const std::uint32_t bb = std::uint32_t(row % nb);
      Ray ray;
      ray.origin[axis] = spec.origin[axis] - spec.spacing[axis];
      ray.origin[b_axis] = spec.origin[b_axis] + (bb + 0.5) * spec.spacing[b_axis];
      ray.origin[c_axis] = spec.origin[c_axis] + (cb + 0.5) * spec.spacing[c_axis];
      ray.dir = {0.0, 0.0, 0.0};
      ray.dir[axis] = 1.0;

      const auto test_triangle = [&](std::uint32_t t) {
        const auto& tri = mesh.triangles[t];
        const auto hit = ray_triangle_intersect(ray, to_double(mesh.vertices[tri[0]]),
                                                to_double(mesh.vertices[tri[1]]),
                                                to_double(mesh.vertices[tri[2]]));
        if (!hit) return;
        std::uint32_t vi, vj, vk;
        if (voxel_index_1d(hit->point.x, spec.origin.x, spec.spacing.x, spec.dims[0], vi) &&
            voxel_index_1d(hit->point.y, spec.origin.y, spec.spacing.y, spec.dims[1], vj) &&
            voxel_index_1d(hit->point.z, spec.origin.z, spec.spacing.z, spec.dims[2], vk)) {
          local.set(vi, vj, vk);
        }
      };

      if (options.brute_force) {
        for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) test_triangle(t);
      } else {
        for (std::uint32_t t : row_bins[row]) test_triangle(t);
      }
    }
  };

  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& p : partial) out.or_with(p);
}

}  // namespace detail

/**
 * Surface voxelization by axis-aligned ray casting.
 *
 * One ray is cast per perpendicular voxel row along each principal axis
 * (N_y*N_z + N_x*N_z + N_x*N_y rays total); every intersection point marks
 * the voxel that contains it, and the three passes are OR-combined. The
 * result is deterministic for any thread count and any triangle order.
 */
inline BinaryGrid voxelize(const TriangleMesh& mesh, const GridSpec& spec,
                           const VoxelizeOptions& options = {}) {
  if (mesh.triangles.empty()) {
    throw Error(ErrorKind::validation, "voxelize: mesh has no triangles");
  }
  validate_mesh(mesh);
  BinaryGrid grid(spec);
  for (int axis = 0; axis < 3; ++axis) {
    detail::voxelize_axis_pass(mesh, spec, axis, options, grid);
  }
  return grid;
}

/// True when the grid's box contains the mesh bounds (callers may warn).
inline bool grid_covers_mesh(const GridSpec& spec, const TriangleMesh& mesh) {
  const Aabb box = bounding_box(mesh);
  const Vec3d hi = spec.max_corner();
  for (int a = 0; a < 3; ++a) {
    if (box.min[a] < spec.origin[a] || box.max[a] > hi[a]) return false;
  }
  return true;
}

}  // namespace morphgen
