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

#include "morphgen/grid.hpp"

namespace morphgen {

namespace detail {

constexpr int kNeighborOffsets[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                        {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};

}  // namespace detail

/// One 6-connected dilation step; voxels outside the grid are background.
inline BinaryGrid dilate(const BinaryGrid& grid, int iterations = 1) {
  BinaryGrid current = grid;
  const auto [nx, ny, nz] = grid.spec.dims;
  for (int it = 0; it < iterations; ++it) {
    BinaryGrid next = current;
    for (std::uint32_t k = 0; k < nz; ++k) {
      for (std::uint32_t j = 0; j < ny; ++j) {
        for (std::uint32_t i = 0; i < nx; ++i) {
          if (next.get(i, j, k)) continue;
          for (const auto& d : detail::kNeighborOffsets) {
            const std::int64_t ni = std::int64_t(i) + d[0];
            const std::int64_t nj = std::int64_t(j) + d[1];
            const std::int64_t nk = std::int64_t(k) + d[2];
            if (ni < 0 || nj < 0 || nk < 0 || ni >= nx || nj >= ny || nk >= nz) continue;
            if (current.get(std::uint32_t(ni), std::uint32_t(nj), std::uint32_t(nk))) {
              next.set(i, j, k);
              break;
            }
          }
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

/// Background voxels 6-connected to the grid boundary (the invadable
/// exterior). Enclosed voids are exactly the background voxels not returned.
inline BinaryGrid flood_exterior(const BinaryGrid& grid) {
  const auto [nx, ny, nz] = grid.spec.dims;
  BinaryGrid reached(grid.spec);
  std::vector<std::size_t> frontier;
  const auto try_seed = [&](std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    const std::size_t linear = grid.spec.index(i, j, k);
    if (!grid.get(linear) && !reached.get(linear)) {
      reached.set(linear);
      frontier.push_back(linear);
    }
  };
  for (std::uint32_t k = 0; k < nz; ++k) {
    for (std::uint32_t j = 0; j < ny; ++j) {
      for (std::uint32_t i = 0; i < nx; ++i) {
        if (i == 0 || j == 0 || k == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1) {
          try_seed(i, j, k);
        }
      }
    }
  }
  while (!frontier.empty()) {
    const std::size_t linear = frontier.back();
    frontier.pop_back();
    const std::uint32_t i = std::uint32_t(linear % nx);
    const std::uint32_t j = std::uint32_t((linear / nx) % ny);
    const std::uint32_t k = std::uint32_t(linear / (std::size_t(nx) * ny));
    for (const auto& d : detail::kNeighborOffsets) {
      const std::int64_t ni = std::int64_t(i) + d[0];
      const std::int64_t nj = std::int64_t(j) + d[1];
      const std::int64_t nk = std::int64_t(k) + d[2];
      if (ni < 0 || nj < 0 || nk < 0 || ni >= nx || nj >= ny || nk >= nz) continue;
      const std::size_t nl = grid.spec.index(std::uint32_t(ni), std::uint32_t(nj), std::uint32_t(nk));
      if (!grid.get(nl) && !reached.get(nl)) {
        reached.set(nl);
        frontier.push_back(nl);
      }
    }
  }
  return reached;
}

/**
 * Fills internal voids that cannot be invaded from the grid boundary.
 *
 * The shell is dilated `dilation_iters` times so that pinholes up to that
 * scale cannot leak, the remaining exterior is flood-filled, and the
 * invaded region is dilated back over the collar. A background voxel stays
 * empty exactly when it lies within `dilation_iters` steps of the invadable
 * exterior; everything else becomes solid. The whole operation runs on a
 * grid virtually padded by `dilation_iters` background layers, so a solid
 * near the grid boundary cannot fuse with it and shadow the voxels behind.
 * With zero iterations this is a plain boundary flood fill. The result
 * always contains the input and the operation is idempotent.
 */
inline BinaryGrid fill_holes(const BinaryGrid& grid, int dilation_iters) {
  if (dilation_iters < 0) {
    throw Error(ErrorKind::validation, "fill_holes: dilation_iters must be >= 0");
  }
  if (dilation_iters == 0) {
    const BinaryGrid exterior = flood_exterior(grid);
    BinaryGrid filled(grid.spec);
    for (std::size_t w = 0; w < filled.words.size(); ++w) {
      filled.words[w] = grid.words[w] | ~exterior.words[w];
    }
    const std::size_t n = grid.spec.voxel_count();
    if (n % 64 != 0) {
      filled.words.back() &= (std::uint64_t(1) << (n % 64)) - 1;
    }
    return filled;
  }

  const std::uint32_t pad = std::uint32_t(dilation_iters);
  GridSpec padded_spec;
  padded_spec.dims = {grid.spec.dims[0] + 2 * pad, grid.spec.dims[1] + 2 * pad,
                      grid.spec.dims[2] + 2 * pad};
  padded_spec.origin = grid.spec.origin - Vec3d{pad * grid.spec.spacing.x,
                                                pad * grid.spec.spacing.y,
                                                pad * grid.spec.spacing.z};
  padded_spec.spacing = grid.spec.spacing;
  BinaryGrid padded(padded_spec);
  for (std::uint32_t k = 0; k < grid.spec.dims[2]; ++k) {
    for (std::uint32_t j = 0; j < grid.spec.dims[1]; ++j) {
      for (std::uint32_t i = 0; i < grid.spec.dims[0]; ++i) {
        if (grid.get(i, j, k)) padded.set(i + pad, j + pad, k + pad);
      }
    }
  }
  BinaryGrid exterior = dilate(flood_exterior(dilate(padded, dilation_iters)), dilation_iters);
  BinaryGrid filled(grid.spec);
  for (std::uint32_t k = 0; k < grid.spec.dims[2]; ++k) {
    for (std::uint32_t j = 0; j < grid.spec.dims[1]; ++j) {
      for (std::uint32_t i = 0; i < grid.spec.dims[0]; ++i) {
        if (grid.get(i, j, k) || !exterior.get(i + pad, j + pad, k + pad)) {
          filled.set(i, j, k);
        }
      }
    }
  }
  return filled;
}

/// Number of 6-connected components of the set voxels.
inline std::size_t count_components(const BinaryGrid& grid) {
  const auto [nx, ny, nz] = grid.spec.dims;
  BinaryGrid seen(grid.spec);
  std::vector<std::size_t> frontier;
  std::size_t components = 0;
  const std::size_t total = grid.spec.voxel_count();
  for (std::size_t start = 0; start < total; ++start) {
    if (!grid.get(start) || seen.get(start)) continue;
    ++components;
    seen.set(start);
    frontier.push_back(start);
    while (!frontier.empty()) {
      const std::size_t linear = frontier.back();
      frontier.pop_back();
      const std::uint32_t i = std::uint32_t(linear % nx);
      const std::uint32_t j = std::uint32_t((linear / nx) % ny);
      const std::uint32_t k = std::uint32_t(linear / (std::size_t(nx) * ny));
      for (const auto& d : detail::kNeighborOffsets) {
        const std::int64_t ni = std::int64_t(i) + d[0];
        const std::int64_t nj = std::int64_t(j) + d[1];
        const std::int64_t nk = std::int64_t(k) + d[2];
        if (ni < 0 || nj < 0 || nk < 0 || ni >= nx || nj >= ny || nk >= nz) continue;
        const std::size_t nl =
            grid.spec.index(std::uint32_t(ni), std::uint32_t(nj), std::uint32_t(nk));
        if (grid.get(nl) && !seen.get(nl)) {
          seen.set(nl);
          frontier.push_back(nl);
        }
      }
    }
  }
  return components;
}

}  // namespace morphgen
