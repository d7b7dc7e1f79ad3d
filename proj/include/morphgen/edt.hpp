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

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "morphgen/grid.hpp"

namespace morphgen {

namespace detail {

constexpr double kEdtInf = std::numeric_limits<double>::infinity();

// One-dimensional squared-distance transform by the lower envelope of
// parabolas (Felzenszwalb & Huttenlocher). Exact for integer inputs.
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                   std::vector<double>& z, int n) {
  int k = 0;
  v[0] = 0;
  z[0] = -kEdtInf;
  z[1] = kEdtInf;
  for (int q = 1; q < n; ++q) {
    if (f[std::size_t(q)] == kEdtInf) continue;
    double s;
    while (true) {
      const int p = v[k];
      if (f[std::size_t(p)] == kEdtInf) {
        // An infinite parabola never wins; drop it.
        if (k == 0) {
          v[0] = q;
          z[0] = -kEdtInf;
          z[1] = kEdtInf;
          s = -kEdtInf;
          break;
        }
        --k;
        continue;
      }
      s = ((f[std::size_t(q)] + double(q) * q) - (f[std::size_t(p)] + double(p) * p)) /
          (2.0 * q - 2.0 * p);
      if (s <= z[std::size_t(k)]) {
        --k;
        continue;
      }
      ++k;
      v[std::size_t(k)] = q;
      z[std::size_t(k)] = s;
      z[std::size_t(k) + 1] = kEdtInf;
      break;
    }
  }
  if (f[std::size_t(v[0])] == kEdtInf && k == 0) {
    for (int q = 0; q < n; ++q) d[std::size_t(q)] = kEdtInf;
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[std::size_t(k) + 1] < double(q)) ++k;
    const int p = v[std::size_t(k)];
    const double dq = double(q) - p;
    d[std::size_t(q)] = dq * dq + f[std::size_t(p)];
  }
}

// Full 3-D squared EDT in voxel-index units; sources are voxels where
// `is_source` returns true.
template <typename SourcePredicate>
inline std::vector<double> squared_edt(const GridSpec& spec, SourcePredicate is_source) {
  const auto [nx, ny, nz] = spec.dims;
  std::vector<double> dist(spec.voxel_count());
  for (std::size_t linear = 0; linear < dist.size(); ++linear) {
    dist[linear] = is_source(linear) ? 0.0 : kEdtInf;
  }
  const std::size_t max_dim = std::max({nx, ny, nz});
  std::vector<double> f(max_dim), d(max_dim);
  std::vector<int> v(max_dim);
  std::vector<double> z(max_dim + 1);

  // x pass
  for (std::uint32_t k = 0; k < nz; ++k) {
    for (std::uint32_t j = 0; j < ny; ++j) {
      const std::size_t base = spec.index(0, j, k);
      for (std::uint32_t i = 0; i < nx; ++i) f[i] = dist[base + i];
      edt_1d(f, d, v, z, int(nx));
      for (std::uint32_t i = 0; i < nx; ++i) dist[base + i] = d[i];
    }
  }
  // y pass
  for (std::uint32_t k = 0; k < nz; ++k) {
    for (std::uint32_t i = 0; i < nx; ++i) {
      const std::size_t base = spec.index(i, 0, k);
      for (std::uint32_t j = 0; j < ny; ++j) f[j] = dist[base + std::size_t(j) * nx];
      edt_1d(f, d, v, z, int(ny));
      for (std::uint32_t j = 0; j < ny; ++j) dist[base + std::size_t(j) * nx] = d[j];
    }
  }
  // z pass
  const std::size_t slab = std::size_t(nx) * ny;
  for (std::uint32_t j = 0; j < ny; ++j) {
    for (std::uint32_t i = 0; i < nx; ++i) {
      const std::size_t base = spec.index(i, j, 0);
      for (std::uint32_t k = 0; k < nz; ++k) f[k] = dist[base + std::size_t(k) * slab];
      edt_1d(f, d, v, z, int(nz));
      for (std::uint32_t k = 0; k < nz; ++k) dist[base + std::size_t(k) * slab] = d[k];
    }
  }
  return dist;
}

}  // namespace detail

/**
 * Exact Euclidean distance transform in voxel-pitch units.
 *
 * Set voxels receive the distance to the nearest background voxel,
 * background voxels receive 0, and a grid with no background at all comes
 * back as +inf everywhere. Isotropic spacing is assumed: distances are in
 * index space.
 */
inline ScalarField edt(const BinaryGrid& grid) {
  const auto squared =
      detail::squared_edt(grid.spec, [&grid](std::size_t linear) { return !grid.get(linear); });
  ScalarField field(grid.spec);
  for (std::size_t linear = 0; linear < squared.size(); ++linear) {
    field.values[linear] = float(std::sqrt(squared[linear]));
  }
  return field;
}

/**
 * Signed distance field of a filled solid, positive inside.
 *
 * phi = edt(solid) - edt(complement): every interior voxel carries +distance
 * to the nearest outside voxel, every exterior voxel carries -distance to
 * the nearest inside voxel, so |phi| >= 1 everywhere and the zero level sits
 * between the two voxel shells.
 */
inline ScalarField signed_distance(const BinaryGrid& filled) {
  for (int a = 1; a < 3; ++a) {
    const double ratio = filled.spec.spacing[a] / filled.spec.spacing[0];
    if (std::abs(ratio - 1.0) > 1e-9) {
      throw Error(ErrorKind::validation,
                  "signed_distance: grid spacing must be isotropic (voxel-pitch units)");
    }
  }
  const std::size_t inside_count = filled.count();
  if (inside_count == 0 || inside_count == filled.spec.voxel_count()) {
    throw Error(ErrorKind::validation,
                "signed_distance: grid has no interface (all voxels share one value)");
  }
  const auto inside_sq = detail::squared_edt(
      filled.spec, [&filled](std::size_t linear) { return !filled.get(linear); });
  const auto outside_sq = detail::squared_edt(
      filled.spec, [&filled](std::size_t linear) { return filled.get(linear); });
  ScalarField field(filled.spec);
  for (std::size_t linear = 0; linear < field.values.size(); ++linear) {
    field.values[linear] = filled.get(linear) ? float(std::sqrt(inside_sq[linear]))
                                              : -float(std::sqrt(outside_sq[linear]));
  }
  return field;
}

}  // namespace morphgen
