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
#include <optional>

#include "morphgen/error.hpp"
#include "morphgen/vec.hpp"

namespace morphgen {

/// Ray r(t) = origin + t * dir with unit direction.
struct Ray {
  Vec3d origin{};
  Vec3d dir{};
};

/// Normalizes and validates the direction (must be nonzero).
inline Ray make_ray(Vec3d origin, Vec3d dir) {
  const double len = norm(dir);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw Error(ErrorKind::validation, "make_ray: direction must be a finite nonzero vector");
  }
  return {origin, dir / len};
}

struct RayHit {
  double t = 0.0;
  Vec3d point{};
};

/**
 * Möller–Trumbore ray/triangle intersection.
 *
 * Returns the hit with t >= 0 and barycentric containment (u >= 0, v >= 0,
 * u + v <= 1), or nullopt for misses, hits behind the origin, and rays
 * parallel to the triangle plane (|det| < 1e-12).
 */
inline std::optional<RayHit> ray_triangle_intersect(const Ray& ray, Vec3d a, Vec3d b, Vec3d c) {
  constexpr double kParallelEps = 1e-12;
  const Vec3d edge1 = b - a;
  const Vec3d edge2 = c - a;
  const Vec3d pvec = cross(ray.dir, edge2);
  const double det = dot(edge1, pvec);
  if (std::abs(det) < kParallelEps) return std::nullopt;
  const double inv_det = 1.0 / det;
  const Vec3d tvec = ray.origin - a;
  const double u = dot(tvec, pvec) * inv_det;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3d qvec = cross(tvec, edge1);
  const double v = dot(ray.dir, qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = dot(edge2, qvec) * inv_det;
  if (t < 0.0 || !std::isfinite(t)) return std::nullopt;
  return RayHit{t, ray.origin + ray.dir * t};
}

}  // namespace morphgen
