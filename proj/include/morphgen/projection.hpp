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
#include <limits>
#include <string>
#include <vector>

#include "morphgen/error.hpp"
#include "morphgen/mesh.hpp"
#include "morphgen/raycast.hpp"

namespace morphgen {

enum class View { back, side, top, front, left, bottom };

inline std::string to_string(View view) {
  switch (view) {
    case View::back: return "back";
    case View::side: return "side";
    case View::top: return "top";
    case View::front: return "front";
    case View::left: return "left";
    case View::bottom: return "bottom";
  }
  return "back";
}

inline View view_from_string(const std::string& name) {
  if (name == "back") return View::back;
  if (name == "side") return View::side;
  if (name == "top") return View::top;
  if (name == "front") return View::front;
  if (name == "left") return View::left;
  if (name == "bottom") return View::bottom;
  throw Error(ErrorKind::validation, "unknown view '" + name + "'");
}

/**
 * Quantized orthographic depth image.
 *
 * Pixel 0 is background (no hit); object pixels are min/max normalized over
 * the hit set and binned 1..255, nearest surface = 1. depth_min/depth_max
 * are the world-unit normalization bounds, pixel_pitch the world size of a
 * pixel.
 */
struct DepthImage {
  int width = 0;
  int height = 0;
  View view = View::back;
  std::vector<std::uint8_t> pixels;  // row-major
  double depth_min = 0.0;
  double depth_max = 0.0;
  double pixel_pitch = 0.0;

  std::size_t hit_count() const {
    std::size_t n = 0;
    for (std::uint8_t p : pixels) n += p != 0 ? 1 : 0;
    return n;
  }
};

namespace detail::proj {

// Camera frame per view: the ray axis (with direction sign) and the two
// image axes. u runs left to right, v top to bottom; signs keep a
// y-symmetric mesh's left view the mirror of its side view.
struct ViewFrame {
  int ray_axis;
  double ray_sign;  // +1: rays travel toward +axis from the min face
  int u_axis;
  double u_sign;
  int v_axis;
  double v_sign;
};

inline ViewFrame view_frame(View view) {
  switch (view) {
    case View::back:   return {0, +1.0, 1, -1.0, 2, -1.0};
    case View::front:  return {0, -1.0, 1, +1.0, 2, -1.0};
    case View::side:   return {1, +1.0, 0, +1.0, 2, -1.0};
    case View::left:   return {1, -1.0, 0, -1.0, 2, -1.0};
    case View::top:    return {2, -1.0, 0, +1.0, 1, +1.0};
    case View::bottom: return {2, +1.0, 0, +1.0, 1, -1.0};
  }
  return {0, +1.0, 1, -1.0, 2, -1.0};
}

constexpr double kFramingMargin = 1.05;  // 5% margin around the cross-section

}  // namespace detail::proj

/**
 * Orthographic depth map of a mesh from one of the six principal views.
 *
 * One ray per pixel center from a camera plane on the mesh AABB face; the
 * recorded depth is the distance from that plane to the first hit, so
 * translating the mesh along the view axis changes nothing. The AABB
 * cross-section is fit to the image with a 5% margin, aspect preserved and
 * centered. A projection with no hit at all is an error.
 */
inline DepthImage depth_map(const TriangleMesh& mesh, View view, int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::validation, "depth_map: image dimensions must be >= 1");
  }
  const Aabb box = bounding_box(mesh);  // validates non-empty mesh
  const auto frame = detail::proj::view_frame(view);

  const double extent_u = box.extent()[frame.u_axis];
  const double extent_v = box.extent()[frame.v_axis];
  double pitch = detail::proj::kFramingMargin *
                 std::max(extent_u / width, extent_v / height);
  if (!(pitch > 0.0)) pitch = 1.0;  // degenerate cross-section, e.g. a line
  const Vec3d center = box.center();

  // Camera plane on the near AABB face; depth measured from that plane.
  const double plane = frame.ray_sign > 0 ? box.min[frame.ray_axis] : box.max[frame.ray_axis];
  const double ray_len = box.extent()[frame.ray_axis];
  const double origin_coord = plane - frame.ray_sign * (0.125 * ray_len + pitch);

  // Bin triangles over the pixels their (u,v) rectangle covers (CSR layout).
  const std::size_t pixel_count = std::size_t(width) * std::size_t(height);
  std::vector<std::uint32_t> counts(pixel_count + 1, 0);
  const auto pixel_range = [&](double lo, double hi, int limit, double c, double sign,
                               int& p0, int& p1) {
    // world = c + sign * ((p + 0.5) - limit/2) * pitch  =>  p from world
    const auto to_pixel = [&](double world) {
      return (world - c) / (sign * pitch) - 0.5 + limit / 2.0;
    };
    double a = to_pixel(lo), b = to_pixel(hi);
    if (a > b) std::swap(a, b);
    p0 = std::max(0, int(std::floor(a - 0.5)));
    p1 = std::min(limit - 1, int(std::ceil(b + 0.5)));
  };

  std::vector<std::array<int, 4>> tri_rects(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    double ulo = 1e300, uhi = -1e300, vlo = 1e300, vhi = -1e300;
    for (std::uint32_t idx : mesh.triangles[t]) {
      const Vec3d p = to_double(mesh.vertices[idx]);
      ulo = std::min(ulo, p[frame.u_axis]);
      uhi = std::max(uhi, p[frame.u_axis]);
      vlo = std::min(vlo, p[frame.v_axis]);
      vhi = std::max(vhi, p[frame.v_axis]);
    }
    int c0, c1, r0, r1;
    pixel_range(ulo, uhi, width, center[frame.u_axis], frame.u_sign, c0, c1);
    pixel_range(vlo, vhi, height, center[frame.v_axis], frame.v_sign, r0, r1);
    tri_rects[t] = {c0, c1, r0, r1};
    if (c0 > c1 || r0 > r1) continue;
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        ++counts[std::size_t(row) * std::size_t(width) + std::size_t(col) + 1];
      }
    }
  }
  for (std::size_t p = 1; p <= pixel_count; ++p) counts[p] += counts[p - 1];
  std::vector<std::uint32_t> entries(counts[pixel_count]);
  {
    std::vector<std::uint32_t> cursor(counts.begin(), counts.end() - 1);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto [c0, c1, r0, r1] = tri_rects[t];
      for (int row = r0; row <= r1; ++row) {
        for (int col = c0; col <= c1; ++col) {
          entries[cursor[std::size_t(row) * std::size_t(width) + std::size_t(col)]++] =
              std::uint32_t(t);
        }
      }
    }
  }

  std::vector<double> depths(pixel_count, std::numeric_limits<double>::infinity());
  Ray ray;
  ray.dir = {0.0, 0.0, 0.0};
  ray.dir[frame.ray_axis] = frame.ray_sign;
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const std::size_t pixel = std::size_t(row) * std::size_t(width) + std::size_t(col);
      const auto begin = entries.begin() + counts[pixel];
      const auto end = entries.begin() + counts[pixel + 1];
      if (begin == end) continue;
      ray.origin[frame.ray_axis] = origin_coord;
      ray.origin[frame.u_axis] =
          center[frame.u_axis] + frame.u_sign * ((col + 0.5) - width / 2.0) * pitch;
      ray.origin[frame.v_axis] =
          center[frame.v_axis] + frame.v_sign * ((row + 0.5) - height / 2.0) * pitch;
      double best = std::numeric_limits<double>::infinity();
      for (auto it = begin; it != end; ++it) {
        const auto& tri = mesh.triangles[*it];
        const auto hit = ray_triangle_intersect(ray, to_double(mesh.vertices[tri[0]]),
                                                to_double(mesh.vertices[tri[1]]),
                                                to_double(mesh.vertices[tri[2]]));
        if (hit) {
          const double depth = frame.ray_sign * (hit->point[frame.ray_axis] - plane);
          best = std::min(best, depth);
        }
      }
      depths[pixel] = best;
    }
  }

  DepthImage image;
  image.width = width;
  image.height = height;
  image.view = view;
  image.pixel_pitch = pitch;
  image.pixels.assign(pixel_count, 0);

  double dmin = std::numeric_limits<double>::infinity();
  double dmax = -std::numeric_limits<double>::infinity();
  for (double d : depths) {
    if (std::isfinite(d)) {
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
  }
  if (!std::isfinite(dmin)) {
    throw Error(ErrorKind::empty_result, "depth_map: empty projection (no ray hit the mesh)");
  }
  image.depth_min = dmin;
  image.depth_max = dmax;
  for (std::size_t p = 0; p < pixel_count; ++p) {
    if (!std::isfinite(depths[p])) continue;
    if (dmax == dmin) {
      image.pixels[p] = 255;  // constant depth carries no shape information
    } else {
      const long bin = 1 + std::lround((depths[p] - dmin) / (dmax - dmin) * 254.0);
      image.pixels[p] = std::uint8_t(std::clamp(bin, 1L, 255L));
    }
  }
  return image;
}

/// Three single-view depth maps stacked as interleaved RGB channels.
struct StackedViews {
  int width = 0;
  int height = 0;
  std::array<View, 3> views{View::back, View::side, View::top};
  std::vector<std::uint8_t> pixels;  // row-major, 3 channels interleaved
  std::array<DepthImage, 3> channels;
};

inline StackedViews stack_views(const TriangleMesh& mesh, std::array<View, 3> views, int width,
                                int height) {
  StackedViews stack;
  stack.width = width;
  stack.height = height;
  stack.views = views;
  for (int c = 0; c < 3; ++c) {
    stack.channels[std::size_t(c)] = depth_map(mesh, views[std::size_t(c)], width, height);
  }
  stack.pixels.resize(std::size_t(width) * std::size_t(height) * 3);
  for (std::size_t p = 0; p < std::size_t(width) * std::size_t(height); ++p) {
    for (int c = 0; c < 3; ++c) {
      stack.pixels[p * 3 + std::size_t(c)] = stack.channels[std::size_t(c)].pixels[p];
    }
  }
  return stack;
}

/// Projected area: hit-pixel count times pixel area.
inline double frontal_area(const TriangleMesh& mesh, View view, int width, int height) {
  const DepthImage image = depth_map(mesh, view, width, height);
  return double(image.hit_count()) * image.pixel_pitch * image.pixel_pitch;
}

/// C_d = 2 F_d / (rho v^2 A).
inline double drag_coefficient(double drag_force, double rho, double speed, double area) {
  if (!(rho > 0.0) || !(speed > 0.0) || !(area > 0.0)) {
    throw Error(ErrorKind::validation,
                "drag_coefficient: rho, speed, and area must be positive");
  }
  return 2.0 * drag_force / (rho * speed * speed * area);
}

/// Drag counts: C_d * 10^4, the unit for small aerodynamic differences.
inline double drag_counts(double drag_coefficient_value) {
  return drag_coefficient_value * 1e4;
}

}  // namespace morphgen
