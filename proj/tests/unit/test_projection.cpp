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

#include <doctest.h>

#include <cmath>

#include "morphgen/png_io.hpp"
#include "morphgen/projection.hpp"
#include "support/fixtures.hpp"

using namespace morphgen;
using namespace morphgen::testing;

TEST_SUITE("projector") {

TEST_CASE("top view of a cube is constant depth, mapped to bin 255") {
  const auto cube = box_mesh();
  const auto image = depth_map(cube, View::top, 64, 64);
  CHECK(image.depth_min == image.depth_max);
  std::size_t hits = 0;
  for (std::uint8_t p : image.pixels) {
    if (p != 0) {
      CHECK(p == 255);
      ++hits;
    }
  }
  CHECK(hits == image.hit_count());
  CHECK(hits > 3000);  // the square fills most of the frame
}

TEST_CASE("sphere depth map: nearest point at the center, bins 1..255 covered") {
  const auto sphere = icosphere({0.5, 0.5, 0.5}, 0.4, 4);
  const auto image = depth_map(sphere, View::side, 129, 129);
  const std::uint8_t center_bin = image.pixels[std::size_t(64) * 129 + 64];
  CHECK(center_bin == 1);
  std::uint8_t lo = 255, hi = 0;
  for (std::uint8_t p : image.pixels) {
    if (p == 0) continue;
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  CHECK(lo == 1);
  CHECK(hi == 255);
}

TEST_CASE("sphere depth map matches the analytic per-pixel oracle within one bin") {
  const Vec3d center{0.5, 0.5, 0.5};
  const double radius = 0.4;
  const auto sphere = icosphere(center, radius, 5);
  const auto image = depth_map(sphere, View::side, 384, 384);

  // Oracle: analytic depth of the true sphere on the same camera plane and
  // pixel lattice, quantized with the image's own normalization bounds.
  const Aabb box = bounding_box(sphere);
  const double pitch = image.pixel_pitch;
  std::size_t object_pixels = 0, within_one = 0;
  for (int row = 0; row < 384; ++row) {
    for (int col = 0; col < 384; ++col) {
      const std::uint8_t bin = image.pixels[std::size_t(row) * 384 + std::size_t(col)];
      if (bin == 0) continue;
      ++object_pixels;
      // side view: u = +x, v = -z, rays along +y from the min-y face.
      const double x = box.center().x + ((col + 0.5) - 192.0) * pitch;
      const double z = box.center().z - ((row + 0.5) - 192.0) * pitch;
      const double dx = x - center.x, dz = z - center.z;
      const double rho2 = dx * dx + dz * dz;
      if (rho2 >= radius * radius) continue;  // rim pixel the facets covered
      const double depth = (center.y - std::sqrt(radius * radius - rho2)) - box.min.y;
      const long oracle_bin =
          1 + std::lround((depth - image.depth_min) / (image.depth_max - image.depth_min) * 254.0);
      if (std::abs(long(bin) - oracle_bin) <= 1) ++within_one;
    }
  }
  CHECK(object_pixels > 50000);
  CHECK(double(within_one) >= 0.99 * double(object_pixels));
}

TEST_CASE("stacked views keep channel order and split back bit-exactly") {
  const auto sphere = icosphere({0.2, 0.7, -0.4}, 0.3, 3);
  const std::array<View, 3> views{View::back, View::side, View::top};
  const auto stack = stack_views(sphere, views, 96, 96);
  for (int c = 0; c < 3; ++c) {
    const auto single = depth_map(sphere, views[std::size_t(c)], 96, 96);
    REQUIRE(single.pixels.size() == std::size_t(96) * 96);
    for (std::size_t p = 0; p < single.pixels.size(); ++p) {
      CHECK(stack.pixels[p * 3 + std::size_t(c)] == single.pixels[p]);
    }
    CHECK(stack.channels[std::size_t(c)].depth_min == single.depth_min);
  }
}

TEST_CASE("left view mirrors the side view for a y-symmetric mesh") {
  const auto cube = box_mesh({0.0f, -0.5f, 0.0f}, {2.0f, 0.5f, 1.0f});
  const auto side = depth_map(cube, View::side, 64, 48);
  const auto left = depth_map(cube, View::left, 64, 48);
  for (int row = 0; row < 48; ++row) {
    for (int col = 0; col < 64; ++col) {
      CHECK(left.pixels[std::size_t(row) * 64 + std::size_t(col)] ==
            side.pixels[std::size_t(row) * 64 + std::size_t(63 - col)]);
    }
  }
}

TEST_CASE("translating the mesh along the view axis changes no pixels") {
  const auto sphere = icosphere({0.5, 0.5, 0.5}, 0.3, 3);
  auto shifted = sphere;
  for (auto& v : shifted.vertices) v.y += 2.0f;  // exact in binary float
  const auto a = depth_map(sphere, View::side, 80, 80);
  const auto b = depth_map(shifted, View::side, 80, 80);
  CHECK(a.pixels == b.pixels);
}

TEST_CASE("frontal areas of a cube and a sphere") {
  const auto cube = box_mesh();
  CHECK(frontal_area(cube, View::front, 256, 256) == doctest::Approx(1.0).epsilon(0.02));

  const double r = 0.4;
  const auto sphere = icosphere({0.5, 0.5, 0.5}, r, 4);
  CHECK(frontal_area(sphere, View::front, 256, 256) ==
        doctest::Approx(M_PI * r * r).epsilon(0.02));
}

TEST_CASE("frontal area error shrinks as resolution doubles on a convex shape") {
  const double r = 0.37;
  const auto sphere = icosphere({0.5, 0.5, 0.5}, r, 5);
  const double exact = M_PI * r * r;
  double previous_error = 1e300;
  for (int res : {64, 128, 256, 512}) {
    const double error = std::abs(frontal_area(sphere, View::front, res, res) - exact);
    CHECK(error < previous_error);
    previous_error = error;
  }
}

TEST_CASE("empty projection is an error") {
  // A single triangle in the plane z = const is invisible edge-on.
  const auto flat = mesh_from_triangles({{Vec3f{0, 0, 0.5f}, Vec3f{1, 0, 0.5f}, Vec3f{0, 1, 0.5f}}});
  CHECK_THROWS_AS((void)depth_map(flat, View::side, 32, 32), Error);
  CHECK_NOTHROW((void)depth_map(flat, View::top, 32, 32));
}

TEST_CASE("drag utilities") {
  CHECK(drag_coefficient(0.0, 1.2, 38.0, 2.2) == 0.0);
  CHECK(drag_coefficient(500.0, 1.2, 38.0, 2.2) ==
        doctest::Approx(2.0 * 500.0 / (1.2 * 38.0 * 38.0 * 2.2)).epsilon(1e-12));
  // Doubling speed quarters the coefficient at fixed force.
  CHECK(drag_coefficient(500.0, 1.2, 76.0, 2.2) ==
        doctest::Approx(drag_coefficient(500.0, 1.2, 38.0, 2.2) / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)drag_coefficient(1.0, 0.0, 38.0, 2.2), Error);

  CHECK(drag_counts(0.025) == doctest::Approx(250.0).epsilon(1e-12));
  CHECK(drag_counts(0.0) == 0.0);
  CHECK(drag_counts(0.3001) - drag_counts(0.2977) == doctest::Approx(24.0).epsilon(1e-9));
}

TEST_CASE("PNG encoding produces a well-formed, deterministic file") {
  const auto sphere = icosphere({0.5, 0.5, 0.5}, 0.35, 3);
  const auto image = depth_map(sphere, View::top, 48, 48);
  const auto png = encode_png(48, 48, 1, image.pixels);
  // Signature and chunk skeleton.
  const std::uint8_t signature[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  for (int i = 0; i < 8; ++i) CHECK(png[std::size_t(i)] == signature[i]);
  CHECK(std::string(png.begin() + 12, png.begin() + 16) == "IHDR");
  CHECK(std::string(png.end() - 8, png.end() - 4) == "IEND");
  CHECK(encode_png(48, 48, 1, image.pixels) == png);

  const auto stack = stack_views(sphere, {View::back, View::side, View::top}, 32, 32);
  CHECK_NOTHROW((void)encode_png(32, 32, 3, stack.pixels));
  CHECK_THROWS_AS((void)encode_png(32, 32, 2, stack.pixels), Error);
}

}  // TEST_SUITE
