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

#include <random>

#include "morphgen/raycast.hpp"
#include "support/oracles.hpp"

using namespace morphgen;
using namespace morphgen::testing;

TEST_SUITE("voxelizer") {

TEST_CASE("axis-aligned hit lands at t = 1") {
  const Ray ray{{0.25, 0.25, -1.0}, {0.0, 0.0, 1.0}};
  const auto hit = ray_triangle_intersect(ray, {0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  REQUIRE(hit.has_value());
  CHECK(hit->t == doctest::Approx(1.0));
  CHECK(hit->point.x == doctest::Approx(0.25));
  CHECK(hit->point.y == doctest::Approx(0.25));
  CHECK(hit->point.z == doctest::Approx(0.0));
}

TEST_CASE("ray parallel to the triangle plane misses") {
  const Ray ray{{0.25, 0.25, -1.0}, {1.0, 0.0, 0.0}};
  CHECK_FALSE(ray_triangle_intersect(ray, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}).has_value());
}

TEST_CASE("triangle behind the origin misses") {
  const Ray ray{{0.25, 0.25, 1.0}, {0.0, 0.0, 1.0}};
  CHECK_FALSE(ray_triangle_intersect(ray, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}).has_value());
}

TEST_CASE("make_ray normalizes and rejects zero directions") {
  const Ray ray = make_ray({0, 0, 0}, {0, 0, 5});
  CHECK(norm(ray.dir) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)make_ray({0, 0, 0}, {0, 0, 0}), Error);
}

TEST_CASE("random ray/triangle pairs agree with the plane+barycentric oracle") {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  int hits = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const Vec3d a{coord(rng), coord(rng), coord(rng)};
    const Vec3d b{coord(rng), coord(rng), coord(rng)};
    const Vec3d c{coord(rng), coord(rng), coord(rng)};
    Vec3d dir{coord(rng), coord(rng), coord(rng)};
    const double len = norm(dir);
    if (len < 1e-6) continue;
    const Ray ray{{coord(rng), coord(rng), coord(rng)}, dir / len};

    const auto got = ray_triangle_intersect(ray, a, b, c);
    const auto expected = ray_triangle_oracle(ray, a, b, c);
    REQUIRE(got.has_value() == expected.has_value());
    if (got) {
      ++hits;
      CHECK(got->t == doctest::Approx(*expected).epsilon(1e-9));
    }
  }
  CHECK(hits > 500);  // the sample actually exercises the hit path
}

}  // TEST_SUITE
