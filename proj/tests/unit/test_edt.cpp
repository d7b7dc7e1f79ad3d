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
#include <random>

#include "morphgen/edt.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace morphgen;
using namespace morphgen::testing;

namespace {

GridSpec cube_spec(std::uint32_t n) {
  return make_grid(Aabb{{0, 0, 0}, {1, 1, 1}}, {n, n, n}, 0.0);
}

}  // namespace

TEST_SUITE("sdf_field") {

TEST_CASE("single set voxel in a sea of zeros has distance 1") {
  BinaryGrid grid(cube_spec(5));
  grid.set(2, 2, 2);
  const auto field = edt(grid);
  for (std::size_t linear = 0; linear < field.values.size(); ++linear) {
    if (linear == grid.spec.index(2, 2, 2)) {
      CHECK(field.values[linear] == 1.0f);
    } else {
      CHECK(field.values[linear] == 0.0f);
    }
  }
}

TEST_CASE("half-space of ones ramps linearly away from the interface") {
  BinaryGrid grid(cube_spec(8));
  for (std::uint32_t k = 0; k < 8; ++k) {
    for (std::uint32_t j = 0; j < 8; ++j) {
      for (std::uint32_t i = 0; i < 4; ++i) grid.set(i, j, k);
    }
  }
  const auto field = edt(grid);
  CHECK(field.at(3, 4, 4) == 1.0f);
  CHECK(field.at(2, 4, 4) == 2.0f);
  CHECK(field.at(1, 4, 4) == 3.0f);
  CHECK(field.at(0, 4, 4) == 4.0f);
  CHECK(field.at(4, 4, 4) == 0.0f);
}

TEST_CASE("all-ones grid is the +inf sentinel") {
  BinaryGrid grid(cube_spec(4));
  for (std::size_t linear = 0; linear < grid.spec.voxel_count(); ++linear) grid.set(linear);
  const auto field = edt(grid);
  for (float v : field.values) CHECK(std::isinf(v));
}

TEST_CASE("edt matches the all-pairs oracle exactly on random grids") {
  std::mt19937_64 rng(20260101);
  std::bernoulli_distribution bit(0.35);
  for (int trial = 0; trial < 10; ++trial) {
    BinaryGrid grid(cube_spec(16));
    for (std::size_t linear = 0; linear < grid.spec.voxel_count(); ++linear) {
      if (bit(rng)) grid.set(linear);
    }
    const auto field = edt(grid);
    const auto expected = brute_force_edt(grid);
    REQUIRE(field.values.size() == expected.size());
    for (std::size_t linear = 0; linear < expected.size(); ++linear) {
      CHECK(field.values[linear] == expected[linear]);  // zero tolerance
    }
  }
}

TEST_CASE("signed distance of a centered ball") {
  const auto spec = cube_spec(32);
  const auto solid = ball_grid(spec, {0.5, 0.5, 0.5}, 0.25);  // radius 8 voxels
  const auto phi = signed_distance(solid);

  SUBCASE("sign matches the solid exactly") {
    for (std::size_t linear = 0; linear < phi.values.size(); ++linear) {
      CHECK((phi.values[linear] > 0.0f) == solid.get(linear));
      CHECK(phi.values[linear] != 0.0f);
    }
  }
  SUBCASE("center is about +8 voxels, corner about -(corner distance - 8)") {
    CHECK(double(phi.at(16, 16, 16)) == doctest::Approx(8.0).epsilon(0.15));
    const double corner_dist = norm(spec.voxel_center(0, 0, 0) - Vec3d{0.5, 0.5, 0.5}) / spec.spacing.x;
    CHECK(double(phi.at(0, 0, 0)) == doctest::Approx(-(corner_dist - 8.0)).epsilon(0.15));
  }
  SUBCASE("voxels adjacent to the interface have |phi| = 1") {
    std::size_t checked = 0;
    for (std::uint32_t k = 1; k < 31; ++k) {
      for (std::uint32_t j = 1; j < 31; ++j) {
        for (std::uint32_t i = 1; i < 31; ++i) {
          const bool inside = solid.get(i, j, k);
          const bool has_opposite = solid.get(i + 1, j, k) != inside ||
                                    solid.get(i - 1, j, k) != inside ||
                                    solid.get(i, j + 1, k) != inside ||
                                    solid.get(i, j - 1, k) != inside ||
                                    solid.get(i, j, k + 1) != inside ||
                                    solid.get(i, j, k - 1) != inside;
          if (has_opposite) {
            CHECK(std::abs(phi.at(i, j, k)) == 1.0f);
            ++checked;
          }
        }
      }
    }
    CHECK(checked > 500);
  }
  SUBCASE("discrete eikonal bound holds between neighbors") {
    for (std::uint32_t k = 0; k < 31; ++k) {
      for (std::uint32_t j = 0; j < 31; ++j) {
        for (std::uint32_t i = 0; i < 31; ++i) {
          CHECK(std::abs(phi.at(i, j, k) - phi.at(i + 1, j, k)) <= 3.0f);
          CHECK(std::abs(phi.at(i, j, k) - phi.at(i, j + 1, k)) <= 3.0f);
          CHECK(std::abs(phi.at(i, j, k) - phi.at(i, j, k + 1)) <= 3.0f);
        }
      }
    }
  }
}

TEST_CASE("signed distance rejects degenerate and anisotropic inputs") {
  BinaryGrid empty(cube_spec(4));
  CHECK_THROWS_AS((void)signed_distance(empty), Error);

  BinaryGrid full(cube_spec(4));
  for (std::size_t linear = 0; linear < full.spec.voxel_count(); ++linear) full.set(linear);
  CHECK_THROWS_AS((void)signed_distance(full), Error);

  auto aniso = make_grid(Aabb{{0, 0, 0}, {2, 1, 1}}, {8, 8, 8}, 0.0);
  BinaryGrid grid(aniso);
  grid.set(4, 4, 4);
  CHECK_THROWS_AS((void)signed_distance(grid), Error);
}

TEST_CASE("MGSF field files round-trip bit-exactly") {
  const auto spec = cube_spec(9);
  const auto solid = ball_grid(spec, {0.5, 0.5, 0.5}, 0.3);
  const auto phi = signed_distance(solid);
  const auto decoded = decode_field(encode_field(phi));
  CHECK(decoded == phi);
}

}  // TEST_SUITE
