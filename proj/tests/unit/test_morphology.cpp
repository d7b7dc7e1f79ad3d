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

#include "morphgen/morphology.hpp"
#include "morphgen/voxelize.hpp"
#include "support/fixtures.hpp"

using namespace morphgen;
using namespace morphgen::testing;

namespace {

GridSpec cube_spec(std::uint32_t n) {
  return make_grid(Aabb{{0, 0, 0}, {1, 1, 1}}, {n, n, n}, 0.0);
}

// 3^3 solid block centered in an 8^3 grid, with the middle voxel hollow.
BinaryGrid hollow_block() {
  BinaryGrid grid(cube_spec(8));
  for (std::uint32_t k = 3; k <= 5; ++k) {
    for (std::uint32_t j = 3; j <= 5; ++j) {
      for (std::uint32_t i = 3; i <= 5; ++i) grid.set(i, j, k);
    }
  }
  grid.set(4, 4, 4, false);
  return grid;
}

bool contains(const BinaryGrid& super, const BinaryGrid& sub) {
  for (std::size_t w = 0; w < sub.words.size(); ++w) {
    if ((sub.words[w] & ~super.words[w]) != 0) return false;
  }
  return true;
}

BinaryGrid random_blob_grid(std::mt19937_64& rng, std::uint32_t n) {
  BinaryGrid grid(cube_spec(n));
  std::uniform_int_distribution<std::uint32_t> pos(1, n - 2);
  std::uniform_int_distribution<int> blobs(2, 6);
  const int count = blobs(rng);
  for (int b = 0; b < count; ++b) {
    const std::uint32_t ci = pos(rng), cj = pos(rng), ck = pos(rng);
    grid.set(ci, cj, ck);
  }
  return dilate(grid, 1);
}

}  // namespace

TEST_SUITE("sdf_field") {

TEST_CASE("enclosed void is filled") {
  const auto grid = hollow_block();
  SUBCASE("with no dilation") {
    const auto filled = fill_holes(grid, 0);
    CHECK(filled.get(4, 4, 4));
    CHECK(filled.count() == 27);
  }
  SUBCASE("with the default two dilations") {
    const auto filled = fill_holes(grid, 2);
    CHECK(filled.get(4, 4, 4));
    CHECK(contains(filled, grid));
  }
}

TEST_CASE("a channel to the boundary stays open without dilation") {
  auto grid = hollow_block();
  // Drill a straight 1-voxel channel from the hollow center to the boundary.
  grid.set(3, 4, 4, false);
  for (std::uint32_t i = 0; i <= 3; ++i) grid.set(i, 4, 4, false);
  const auto filled = fill_holes(grid, 0);
  CHECK_FALSE(filled.get(4, 4, 4));
  CHECK_FALSE(filled.get(3, 4, 4));
  // With dilation 1 the 1-voxel channel seals and the void fills.
  const auto sealed = fill_holes(grid, 1);
  CHECK(sealed.get(4, 4, 4));
}

TEST_CASE("all-zero grid stays all-zero") {
  BinaryGrid grid(cube_spec(8));
  CHECK(fill_holes(grid, 0).count() == 0);
  CHECK(fill_holes(grid, 2).count() == 0);
}

TEST_CASE("pinhole in a voxelized shell seals at dilation 2") {
  const auto cube = box_mesh({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75});
  const auto spec = cube_spec(16);
  auto shell = voxelize(cube, spec);
  shell.set(8, 8, 4, false);  // puncture the bottom face
  const auto leaky = fill_holes(shell, 0);
  CHECK_FALSE(leaky.get(8, 8, 8));  // interior leaked
  const auto sealed = fill_holes(shell, 2);
  CHECK(sealed.get(8, 8, 8));
}

TEST_CASE("fill_holes is monotone and idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto grid = random_blob_grid(rng, 12);
    for (int iters : {0, 1, 2}) {
      const auto once = fill_holes(grid, iters);
      CHECK(contains(once, grid));
      const auto twice = fill_holes(once, iters);
      CHECK(twice == once);
    }
  }
}

TEST_CASE("fill_holes on spec fixtures is idempotent") {
  const auto grid = hollow_block();
  for (int iters : {0, 2}) {
    const auto once = fill_holes(grid, iters);
    CHECK(fill_holes(once, iters) == once);
  }
  CHECK_THROWS_AS((void)fill_holes(grid, -1), Error);
}

TEST_CASE("a shell near the grid boundary does not shadow the voxels behind it") {
  // Sphere shell whose gap to the grid floor equals the dilation count: the
  // flood must still invade underneath instead of filling a pancake.
  const auto sphere = icosphere({0.5, 0.5, 0.5}, 0.35, 3);
  const auto spec = make_grid(Aabb{{0.15, 0.15, 0.15}, {0.85, 0.85, 0.85}}, {32, 32, 32}, 0.05);
  const auto shell = voxelize(sphere, spec);
  const auto filled = fill_holes(shell, 2);
  // No pinholes here, so dilation must not change the answer.
  CHECK(filled == fill_holes(shell, 0));
  int bottom = 0;
  for (std::uint32_t j = 0; j < 32; ++j) {
    for (std::uint32_t i = 0; i < 32; ++i) bottom += filled.get(i, j, 0) ? 1 : 0;
  }
  CHECK(bottom == 0);
}

TEST_CASE("component counting") {
  BinaryGrid grid(cube_spec(8));
  CHECK(count_components(grid) == 0);
  grid.set(1, 1, 1);
  grid.set(1, 1, 2);  // 6-connected with the first
  grid.set(5, 5, 5);
  CHECK(count_components(grid) == 2);
  grid.set(4, 4, 4);  // diagonal to (5,5,5): not 6-connected
  CHECK(count_components(grid) == 3);
}

}  // TEST_SUITE
