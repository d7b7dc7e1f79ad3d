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
#include <string>

#include "morphgen/stl_io.hpp"
#include "support/fixtures.hpp"

using namespace morphgen;
using namespace morphgen::testing;

namespace {

std::vector<std::uint8_t> binary_stl_bytes(const TriangleMesh& mesh, std::uint32_t declared_count) {
  auto bytes = save_stl(mesh);
  // Patch the declared triangle count to build truncated fixtures.
  bytes[80] = std::uint8_t(declared_count & 0xFF);
  bytes[81] = std::uint8_t((declared_count >> 8) & 0xFF);
  bytes[82] = std::uint8_t((declared_count >> 16) & 0xFF);
  bytes[83] = std::uint8_t((declared_count >> 24) & 0xFF);
  return bytes;
}

}  // namespace

TEST_SUITE("mesh_io") {

TEST_CASE("binary STL with one triangle loads as one triangle, three vertices") {
  const auto mesh =
      mesh_from_triangles({{Vec3f{0, 0, 0}, Vec3f{1, 0, 0}, Vec3f{0, 1, 0}}});
  const auto bytes = save_stl(mesh);
  CHECK(bytes.size() == 134);  // 80 header + 4 count + 50

  const auto loaded = load_stl(bytes);
  CHECK(loaded.triangle_count() == 1);
  CHECK(loaded.vertex_count() == 3);
  CHECK(loaded.vertices[0] == Vec3f{0, 0, 0});
  CHECK(loaded.vertices[1] == Vec3f{1, 0, 0});
  CHECK(loaded.vertices[2] == Vec3f{0, 1, 0});
}

TEST_CASE("ASCII STL of a unit cube loads 12 facets") {
  const auto cube = box_mesh();
  const auto bytes = ascii_stl_bytes(cube);
  const auto loaded = load_stl(bytes);
  CHECK(loaded.triangle_count() == 12);
}

TEST_CASE("ASCII parse errors carry a byte offset") {
  const std::string text = "solid t\n facet normal 0 0 0\n outer loop\n vertex 0 0 zero\n";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  CHECK_THROWS_WITH_AS(load_stl(bytes), doctest::Contains("byte"), Error);
}

TEST_CASE("binary STL declaring 5 triangles but holding 3 fails at offset 84 + 3*50") {
  const auto mesh = mesh_from_triangles({
      {Vec3f{0, 0, 0}, Vec3f{1, 0, 0}, Vec3f{0, 1, 0}},
      {Vec3f{0, 0, 1}, Vec3f{1, 0, 1}, Vec3f{0, 1, 1}},
      {Vec3f{0, 0, 2}, Vec3f{1, 0, 2}, Vec3f{0, 1, 2}},
  });
  const auto bytes = binary_stl_bytes(mesh, 5);
  CHECK_THROWS_WITH_AS(load_stl(bytes), doctest::Contains("byte 234"), Error);
}

TEST_CASE("round trip of the unit cube reproduces the soup exactly, in order") {
  const auto cube = box_mesh();
  const auto reloaded = load_stl(save_stl(cube));
  REQUIRE(reloaded.triangle_count() == cube.triangle_count());
  for (std::size_t t = 0; t < cube.triangles.size(); ++t) {
    for (int v = 0; v < 3; ++v) {
      CHECK(reloaded.vertices[reloaded.triangles[t][std::size_t(v)]] ==
            cube.vertices[cube.triangles[t][std::size_t(v)]]);
    }
  }
}

TEST_CASE("saving a mesh with a NaN vertex is a validation error") {
  auto mesh = mesh_from_triangles({{Vec3f{0, 0, 0}, Vec3f{1, 0, 0}, Vec3f{0, 1, 0}}});
  mesh.vertices[1].y = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS((void)save_stl(mesh), Error);
}

TEST_CASE("load-save identity on random soups") {
  std::mt19937_64 rng(20260808);
  std::uniform_real_distribution<float> coord(-10.0f, 10.0f);
  std::uniform_int_distribution<int> count(1, 40);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::array<Vec3f, 3>> tris(std::size_t(count(rng)));
    for (auto& t : tris) {
      for (auto& v : t) v = {coord(rng), coord(rng), coord(rng)};
    }
    const auto mesh = mesh_from_triangles(tris);
    const auto bytes = save_stl(mesh);
    const auto reloaded = load_stl(bytes);
    CHECK(save_stl(reloaded) == bytes);
  }
}

TEST_CASE("optional welding merges shared cube corners") {
  const auto cube = box_mesh();
  const auto welded = load_stl(save_stl(cube), StlLoadOptions{.weld_vertices = true});
  CHECK(welded.vertex_count() == 8);
  CHECK(welded.triangle_count() == 12);
}

TEST_CASE("bounding box") {
  SUBCASE("unit cube") {
    const auto box = bounding_box(box_mesh());
    CHECK(box.min == Vec3d{0, 0, 0});
    CHECK(box.max == Vec3d{1, 1, 1});
  }
  SUBCASE("point-degenerate triangle") {
    const auto mesh = mesh_from_triangles({{Vec3f{2, 3, 4}, Vec3f{2, 3, 4}, Vec3f{2, 3, 4}}});
    const auto box = bounding_box(mesh);
    CHECK(box.min == Vec3d{2, 3, 4});
    CHECK(box.max == Vec3d{2, 3, 4});
  }
  SUBCASE("two disjoint triangles take the hull of both") {
    const auto mesh = mesh_from_triangles({
        {Vec3f{-1, -2, -3}, Vec3f{0, -2, -3}, Vec3f{-1, 0, -3}},
        {Vec3f{5, 6, 7}, Vec3f{4, 6, 7}, Vec3f{5, 5, 7}},
    });
    // Oracle: componentwise min/max over all vertices.
    Vec3d lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const auto& v : mesh.vertices) {
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], double(v[a]));
        hi[a] = std::max(hi[a], double(v[a]));
      }
    }
    const auto box = bounding_box(mesh);
    CHECK(box.min == lo);
    CHECK(box.max == hi);
  }
  SUBCASE("empty mesh is an error") {
    CHECK_THROWS_AS((void)bounding_box(TriangleMesh{}), Error);
  }
}

}  // TEST_SUITE
