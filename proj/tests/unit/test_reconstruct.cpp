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

#include "morphgen/edt.hpp"
#include "morphgen/interpolate.hpp"
#include "morphgen/morphology.hpp"
#include "morphgen/reconstruct.hpp"
#include "morphgen/voxelize.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace morphgen;
using namespace morphgen::testing;

namespace {

GridSpec cube_spec(std::uint32_t n) {
  return make_grid(Aabb{{0, 0, 0}, {1, 1, 1}}, {n, n, n}, 0.0);
}

}  // namespace

TEST_SUITE("reconstructor") {

TEST_CASE("extract_band") {
  SUBCASE("constant field far from zero has an empty band") {
    const ScalarField field(cube_spec(4), 5.0f);
    CHECK_THROWS_WITH_AS((void)extract_band(field, 1.0), doctest::Contains("no interface"), Error);
  }
  SUBCASE("plane SDF band matches the direct threshold") {
    const auto spec = cube_spec(16);
    ScalarField field(spec);
    for (std::uint32_t k = 0; k < 16; ++k) {
      for (std::uint32_t j = 0; j < 16; ++j) {
        for (std::uint32_t i = 0; i < 16; ++i) {
          field.at(i, j, k) = float((spec.voxel_center(i, j, k).z - 0.47) / spec.spacing.z);
        }
      }
    }
    const double epsilon = 1.5;
    const auto band = extract_band(field, epsilon);
    for (std::size_t linear = 0; linear < field.values.size(); ++linear) {
      CHECK(band.get(linear) == (std::abs(double(field.values[linear])) <= epsilon));
    }
  }
  SUBCASE("huge epsilon marks every voxel") {
    const auto field = ball_field(cube_spec(8), {0.5, 0.5, 0.5}, 0.3);
    const auto band = extract_band(field, 1e30);
    CHECK(band.count() == field.spec.voxel_count());
  }
  SUBCASE("epsilon must be positive") {
    const ScalarField field(cube_spec(4), 0.0f);
    CHECK_THROWS_AS((void)extract_band(field, 0.0), Error);
  }
}

TEST_CASE("smooth-sdf reconstruction of a ball is watertight and accurate") {
  const auto spec = cube_spec(64);
  const auto field = ball_field(spec, {0.5, 0.5, 0.5}, 0.35);
  const auto mesh = reconstruct(field, {});
  CHECK(watertight_check(mesh).watertight);
  const double hausdorff = hausdorff_to_sphere(mesh, {0.5, 0.5, 0.5}, 0.35, spec.spacing.x, 8000);
  CHECK(hausdorff <= 2.0 * spec.spacing.x);
}

TEST_CASE("binary-band reconstruction is watertight; smoothing reduces deviation") {
  const auto spec = cube_spec(48);
  const auto field = ball_field(spec, {0.5, 0.5, 0.5}, 0.33);

  ReconstructionConfig raw;
  raw.iso_mode = IsoMode::binary_band;
  raw.epsilon = 1.0;
  raw.smoothing_iters = 0;
  const auto stair_stepped = reconstruct(field, raw);
  CHECK(watertight_check(stair_stepped).watertight);

  ReconstructionConfig smoothed = raw;
  smoothed.smoothing_lambda = 0.5;
  smoothed.smoothing_iters = 10;
  const auto relaxed = reconstruct(field, smoothed);

  // The band shell has two sheets about epsilon either side of the surface;
  // smoothing pulls both toward the sphere.
  const auto max_deviation = [&](const TriangleMesh& m) {
    double worst = 0.0;
    for (const auto& v : m.vertices) {
      worst = std::max(worst, std::abs(norm(to_double(v) - Vec3d{0.5, 0.5, 0.5}) - 0.33));
    }
    return worst;
  };
  CHECK(max_deviation(relaxed) < max_deviation(stair_stepped));
}

TEST_CASE("interpolated nested-ball field reconstructs to a single closed component") {
  const auto spec = cube_spec(32);
  std::vector<ScalarField> fields;
  fields.push_back(signed_distance(ball_grid(spec, {0.5, 0.5, 0.5}, 0.2)));
  fields.push_back(signed_distance(ball_grid(spec, {0.5, 0.5, 0.5}, 0.35)));
  const auto blend = interpolate(fields, validate_weights(std::vector<double>{0.5, 0.5}));
  const auto mesh = reconstruct(blend, {});
  CHECK(watertight_check(mesh).watertight);
  CHECK(connected_component_count(mesh) == 1);
}

TEST_CASE("full round trip: mesh -> voxels -> fill -> SDF -> reconstruct") {
  const auto sphere = icosphere({0.5, 0.5, 0.5}, 0.4, 4);
  const auto spec = make_grid(Aabb{{0, 0, 0}, {1, 1, 1}}, {64, 64, 64}, 0.0);
  const auto shell = voxelize(sphere, spec);
  const auto solid = fill_holes(shell, 2);
  const auto phi = signed_distance(solid);
  const auto mesh = reconstruct(phi, {});

  CHECK(watertight_check(mesh).watertight);
  const double pitch = spec.spacing.x;
  const double hausdorff = hausdorff_to_sphere(mesh, {0.5, 0.5, 0.5}, 0.4, pitch, 8000);
  CHECK(hausdorff <= 2.0 * pitch);
  CHECK(signed_volume(mesh) ==
        doctest::Approx(4.0 / 3.0 * M_PI * 0.4 * 0.4 * 0.4).epsilon(0.05));
}

TEST_CASE("config validation") {
  const ScalarField field(cube_spec(4), 0.0f);
  ReconstructionConfig bad;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS((void)reconstruct(field, bad), Error);
  bad = {};
  bad.smoothing_lambda = 1.0;
  CHECK_THROWS_AS((void)reconstruct(field, bad), Error);
  bad = {};
  bad.smoothing_iters = -2;
  CHECK_THROWS_AS((void)reconstruct(field, bad), Error);
}

}  // TEST_SUITE
