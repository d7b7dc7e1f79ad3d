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
#include <set>

#include "morphgen/sampling.hpp"

using namespace morphgen;

TEST_SUITE("sampler") {

TEST_CASE("lattice point counts match the closed form") {
  CHECK(simplex_grid(3, 50).points.size() == 1275);
  CHECK(simplex_grid(3, 8).points.size() == 36);
  CHECK(simplex_grid(4, 5).points.size() == 35);  // C(4+3, 3)

  const auto vertices = simplex_grid(3, 2);
  REQUIRE(vertices.points.size() == 3);
  for (const auto& point : vertices.points) {
    int ones = 0;
    for (double w : point.weights.values) ones += w == 1.0 ? 1 : 0;
    CHECK(ones == 1);
  }
}

TEST_CASE("lattice points are distinct, ordered, and contiguously numbered") {
  const auto plan = simplex_grid(3, 12);
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    CHECK(plan.points[i].id == int(i));
    CHECK(seen.insert(plan.points[i].weights.values).second);
  }
  // Ascending lexicographic integer tuples: the first point is (0,0,m)/m.
  CHECK(plan.points.front().weights[0] == 0.0);
  CHECK(plan.points.front().weights[2] == 1.0);
  CHECK(plan.points.back().weights[0] == 1.0);
  CHECK_THROWS_AS((void)simplex_grid(3, 1), Error);
  CHECK_THROWS_AS((void)simplex_grid(1, 4), Error);
}

TEST_CASE("random plans satisfy the constraints and reproduce by seed") {
  const auto plan = random_plan(3, 200, 42);
  for (const auto& point : plan.points) {
    double sum = 0.0;
    for (double w : point.weights.values) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto again = random_plan(3, 200, 42);
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    CHECK(plan.points[i].weights.values == again.points[i].weights.values);
  }
  const auto other = random_plan(3, 200, 43);
  bool any_different = false;
  for (std::size_t i = 0; i < plan.points.size() && !any_different; ++i) {
    any_different = plan.points[i].weights.values != other.points[i].weights.values;
  }
  CHECK(any_different);
}

TEST_CASE("random barycentric sampling is flat: coordinate means approach 1/3") {
  const auto plan = random_plan(3, 100000, 7);
  double mean[3] = {0, 0, 0};
  for (const auto& point : plan.points) {
    for (int c = 0; c < 3; ++c) mean[c] += point.weights[std::size_t(c)];
  }
  for (double& m : mean) m /= double(plan.points.size());
  // Dirichlet(1,1,1) moments: E[w_i] = 1/3.
  for (double m : mean) CHECK(m == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("map coordinates") {
  CHECK(to_cartesian(BarycentricWeights{{1, 0, 0}}) == Vec2d{0.0, 0.0});
  CHECK(to_cartesian(BarycentricWeights{{0, 1, 0}}) == Vec2d{1.0, 0.0});
  const auto top = to_cartesian(BarycentricWeights{{0, 0, 1}});
  CHECK(top.x == doctest::Approx(0.5));
  CHECK(top.y == doctest::Approx(std::sqrt(3.0) / 2.0));

  const auto centroid = to_cartesian(BarycentricWeights{{1.0 / 3, 1.0 / 3, 1.0 / 3}});
  CHECK(centroid.x == doctest::Approx(0.5));
  CHECK(centroid.y == doctest::Approx(std::sqrt(3.0) / 6.0));  // ~0.2887

  CHECK_THROWS_AS((void)to_cartesian(BarycentricWeights{{0.5, 0.5}}), Error);
}

TEST_CASE("to_cartesian round-trips and is affine") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = unit(rng), b = unit(rng), c = unit(rng);
    const double sum = a + b + c;
    const BarycentricWeights w{{a / sum, b / sum, c / sum}};
    const auto p = to_cartesian(w);
    const auto back = from_cartesian(p);
    for (int i = 0; i < 3; ++i) {
      CHECK(back[std::size_t(i)] == doctest::Approx(w[std::size_t(i)]).epsilon(1e-12));
    }
  }
  const BarycentricWeights w1{{0.6, 0.3, 0.1}};
  const BarycentricWeights w2{{0.1, 0.2, 0.7}};
  const double alpha = 0.3;
  BarycentricWeights mix{{0, 0, 0}};
  for (int i = 0; i < 3; ++i) {
    mix.values[std::size_t(i)] = alpha * w1[std::size_t(i)] + (1 - alpha) * w2[std::size_t(i)];
  }
  const auto lhs = to_cartesian(mix);
  const auto p1 = to_cartesian(w1);
  const auto p2 = to_cartesian(w2);
  CHECK(lhs.x == doctest::Approx(alpha * p1.x + (1 - alpha) * p2.x).epsilon(1e-14));
  CHECK(lhs.y == doctest::Approx(alpha * p1.y + (1 - alpha) * p2.y).epsilon(1e-14));
}

TEST_CASE("incircle split partitions the plan with the centroid inside") {
  const auto plan = simplex_grid(3, 50);
  const auto [train, test] = incircle_split(plan);
  CHECK(train.points.size() + test.points.size() == plan.points.size());

  // Brute-force recount with the same center/radius.
  const Vec2d center{0.5, std::sqrt(3.0) / 6.0};
  const double radius = std::sqrt(3.0) / 6.0;
  std::size_t inside = 0;
  for (const auto& point : plan.points) {
    inside += distance(to_cartesian(point.weights), center) <= radius ? 1 : 0;
  }
  CHECK(train.points.size() == inside);

  // Centroid trains (taking a lattice that contains it exactly), vertices test.
  const auto [train4, test4] = incircle_split(simplex_grid(3, 4));
  bool centroid_in_train = false;
  for (const auto& point : train4.points) {
    if (point.weights[0] == point.weights[1] && point.weights[1] == point.weights[2]) {
      centroid_in_train = true;
    }
  }
  CHECK(centroid_in_train);
  for (const auto& point : test.points) {
    CHECK(distance(*point.map_xy, center) > radius);
  }
  for (const auto& plan_side : {train, test}) {
    for (std::size_t i = 0; i < plan_side.points.size(); ++i) {
      CHECK(plan_side.points[i].id == int(i));
    }
  }
}

TEST_CASE("distance to corners") {
  const auto d_vertex = distance_to_vertices(BarycentricWeights{{1, 0, 0}});
  CHECK(d_vertex[0] == doctest::Approx(0.0));
  CHECK(d_vertex[1] == doctest::Approx(1.0));
  CHECK(d_vertex[2] == doctest::Approx(1.0));

  const auto d_centroid = distance_to_vertices(BarycentricWeights{{1.0 / 3, 1.0 / 3, 1.0 / 3}});
  for (double d : d_centroid) CHECK(d == doctest::Approx(std::sqrt(3.0) / 3.0));

  const auto d_mid = distance_to_vertices(BarycentricWeights{{0.5, 0.5, 0.0}});
  CHECK(d_mid[0] == doctest::Approx(0.5));
  CHECK(d_mid[1] == doctest::Approx(0.5));
  CHECK(d_mid[2] == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("plans serialize to JSON and back") {
  const auto plan = random_plan(3, 25, 99);
  const auto doc = plan_to_json(plan);
  const auto parsed = plan_from_json(doc);
  CHECK(parsed.scheme == plan.scheme);
  CHECK(parsed.seed == plan.seed);
  REQUIRE(parsed.points.size() == plan.points.size());
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    // Re-validation renormalizes, so components agree to round-off only.
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(parsed.points[i].weights[c] ==
            doctest::Approx(plan.points[i].weights[c]).epsilon(1e-14));
    }
    CHECK(parsed.points[i].map_xy->x == plan.points[i].map_xy->x);
  }

  auto broken = doc;
  broken["points"][3]["id"] = 99;
  CHECK_THROWS_AS((void)plan_from_json(broken), Error);
}

}  // TEST_SUITE
