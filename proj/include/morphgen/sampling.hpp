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

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "morphgen/error.hpp"
#include "morphgen/interpolate.hpp"
#include "morphgen/vec.hpp"

namespace morphgen {

enum class SamplingScheme { lattice, random, incircle_train, incircle_test };

inline std::string to_string(SamplingScheme scheme) {
  switch (scheme) {
    case SamplingScheme::lattice: return "lattice";
    case SamplingScheme::random: return "random";
    case SamplingScheme::incircle_train: return "incircle-train";
    case SamplingScheme::incircle_test: return "incircle-test";
  }
  return "lattice";
}

inline SamplingScheme sampling_scheme_from_string(const std::string& name) {
  if (name == "lattice") return SamplingScheme::lattice;
  if (name == "random") return SamplingScheme::random;
  if (name == "incircle-train") return SamplingScheme::incircle_train;
  if (name == "incircle-test") return SamplingScheme::incircle_test;
  throw Error(ErrorKind::validation, "unknown sampling scheme '" + name + "'");
}

/// One design location on the simplex; map_xy is defined for n = 3 only.
struct DesignPoint {
  int id = 0;
  BarycentricWeights weights;
  std::optional<Vec2d> map_xy;
};

struct SamplingPlan {
  std::vector<DesignPoint> points;
  SamplingScheme scheme = SamplingScheme::lattice;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples_per_dim;

  std::size_t n_bases() const { return points.empty() ? 0 : points.front().weights.size(); }
};

// Equilateral-triangle embedding of 3-base weights with unit side length:
// basis1 -> (0,0), basis2 -> (1,0), basis3 -> (0.5, sqrt(3)/2).

/// Map coordinates of a 3-base weight vector.
inline Vec2d to_cartesian(const BarycentricWeights& w) {
  if (w.size() != 3) {
    throw Error(ErrorKind::validation, "to_cartesian: defined for 3 bases, got " +
                                           std::to_string(w.size()));
  }
  return {w[1] + 0.5 * w[2], std::sqrt(3.0) / 2.0 * w[2]};
}

/// Inverse of to_cartesian; well-defined inside the triangle.
inline BarycentricWeights from_cartesian(Vec2d p) {
  const double w3 = p.y / (std::sqrt(3.0) / 2.0);
  const double w2 = p.x - 0.5 * w3;
  return BarycentricWeights{{1.0 - w2 - w3, w2, w3}};
}

/// Euclidean map distances from a 3-base weight vector to the three corners.
inline std::array<double, 3> distance_to_vertices(const BarycentricWeights& w) {
  const Vec2d p = to_cartesian(w);
  return {distance(p, {0.0, 0.0}), distance(p, {1.0, 0.0}),
          distance(p, {0.5, std::sqrt(3.0) / 2.0})};
}

namespace detail {

inline void assign_map_coordinates(SamplingPlan& plan) {
  if (plan.n_bases() == 3) {
    for (auto& point : plan.points) point.map_xy = to_cartesian(point.weights);
  }
}

// splitmix64: the named, counter-based generator behind every random plan.
// Draw k of a seeded stream is mix(seed + (k+1) * 0x9E3779B97F4A7C15).
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform draw in the open interval (0,1), safe for log().
inline double unit_open(std::uint64_t seed, std::uint64_t index) {
  return (double(splitmix64_at(seed, index) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/**
 * Full simplicial lattice with m = samples_per_dim - 1 levels: every weight
 * vector (i_1,...,i_n)/m with non-negative integer parts summing to m, in
 * ascending lexicographic order of the integer tuples. For 3 bases the count
 * is the triangle number samples_per_dim * (samples_per_dim + 1) / 2.
 */
inline SamplingPlan simplex_grid(int n_bases, int samples_per_dim) {
  if (n_bases < 2) {
    throw Error(ErrorKind::validation, "simplex_grid: need at least 2 bases");
  }
  if (samples_per_dim < 2) {
    throw Error(ErrorKind::validation,
                "simplex_grid: samples_per_dim must be >= 2 (vertices-only grid)");
  }
  const int levels = samples_per_dim - 1;
  SamplingPlan plan;
  plan.scheme = SamplingScheme::lattice;
  plan.samples_per_dim = samples_per_dim;

  std::vector<int> tuple(std::size_t(n_bases), 0);
  const auto emit = [&plan, levels, n_bases](const std::vector<int>& parts) {
    std::vector<double> w(static_cast<std::size_t>(n_bases));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = double(parts[i]) / levels;
    DesignPoint point;
    point.id = int(plan.points.size());
    point.weights = validate_weights(w);
    plan.points.push_back(std::move(point));
  };
  // Lexicographic recursion over the first n-1 parts; the last is forced.
  const auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == tuple.size()) {
      tuple[pos] = remaining;
      emit(tuple);
      return;
    }
    for (int part = 0; part <= remaining; ++part) {
      tuple[pos] = part;
      self(self, pos + 1, remaining - part);
    }
  };
  recurse(recurse, 0, levels);
  detail::assign_map_coordinates(plan);
  return plan;
}

/**
 * Uniform random design on the simplex: flat Dirichlet via normalized
 * unit-rate exponential variates. Point p coordinate c consumes splitmix64
 * draw p * n_bases + c of the seed's stream, so plans are reproducible
 * across runs and platforms.
 */
inline SamplingPlan random_plan(int n_bases, int count, std::uint64_t seed) {
  if (n_bases < 2) {
    throw Error(ErrorKind::validation, "random_plan: need at least 2 bases");
  }
  if (count < 1) {
    throw Error(ErrorKind::validation, "random_plan: count must be >= 1");
  }
  SamplingPlan plan;
  plan.scheme = SamplingScheme::random;
  plan.seed = seed;
  for (int p = 0; p < count; ++p) {
    std::vector<double> w(static_cast<std::size_t>(n_bases));
    double sum = 0.0;
    for (int c = 0; c < n_bases; ++c) {
      const double u = detail::unit_open(seed, std::uint64_t(p) * std::uint64_t(n_bases) +
                                                   std::uint64_t(c));
      w[std::size_t(c)] = -std::log(u);
      sum += w[std::size_t(c)];
    }
    for (double& v : w) v /= sum;
    DesignPoint point;
    point.id = p;
    point.weights = validate_weights(w);
    plan.points.push_back(std::move(point));
  }
  detail::assign_map_coordinates(plan);
  return plan;
}

/**
 * Train/test split by the incircle of the barycentric map (3 bases only):
 * center (0.5, sqrt(3)/6), radius sqrt(3)/6. Points on or inside the circle
 * train; strictly outside test. Ids are renumbered contiguously per split,
 * preserving order.
 */
inline std::pair<SamplingPlan, SamplingPlan> incircle_split(const SamplingPlan& plan) {
  if (plan.n_bases() != 3) {
    throw Error(ErrorKind::validation, "incircle_split: defined for 3 bases");
  }
  const Vec2d center{0.5, std::sqrt(3.0) / 6.0};
  const double radius = std::sqrt(3.0) / 6.0;
  SamplingPlan train, test;
  train.scheme = SamplingScheme::incircle_train;
  test.scheme = SamplingScheme::incircle_test;
  train.seed = test.seed = plan.seed;
  train.samples_per_dim = test.samples_per_dim = plan.samples_per_dim;
  for (const auto& point : plan.points) {
    const Vec2d p = point.map_xy ? *point.map_xy : to_cartesian(point.weights);
    SamplingPlan& side = distance(p, center) <= radius ? train : test;
    DesignPoint copy = point;
    copy.id = int(side.points.size());
    side.points.push_back(std::move(copy));
  }
  return {std::move(train), std::move(test)};
}

inline nlohmann::json plan_to_json(const SamplingPlan& plan) {
  nlohmann::json doc;
  doc["scheme"] = to_string(plan.scheme);
  if (plan.seed) doc["seed"] = *plan.seed;
  if (plan.samples_per_dim) doc["samples_per_dim"] = *plan.samples_per_dim;
  doc["points"] = nlohmann::json::array();
  for (const auto& point : plan.points) {
    nlohmann::json p;
    p["id"] = point.id;
    p["weights"] = point.weights.values;
    if (point.map_xy) p["map_xy"] = {point.map_xy->x, point.map_xy->y};
    doc["points"].push_back(std::move(p));
  }
  return doc;
}

inline SamplingPlan plan_from_json(const nlohmann::json& doc) {
  try {
    SamplingPlan plan;
    plan.scheme = sampling_scheme_from_string(doc.at("scheme").get<std::string>());
    if (doc.contains("seed")) plan.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("samples_per_dim")) plan.samples_per_dim = doc["samples_per_dim"].get<int>();
    for (const auto& p : doc.at("points")) {
      DesignPoint point;
      point.id = p.at("id").get<int>();
      point.weights = validate_weights(p.at("weights").get<std::vector<double>>());
      if (p.contains("map_xy")) {
        point.map_xy = Vec2d{p["map_xy"][0].get<double>(), p["map_xy"][1].get<double>()};
      }
      plan.points.push_back(std::move(point));
    }
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
      if (plan.points[i].id != int(i)) {
        throw Error(ErrorKind::validation, "sampling plan ids must be contiguous from 0");
      }
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("sampling plan JSON: ") + e.what());
  }
}

}  // namespace morphgen
