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
#include <span>
#include <string>
#include <vector>

#include "morphgen/error.hpp"
#include "morphgen/grid.hpp"

namespace morphgen {

/// Convex weights over n basis shapes: w_i >= 0, sum w_i = 1.
struct BarycentricWeights {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/**
 * Validates raw weights into BarycentricWeights.
 *
 * Components below -1e-12 are rejected by name; tiny negative round-off is
 * clamped to zero. A sum within 1e-9 of one is renormalized exactly to one,
 * anything further off is rejected.
 */
inline BarycentricWeights validate_weights(std::span<const double> raw) {
  if (raw.empty()) {
    throw Error(ErrorKind::validation, "weights: need at least one component");
  }
  BarycentricWeights w;
  w.values.reserve(raw.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = raw[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::validation, "weights: component " + std::to_string(i) + " is not finite");
    }
    if (v < -1e-12) {
      throw Error(ErrorKind::validation, "weights: component " + std::to_string(i) + " is negative (" +
                                             std::to_string(v) + ")");
    }
    w.values.push_back(v < 0.0 ? 0.0 : v);
    sum += w.values.back();
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::validation,
                "weights: sum " + std::to_string(sum) + " is not 1 within 1e-9");
  }
  if (sum != 1.0) {
    for (double& v : w.values) v /= sum;
  }
  return w;
}

/**
 * Pointwise convex combination of scalar fields sharing one grid spec.
 *
 * The result is accumulated in double precision per voxel and is not
 * re-signed or renormalized; a weight vector with a single 1 returns that
 * basis field bit-identically.
 */
inline ScalarField interpolate(std::span<const ScalarField> fields, const BarycentricWeights& w) {
  if (fields.empty() || fields.size() != w.size()) {
    throw Error(ErrorKind::validation,
                "interpolate: field count " + std::to_string(fields.size()) +
                    " does not match weight count " + std::to_string(w.size()));
  }
  for (std::size_t f = 1; f < fields.size(); ++f) {
    if (!(fields[f].spec == fields[0].spec)) {
      throw Error(ErrorKind::validation,
                  "interpolate: field " + std::to_string(f) + " has a different grid spec");
    }
  }
  ScalarField out(fields[0].spec);
  const std::size_t n = out.values.size();
  for (std::size_t linear = 0; linear < n; ++linear) {
    double acc = 0.0;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      acc += w[f] * double(fields[f].values[linear]);
    }
    out.values[linear] = float(acc);
  }
  return out;
}

}  // namespace morphgen
