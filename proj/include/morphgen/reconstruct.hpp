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
#include <string>

#include "morphgen/error.hpp"
#include "morphgen/grid.hpp"
#include "morphgen/marching_cubes.hpp"
#include "morphgen/smooth.hpp"

namespace morphgen {

enum class IsoMode {
  smooth_sdf,   // marching cubes directly on the field at iso 0
  binary_band,  // threshold a zero-level band first, then march the 0/1 field
};

struct ReconstructionConfig {
  double epsilon = 1.0;  // band half-width in voxel units (binary_band only)
  IsoMode iso_mode = IsoMode::smooth_sdf;
  double smoothing_lambda = 0.5;
  int smoothing_iters = 10;
};

inline void validate_config(const ReconstructionConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) {
    throw Error(ErrorKind::validation, "reconstruction: epsilon must be > 0");
  }
  if (cfg.smoothing_lambda < 0.0 || cfg.smoothing_lambda >= 1.0) {
    throw Error(ErrorKind::validation, "reconstruction: smoothing_lambda must be in [0, 1)");
  }
  if (cfg.smoothing_iters < 0) {
    throw Error(ErrorKind::validation, "reconstruction: smoothing_iters must be >= 0");
  }
}

/// Numerical zero-level band: voxel set exactly when |phi| <= epsilon.
inline BinaryGrid extract_band(const ScalarField& field, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorKind::validation, "extract_band: epsilon must be > 0");
  }
  BinaryGrid band(field.spec);
  bool any = false;
  for (std::size_t linear = 0; linear < field.values.size(); ++linear) {
    if (std::abs(double(field.values[linear])) <= epsilon) {
      band.set(linear);
      any = true;
    }
  }
  if (!any) {
    throw Error(ErrorKind::empty_result, "extract_band: no interface found within epsilon = " +
                                             std::to_string(epsilon));
  }
  return band;
}

/**
 * Interface extraction plus smoothing, in world coordinates.
 *
 * smooth_sdf marches the field at iso 0 and keeps sub-voxel placement;
 * binary_band thresholds the zero-level band first and marches the resulting
 * 0/1 field at iso 0.5, which is stair-stepped but insensitive to field
 * shape. Both paths finish with Laplacian smoothing.
 */
inline TriangleMesh reconstruct(const ScalarField& field, const ReconstructionConfig& cfg = {}) {
  validate_config(cfg);
  TriangleMesh mesh;
  if (cfg.iso_mode == IsoMode::smooth_sdf) {
    mesh = marching_cubes(field, 0.0);
  } else {
    const BinaryGrid band = extract_band(field, cfg.epsilon);
    ScalarField indicator(field.spec);
    for (std::size_t linear = 0; linear < indicator.values.size(); ++linear) {
      indicator.values[linear] = band.get(linear) ? 1.0f : 0.0f;
    }
    mesh = marching_cubes(indicator, 0.5);
  }
  return laplacian_smooth(mesh, cfg.smoothing_lambda, cfg.smoothing_iters);
}

}  // namespace morphgen
