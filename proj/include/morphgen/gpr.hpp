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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "morphgen/error.hpp"
#include "morphgen/sampling.hpp"
#include "morphgen/vec.hpp"

namespace morphgen {

/// RBF kernel hyperparameters; the noise term is fixed, not optimized.
struct GprHyperparams {
  double length_scale = 1.2;
  double signal_variance = 1.0;
  double noise = 1e-10;
};

inline void validate_hyperparams(const GprHyperparams& hyper) {
  if (!(hyper.length_scale > 0.0) || !(hyper.signal_variance > 0.0) || hyper.noise < 0.0) {
    throw Error(ErrorKind::validation,
                "gpr: need length_scale > 0, signal_variance > 0, noise >= 0");
  }
}

/// k(x_i, x_j) = sigma_f^2 exp(-|x_i - x_j|^2 / (2 l^2))
inline double rbf_kernel(Vec2d a, Vec2d b, const GprHyperparams& hyper) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return hyper.signal_variance *
         std::exp(-(dx * dx + dy * dy) / (2.0 * hyper.length_scale * hyper.length_scale));
}

/**
 * Fitted GPR model over 2-D map coordinates. Targets are mean-centered
 * internally; `chol` is the lower Cholesky factor of K + jitter*I and `dual`
 * solves (K + jitter*I) dual = y - y_mean.
 */
struct GprModel {
  std::vector<Vec2d> train_x;
  std::vector<double> train_y;  // raw targets
  double y_mean = 0.0;
  GprHyperparams hyper;
  double jitter = 0.0;  // the noise actually used after any escalation
  double log_marginal_likelihood = 0.0;
  std::vector<double> chol;  // n x n lower triangular, row-major
  std::vector<double> dual;
};

namespace detail::gpr {

// In-place lower Cholesky of a row-major symmetric matrix; false when a
// pivot is not strictly positive.
inline bool cholesky(std::vector<double>& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * n + k] * a[j * n + k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        a[i * n + i] = std::sqrt(sum);
      } else {
        a[i * n + j] = sum / a[j * n + j];
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
  }
  return true;
}

inline void solve_lower(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * b[k];
    b[i] = sum / l[i * n + i];
  }
}

inline void solve_lower_transpose(const std::vector<double>& l, std::size_t n,
                                  std::vector<double>& b) {
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < n; ++k) sum -= l[k * n + i] * b[k];
    b[i] = sum / l[i * n + i];
  }
}

inline std::vector<double> squared_distances(std::span<const Vec2d> x) {
  const std::size_t n = x.size();
  std::vector<double> d2(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double dx = x[i].x - x[j].x;
      const double dy = x[i].y - x[j].y;
      d2[i * n + j] = d2[j * n + i] = dx * dx + dy * dy;
    }
  }
  return d2;
}

struct Likelihood {
  bool ok = false;
  double value = -std::numeric_limits<double>::infinity();
  double jitter = 0.0;
  std::vector<double> chol;
  std::vector<double> dual;
};

// Log marginal likelihood of centered targets under (l, sigma_f^2) with
// jitter escalation noise, 10x, 100x. The dual solve is polished by two
// rounds of iterative refinement so training residuals stay near round-off
// even when the kernel matrix is badly conditioned.
inline Likelihood log_marginal(const std::vector<double>& d2, std::span<const double> centered,
                               std::size_t n, double length_scale, double signal_variance,
                               double noise) {
  const double inv = -1.0 / (2.0 * length_scale * length_scale);
  Likelihood result;
  for (int escalation = 0; escalation < 3; ++escalation) {
    const double jitter = noise * std::pow(10.0, escalation);
    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n * n; ++i) k[i] = signal_variance * std::exp(d2[i] * inv);
    std::vector<double> matrix = k;  // keep the unfactored K for refinement
    for (std::size_t i = 0; i < n; ++i) matrix[i * n + i] += jitter;
    std::vector<double> factor = matrix;
    if (!cholesky(factor, n)) continue;

    const auto solve = [&](std::vector<double> rhs) {
      solve_lower(factor, n, rhs);
      solve_lower_transpose(factor, n, rhs);
      return rhs;
    };
    std::vector<double> alpha = solve({centered.begin(), centered.end()});
    for (int refine = 0; refine < 2; ++refine) {
      std::vector<double> residual(centered.begin(), centered.end());
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += matrix[i * n + j] * alpha[j];
        residual[i] -= acc;
      }
      const auto correction = solve(std::move(residual));
      for (std::size_t i = 0; i < n; ++i) alpha[i] += correction[i];
    }

    double quad = 0.0;
    double logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      quad += alpha[i] * centered[i];
      logdet += std::log(factor[i * n + i]);
    }
    result.ok = true;
    result.value = -0.5 * quad - logdet - 0.5 * double(n) * std::log(2.0 * M_PI);
    result.jitter = jitter;
    result.chol = std::move(factor);
    result.dual = std::move(alpha);
    return result;
  }
  return result;
}

// Nelder-Mead in 2-D with projection onto box bounds; deterministic.
inline std::pair<std::array<double, 2>, double> nelder_mead(
    const std::function<double(std::array<double, 2>)>& objective, std::array<double, 2> start,
    const std::array<double, 2>& lo, const std::array<double, 2>& hi, int max_evals) {
  const auto clamp = [&](std::array<double, 2> p) {
    p[0] = std::clamp(p[0], lo[0], hi[0]);
    p[1] = std::clamp(p[1], lo[1], hi[1]);
    return p;
  };
  struct Node {
    std::array<double, 2> x;
    double f;
  };
  int evals = 0;
  const auto eval = [&](std::array<double, 2> p) {
    ++evals;
    return objective(clamp(p));
  };
  std::array<Node, 3> simplex;
  simplex[0] = {clamp(start), eval(start)};
  for (int d = 0; d < 2; ++d) {
    auto p = start;
    p[std::size_t(d)] += 0.4;
    simplex[std::size_t(d) + 1] = {clamp(p), eval(p)};
  }
  const auto order = [&] {
    std::sort(simplex.begin(), simplex.end(), [](const Node& a, const Node& b) { return a.f < b.f; });
  };
  order();
  while (evals < max_evals) {
    const std::array<double, 2> centroid{(simplex[0].x[0] + simplex[1].x[0]) / 2.0,
                                         (simplex[0].x[1] + simplex[1].x[1]) / 2.0};
    const auto along = [&](double t) {
      return clamp({centroid[0] + t * (centroid[0] - simplex[2].x[0]),
                    centroid[1] + t * (centroid[1] - simplex[2].x[1])});
    };
    const auto reflected = along(1.0);
    const double fr = eval(reflected);
    if (fr < simplex[0].f) {
      const auto expanded = along(2.0);
      const double fe = eval(expanded);
      simplex[2] = fe < fr ? Node{expanded, fe} : Node{reflected, fr};
    } else if (fr < simplex[1].f) {
      simplex[2] = {reflected, fr};
    } else {
      const auto contracted = along(0.5);
      const double fc = eval(contracted);
      if (fc < simplex[2].f) {
        simplex[2] = {contracted, fc};
      } else {
        for (int i = 1; i < 3; ++i) {
          for (int d = 0; d < 2; ++d) {
            simplex[std::size_t(i)].x[std::size_t(d)] =
                (simplex[std::size_t(i)].x[std::size_t(d)] + simplex[0].x[std::size_t(d)]) / 2.0;
          }
          simplex[std::size_t(i)].f = eval(simplex[std::size_t(i)].x);
        }
      }
    }
    order();
    const double spread = std::abs(simplex[2].f - simplex[0].f);
    const double size = std::max(std::abs(simplex[2].x[0] - simplex[0].x[0]),
                                 std::abs(simplex[2].x[1] - simplex[0].x[1]));
    if (spread < 1e-9 && size < 1e-4) break;
  }
  return {simplex[0].x, simplex[0].f};
}

}  // namespace detail::gpr

/// Search bounds for the optimized hyperparameters (log-uniform space).
constexpr double kLengthScaleMin = 1e-2;
constexpr double kLengthScaleMax = 1e2;
constexpr double kSignalVarianceMin = 1e-4;
constexpr double kSignalVarianceMax = 1e4;

/**
 * Maximum-likelihood fit of (length_scale, signal_variance) with the noise
 * term held fixed.
 *
 * The optimizer is Nelder-Mead over log-parameters. Start 0 is `init`
 * itself; starts 1..restarts-1 perturb init log-uniformly within one decade
 * using the seeded splitmix64 stream, so fits are reproducible. The
 * unoptimized init is always a candidate, so the returned model's
 * likelihood is never below it.
 */
inline GprModel fit(std::span<const Vec2d> x, std::span<const double> y,
                    const GprHyperparams& init = {}, int restarts = 10, std::uint64_t seed = 0) {
  validate_hyperparams(init);
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::validation, "gpr fit: need at least 2 points with matching targets");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorKind::validation, "gpr fit: non-finite target");
  }
  bool any_distinct = false;
  for (std::size_t i = 1; i < x.size() && !any_distinct; ++i) {
    any_distinct = !(x[i] == x[0]);
  }
  if (!any_distinct) {
    throw Error(ErrorKind::conditioning,
                "gpr fit: all inputs identical, kernel matrix is singular");
  }
  if (restarts < 1) restarts = 1;

  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= double(n);
  std::vector<double> centered(y.begin(), y.end());
  for (double& v : centered) v -= mean;

  const auto d2 = detail::gpr::squared_distances(x);

  const std::array<double, 2> lo{std::log(kLengthScaleMin), std::log(kSignalVarianceMin)};
  const std::array<double, 2> hi{std::log(kLengthScaleMax), std::log(kSignalVarianceMax)};
  const auto objective = [&](std::array<double, 2> logp) {
    const auto lik = detail::gpr::log_marginal(d2, centered, n, std::exp(logp[0]),
                                               std::exp(logp[1]), init.noise);
    return lik.ok ? -lik.value : 1e300;
  };

  const std::array<double, 2> init_log{
      std::clamp(std::log(init.length_scale), lo[0], hi[0]),
      std::clamp(std::log(init.signal_variance), lo[1], hi[1])};
  std::array<double, 2> best_log = init_log;
  double best_value = objective(init_log);

  constexpr int kMaxEvalsPerStart = 40;
  for (int r = 0; r < restarts; ++r) {
    std::array<double, 2> start = init_log;
    if (r > 0) {
      // Log-uniform perturbation within one decade per parameter.
      for (int d = 0; d < 2; ++d) {
        const double u =
            detail::unit_open(seed, std::uint64_t(r) * 2 + std::uint64_t(d));
        start[std::size_t(d)] =
            std::clamp(start[std::size_t(d)] + (2.0 * u - 1.0) * std::log(10.0), lo[std::size_t(d)],
                       hi[std::size_t(d)]);
      }
    }
    const auto [point, value] =
        detail::gpr::nelder_mead(objective, start, lo, hi, kMaxEvalsPerStart);
    if (value < best_value) {
      best_value = value;
      best_log = point;
    }
  }

  GprModel model;
  model.train_x.assign(x.begin(), x.end());
  model.train_y.assign(y.begin(), y.end());
  model.y_mean = mean;
  model.hyper = init;
  model.hyper.length_scale = std::exp(best_log[0]);
  model.hyper.signal_variance = std::exp(best_log[1]);
  const auto lik = detail::gpr::log_marginal(d2, centered, n, model.hyper.length_scale,
                                             model.hyper.signal_variance, init.noise);
  if (!lik.ok) {
    throw Error(ErrorKind::conditioning,
                "gpr fit: Cholesky failed after jitter escalation (noise, 10x, 100x)");
  }
  model.jitter = lik.jitter;
  model.log_marginal_likelihood = lik.value;
  model.chol = lik.chol;
  model.dual = lik.dual;
  return model;
}

struct GprPrediction {
  std::vector<double> mean;
  std::vector<double> stddev;
};

/// Posterior mean and standard deviation at query points; the 95% interval
/// is mean +/- 1.96 * stddev.
inline GprPrediction predict(const GprModel& model, std::span<const Vec2d> query) {
  const std::size_t n = model.train_x.size();
  GprPrediction out;
  out.mean.reserve(query.size());
  out.stddev.reserve(query.size());
  std::vector<double> k_star(n);
  for (const Vec2d& q : query) {
    for (std::size_t i = 0; i < n; ++i) k_star[i] = rbf_kernel(q, model.train_x[i], model.hyper);
    double mean = model.y_mean;
    for (std::size_t i = 0; i < n; ++i) mean += k_star[i] * model.dual[i];
    detail::gpr::solve_lower(model.chol, n, k_star);
    double variance = model.hyper.signal_variance;
    for (std::size_t i = 0; i < n; ++i) variance -= k_star[i] * k_star[i];
    if (variance < -1e-10) {
      throw Error(ErrorKind::conditioning, "gpr predict: posterior variance below -1e-10");
    }
    out.mean.push_back(mean);
    out.stddev.push_back(std::sqrt(std::max(variance, 0.0)));
  }
  return out;
}

/// R^2 = 1 - SS_res / SS_tot; undefined for constant truth.
inline double r2_score(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size() || y_true.size() < 2) {
    throw Error(ErrorKind::validation, "r2_score: need >= 2 matching points");
  }
  double mean = 0.0;
  for (double v : y_true) mean += v;
  mean /= double(y_true.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ss_res += (y_true[i] - y_pred[i]) * (y_true[i] - y_pred[i]);
    ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
  }
  if (ss_tot == 0.0) {
    throw Error(ErrorKind::validation, "r2_score: y_true is constant");
  }
  return 1.0 - ss_res / ss_tot;
}

inline nlohmann::json gpr_model_to_json(const GprModel& model) {
  nlohmann::json doc;
  doc["hyper"] = {{"length_scale", model.hyper.length_scale},
                  {"signal_variance", model.hyper.signal_variance},
                  {"noise", model.hyper.noise}};
  doc["y_mean"] = model.y_mean;
  doc["jitter"] = model.jitter;
  doc["log_marginal_likelihood"] = model.log_marginal_likelihood;
  auto& tx = doc["train_x"] = nlohmann::json::array();
  for (const auto& p : model.train_x) tx.push_back({p.x, p.y});
  doc["train_y"] = model.train_y;
  return doc;
}

/// Rebuilds the factorization from the stored hyperparameters and data.
inline GprModel gpr_model_from_json(const nlohmann::json& doc) {
  try {
    GprModel model;
    model.hyper.length_scale = doc.at("hyper").at("length_scale").get<double>();
    model.hyper.signal_variance = doc.at("hyper").at("signal_variance").get<double>();
    model.hyper.noise = doc.at("hyper").at("noise").get<double>();
    validate_hyperparams(model.hyper);
    for (const auto& p : doc.at("train_x")) {
      model.train_x.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    model.train_y = doc.at("train_y").get<std::vector<double>>();
    if (model.train_x.size() != model.train_y.size() || model.train_x.size() < 2) {
      throw Error(ErrorKind::validation, "gpr model JSON: inconsistent training data");
    }
    model.y_mean = doc.at("y_mean").get<double>();
    std::vector<double> centered = model.train_y;
    for (double& v : centered) v -= model.y_mean;
    const auto d2 = detail::gpr::squared_distances(model.train_x);
    const auto lik =
        detail::gpr::log_marginal(d2, centered, model.train_x.size(), model.hyper.length_scale,
                                  model.hyper.signal_variance, model.hyper.noise);
    if (!lik.ok) {
      throw Error(ErrorKind::conditioning, "gpr model JSON: kernel matrix is not factorizable");
    }
    model.jitter = lik.jitter;
    model.log_marginal_likelihood = lik.value;
    model.chol = lik.chol;
    model.dual = lik.dual;
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("gpr model JSON: ") + e.what());
  }
}

}  // namespace morphgen
