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
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "morphgen/edt.hpp"
#include "morphgen/grid.hpp"
#include "morphgen/hash.hpp"
#include "morphgen/interpolate.hpp"
#include "morphgen/morphology.hpp"
#include "morphgen/png_io.hpp"
#include "morphgen/projection.hpp"
#include "morphgen/reconstruct.hpp"
#include "morphgen/sampling.hpp"
#include "morphgen/stl_io.hpp"
#include "morphgen/voxelize.hpp"

namespace morphgen {

constexpr const char* kToolVersion = "0.1.0";

struct SamplingConfig {
  SamplingScheme scheme = SamplingScheme::lattice;
  int samples_per_dim = 5;
  int count = 0;  // random scheme only
  std::uint64_t seed = 0;
};

struct ImageConfig {
  std::array<View, 3> views{View::back, View::side, View::top};
  int width = 384;
  int height = 384;
};

/**
 * Everything a dataset run needs. `threads` and `output_dir` are execution
 * details and are not echoed into the manifest, so runs of the same dataset
 * in different places produce identical manifests (timing aside).
 */
struct PipelineConfig {
  std::vector<std::filesystem::path> basis_paths;
  std::array<std::uint32_t, 3> resolution{64, 64, 64};
  double padding = 0.1;
  int dilation_iters = 2;
  ReconstructionConfig reconstruction;
  SamplingConfig sampling;
  ImageConfig image;
  std::filesystem::path output_dir;
  int threads = 0;  // 0 = hardware concurrency
};

struct SampleRecord {
  int id = 0;
  std::vector<double> weights;
  std::optional<Vec2d> map_xy;
  std::string status = "ok";  // "ok" | "failed"
  std::string error;
  std::string mesh_path;        // relative to the manifest directory
  std::string image_path;
  std::string image_meta_path;
  std::map<std::string, std::string> checksums;  // sha256 by artifact name
  bool watertight = false;
  double timing_ms = 0.0;
};

struct DatasetManifest {
  std::string tool_version = kToolVersion;
  nlohmann::json config;  // dataset-semantic echo
  std::vector<SampleRecord> samples;
  std::size_t failed = 0;
};

// ---------------------------------------------------------------------------
// config JSON

inline nlohmann::json reconstruction_to_json(const ReconstructionConfig& cfg) {
  return {{"epsilon", cfg.epsilon},
          {"iso_mode", cfg.iso_mode == IsoMode::smooth_sdf ? "smooth-sdf" : "binary-band"},
          {"smoothing_lambda", cfg.smoothing_lambda},
          {"smoothing_iters", cfg.smoothing_iters}};
}

inline ReconstructionConfig reconstruction_from_json(const nlohmann::json& doc) {
  ReconstructionConfig cfg;
  if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
  if (doc.contains("iso_mode")) {
    const auto mode = doc["iso_mode"].get<std::string>();
    if (mode == "smooth-sdf") {
      cfg.iso_mode = IsoMode::smooth_sdf;
    } else if (mode == "binary-band") {
      cfg.iso_mode = IsoMode::binary_band;
    } else {
      throw Error(ErrorKind::validation, "config: unknown iso_mode '" + mode + "'");
    }
  }
  if (doc.contains("smoothing_lambda")) cfg.smoothing_lambda = doc["smoothing_lambda"].get<double>();
  if (doc.contains("smoothing_iters")) cfg.smoothing_iters = doc["smoothing_iters"].get<int>();
  return cfg;
}

/// Dataset-semantic subset of the config (no output_dir, no threads).
inline nlohmann::json config_echo(const PipelineConfig& config) {
  nlohmann::json doc;
  auto& bases = doc["basis_paths"] = nlohmann::json::array();
  for (const auto& path : config.basis_paths) bases.push_back(path.generic_string());
  doc["resolution"] = config.resolution;
  doc["padding"] = config.padding;
  doc["dilation_iters"] = config.dilation_iters;
  doc["reconstruction"] = reconstruction_to_json(config.reconstruction);
  nlohmann::json sampling;
  sampling["scheme"] = to_string(config.sampling.scheme);
  if (config.sampling.scheme == SamplingScheme::random) {
    sampling["count"] = config.sampling.count;
    sampling["seed"] = config.sampling.seed;
  } else {
    sampling["samples_per_dim"] = config.sampling.samples_per_dim;
  }
  doc["sampling"] = sampling;
  doc["image"] = {{"views",
                   {to_string(config.image.views[0]), to_string(config.image.views[1]),
                    to_string(config.image.views[2])}},
                  {"width", config.image.width},
                  {"height", config.image.height}};
  return doc;
}

inline PipelineConfig config_from_json(const nlohmann::json& doc) {
  try {
    PipelineConfig config;
    if (doc.contains("basis_paths")) {
      for (const auto& p : doc["basis_paths"]) {
        config.basis_paths.emplace_back(p.get<std::string>());
      }
    }
    if (doc.contains("resolution")) {
      const auto& r = doc["resolution"];
      if (r.is_number()) {
        config.resolution.fill(r.get<std::uint32_t>());
      } else {
        config.resolution = {r.at(0).get<std::uint32_t>(), r.at(1).get<std::uint32_t>(),
                             r.at(2).get<std::uint32_t>()};
      }
    }
    if (doc.contains("padding")) config.padding = doc["padding"].get<double>();
    if (doc.contains("dilation_iters")) config.dilation_iters = doc["dilation_iters"].get<int>();
    if (doc.contains("reconstruction")) {
      config.reconstruction = reconstruction_from_json(doc["reconstruction"]);
    }
    if (doc.contains("sampling")) {
      const auto& s = doc["sampling"];
      if (s.contains("scheme")) {
        config.sampling.scheme = sampling_scheme_from_string(s["scheme"].get<std::string>());
      }
      if (s.contains("samples_per_dim")) {
        config.sampling.samples_per_dim = s["samples_per_dim"].get<int>();
      }
      if (s.contains("count")) config.sampling.count = s["count"].get<int>();
      if (s.contains("seed")) config.sampling.seed = s["seed"].get<std::uint64_t>();
    }
    if (doc.contains("image")) {
      const auto& im = doc["image"];
      if (im.contains("views")) {
        for (std::size_t v = 0; v < 3; ++v) {
          config.image.views[v] = view_from_string(im["views"].at(v).get<std::string>());
        }
      }
      if (im.contains("width")) config.image.width = im["width"].get<int>();
      if (im.contains("height")) config.image.height = im["height"].get<int>();
    }
    if (doc.contains("output_dir")) config.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("threads")) config.threads = doc["threads"].get<int>();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("pipeline config JSON: ") + e.what());
  }
}

inline nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json doc;
  doc["tool_version"] = manifest.tool_version;
  doc["config"] = manifest.config;
  doc["total"] = manifest.samples.size();
  doc["failed"] = manifest.failed;
  auto& samples = doc["samples"] = nlohmann::json::array();
  for (const auto& record : manifest.samples) {
    nlohmann::json s;
    s["id"] = record.id;
    s["weights"] = record.weights;
    if (record.map_xy) s["map_xy"] = {record.map_xy->x, record.map_xy->y};
    s["status"] = record.status;
    if (!record.error.empty()) s["error"] = record.error;
    if (!record.mesh_path.empty()) {
      s["mesh_path"] = record.mesh_path;
      s["image_path"] = record.image_path;
      s["image_meta_path"] = record.image_meta_path;
      s["checksums"] = record.checksums;
      s["watertight"] = record.watertight;
    }
    s["timing_ms"] = record.timing_ms;
    samples.push_back(std::move(s));
  }
  return doc;
}

inline DatasetManifest manifest_from_json(const nlohmann::json& doc) {
  try {
    DatasetManifest manifest;
    manifest.tool_version = doc.at("tool_version").get<std::string>();
    manifest.config = doc.at("config");
    manifest.failed = doc.at("failed").get<std::size_t>();
    for (const auto& s : doc.at("samples")) {
      SampleRecord record;
      record.id = s.at("id").get<int>();
      record.weights = s.at("weights").get<std::vector<double>>();
      if (s.contains("map_xy")) {
        record.map_xy = Vec2d{s["map_xy"][0].get<double>(), s["map_xy"][1].get<double>()};
      }
      record.status = s.at("status").get<std::string>();
      if (s.contains("error")) record.error = s["error"].get<std::string>();
      if (s.contains("mesh_path")) {
        record.mesh_path = s["mesh_path"].get<std::string>();
        record.image_path = s.value("image_path", "");
        record.image_meta_path = s.value("image_meta_path", "");
        record.checksums = s.value("checksums", std::map<std::string, std::string>{});
        record.watertight = s.value("watertight", false);
      }
      record.timing_ms = s.value("timing_ms", 0.0);
      manifest.samples.push_back(std::move(record));
    }
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("manifest JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// dataset generation

namespace detail::pipeline {

inline void atomic_write(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::vector<std::uint8_t> bytes(text.begin(), text.end());
    write_file_bytes(tmp, bytes);
  }
  std::filesystem::rename(tmp, path);
}

inline std::string sample_stem(int id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "sample_%05d", id);
  return buf;
}

/// Cache key for a basis SDF: the STL bytes, grid layout, and fill depth.
inline std::string basis_cache_key(std::span<const std::uint8_t> stl_bytes, const GridSpec& spec,
                                   int dilation_iters) {
  std::vector<std::uint8_t> blob(stl_bytes.begin(), stl_bytes.end());
  append_spec(blob, spec);
  append_u32le(blob, std::uint32_t(dilation_iters));
  return sha256_hex(blob);
}

struct BasisStage {
  GridSpec spec;
  std::vector<ScalarField> fields;
};

/// Loads the basis STLs, builds the shared grid over their union AABB, and
/// computes (or loads from cache) each basis signed distance field.
inline BasisStage prepare_bases(const PipelineConfig& config) {
  if (config.basis_paths.size() < 2) {
    throw Error(ErrorKind::validation, "pipeline: need at least 2 basis meshes");
  }
  for (const auto& path : config.basis_paths) {
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorKind::validation, "pipeline: basis mesh not found: " + path.string());
    }
  }
  std::vector<std::vector<std::uint8_t>> stl_bytes;
  std::vector<TriangleMesh> meshes;
  for (const auto& path : config.basis_paths) {
    stl_bytes.push_back(read_file_bytes(path));
    meshes.push_back(load_stl(stl_bytes.back()));
  }
  Aabb box = bounding_box(meshes[0]);
  for (std::size_t m = 1; m < meshes.size(); ++m) box = merge(box, bounding_box(meshes[m]));
  BasisStage stage;
  stage.spec = make_isotropic_grid(box, config.resolution, config.padding);

  const auto cache_dir = config.output_dir / "cache";
  std::filesystem::create_directories(cache_dir);
  for (std::size_t m = 0; m < meshes.size(); ++m) {
    const auto key = basis_cache_key(stl_bytes[m], stage.spec, config.dilation_iters);
    const auto cached = cache_dir / (key + ".mgsf");
    if (std::filesystem::exists(cached)) {
      stage.fields.push_back(load_field_file(cached));
      continue;
    }
    const auto shell = voxelize(meshes[m], stage.spec, {.threads = config.threads});
    const auto solid = fill_holes(shell, config.dilation_iters);
    auto field = signed_distance(solid);
    save_field_file(field, cached);
    stage.fields.push_back(std::move(field));
  }
  return stage;
}

inline SampleRecord run_sample(const PipelineConfig& config, const BasisStage& stage,
                               const DesignPoint& point) {
  const auto start = std::chrono::steady_clock::now();
  SampleRecord record;
  record.id = point.id;
  record.weights = point.weights.values;
  record.map_xy = point.map_xy;
  try {
    const auto field = interpolate(stage.fields, point.weights);
    const auto mesh = reconstruct(field, config.reconstruction);

    const auto stem = sample_stem(point.id);
    const auto mesh_rel = "meshes/" + stem + ".stl";
    const auto image_rel = "images/" + stem + ".png";
    const auto meta_rel = "images/" + stem + ".json";

    const auto mesh_bytes = save_stl(mesh);
    write_file_bytes(config.output_dir / mesh_rel, mesh_bytes);

    const auto stack = stack_views(mesh, config.image.views, config.image.width,
                                   config.image.height);
    const auto png_bytes = encode_png(stack.width, stack.height, 3, stack.pixels);
    write_file_bytes(config.output_dir / image_rel, png_bytes);

    nlohmann::json meta;
    for (int c = 0; c < 3; ++c) {
      const auto& channel = stack.channels[std::size_t(c)];
      meta["channels"].push_back({{"view", to_string(channel.view)},
                                  {"depth_min", channel.depth_min},
                                  {"depth_max", channel.depth_max},
                                  {"pixel_pitch", channel.pixel_pitch}});
    }
    const std::string meta_text = meta.dump(2) + "\n";
    write_file_bytes(config.output_dir / meta_rel,
                     std::vector<std::uint8_t>(meta_text.begin(), meta_text.end()));

    record.mesh_path = mesh_rel;
    record.image_path = image_rel;
    record.image_meta_path = meta_rel;
    record.checksums["mesh"] = sha256_hex(mesh_bytes);
    record.checksums["image"] = sha256_hex(png_bytes);
    record.watertight = watertight_check(mesh).watertight;
  } catch (const Error& e) {
    record.status = "failed";
    record.error = e.what();
  }
  record.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace detail::pipeline

inline SamplingPlan make_plan(const PipelineConfig& config) {
  const int n = int(config.basis_paths.size());
  switch (config.sampling.scheme) {
    case SamplingScheme::lattice:
      return simplex_grid(n, config.sampling.samples_per_dim);
    case SamplingScheme::random:
      return random_plan(n, config.sampling.count, config.sampling.seed);
    case SamplingScheme::incircle_train:
    case SamplingScheme::incircle_test: {
      const auto full = simplex_grid(n, config.sampling.samples_per_dim);
      auto [train, test] = incircle_split(full);
      return config.sampling.scheme == SamplingScheme::incircle_train ? std::move(train)
                                                                      : std::move(test);
    }
  }
  throw Error(ErrorKind::validation, "pipeline: unknown sampling scheme");
}

/**
 * End-to-end dataset generation.
 *
 * Basis meshes are voxelized, filled, and converted to SDFs once on one
 * shared grid (cached on disk keyed by content); every plan point is then
 * interpolated, reconstructed, saved as STL, and rendered to stacked depth
 * views by a bounded worker pool. Per-sample failures are recorded in the
 * manifest rather than aborting the batch; the manifest is written last,
 * atomically, in id order, so output bytes are identical for any thread
 * count.
 */
inline DatasetManifest run_dataset(const PipelineConfig& config) {
  if (config.output_dir.empty()) {
    throw Error(ErrorKind::validation, "pipeline: output_dir is required");
  }
  validate_config(config.reconstruction);
  std::filesystem::create_directories(config.output_dir / "meshes");
  std::filesystem::create_directories(config.output_dir / "images");

  const auto stage = detail::pipeline::prepare_bases(config);
  const auto plan = make_plan(config);

  DatasetManifest manifest;
  manifest.config = config_echo(config);
  manifest.samples.resize(plan.points.size());

  const int threads = std::max(
      1, std::min<int>(detail::resolve_threads(config.threads), int(plan.points.size())));
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= plan.points.size()) break;
      manifest.samples[index] = detail::pipeline::run_sample(config, stage, plan.points[index]);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& record : manifest.samples) {
    manifest.failed += record.status == "failed" ? 1 : 0;
  }
  detail::pipeline::atomic_write(config.output_dir / "manifest.json",
                                 manifest_to_json(manifest).dump(2) + "\n");
  return manifest;
}

/// One interpolant end to end; writes the same per-sample artifacts as a
/// dataset run and returns its record. Nothing is written for invalid
/// weights.
inline SampleRecord run_single(const PipelineConfig& config, std::span<const double> raw_weights) {
  if (config.output_dir.empty()) {
    throw Error(ErrorKind::validation, "pipeline: output_dir is required");
  }
  validate_config(config.reconstruction);
  DesignPoint point;
  point.id = 0;
  point.weights = validate_weights(raw_weights);
  if (point.weights.size() != config.basis_paths.size()) {
    throw Error(ErrorKind::validation, "run_single: weight count does not match basis count");
  }
  if (point.weights.size() == 3) point.map_xy = to_cartesian(point.weights);
  std::filesystem::create_directories(config.output_dir / "meshes");
  std::filesystem::create_directories(config.output_dir / "images");
  const auto stage = detail::pipeline::prepare_bases(config);
  auto record = detail::pipeline::run_sample(config, stage, point);
  if (record.status == "failed") {
    throw Error(ErrorKind::empty_result, "run_single: sample failed: " + record.error);
  }
  return record;
}

// ---------------------------------------------------------------------------
// inspection

struct CornerDistanceSummary {
  std::string split;  // "all" | "incircle-train" | "incircle-test"
  std::size_t count = 0;
  std::array<double, 3> min_distance{};
  std::array<double, 3> mean_distance{};
  std::array<double, 3> max_distance{};
};

struct InspectReport {
  std::size_t samples = 0;
  std::size_t failed = 0;
  std::size_t checksum_failures = 0;
  std::size_t watertight_failures = 0;  // only when recheck requested
  std::vector<CornerDistanceSummary> distances;
};

namespace detail::pipeline {

inline CornerDistanceSummary summarize_corners(const std::string& split,
                                               const std::vector<const SampleRecord*>& records) {
  CornerDistanceSummary summary;
  summary.split = split;
  summary.count = records.size();
  summary.min_distance.fill(std::numeric_limits<double>::infinity());
  summary.max_distance.fill(0.0);
  summary.mean_distance.fill(0.0);
  for (const auto* record : records) {
    const auto d = distance_to_vertices(BarycentricWeights{record->weights});
    for (int c = 0; c < 3; ++c) {
      summary.min_distance[std::size_t(c)] = std::min(summary.min_distance[std::size_t(c)], d[std::size_t(c)]);
      summary.max_distance[std::size_t(c)] = std::max(summary.max_distance[std::size_t(c)], d[std::size_t(c)]);
      summary.mean_distance[std::size_t(c)] += d[std::size_t(c)];
    }
  }
  if (!records.empty()) {
    for (int c = 0; c < 3; ++c) summary.mean_distance[std::size_t(c)] /= double(records.size());
  }
  return summary;
}

}  // namespace detail::pipeline

/**
 * Verifies a manifest: every referenced file must exist and match its
 * SHA-256. Checksum mismatches raise an integrity error naming the files.
 * With `recheck_watertight`, meshes are reloaded and re-checked. For
 * three-base datasets the report carries per-corner distance summaries for
 * the whole set and the incircle train/test splits.
 */
inline InspectReport inspect(const std::filesystem::path& manifest_path,
                             bool recheck_watertight = false) {
  const auto bytes = read_file_bytes(manifest_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("manifest JSON: ") + e.what());
  }
  const auto manifest = manifest_from_json(doc);
  const auto base_dir = manifest_path.parent_path();

  InspectReport report;
  report.samples = manifest.samples.size();
  report.failed = manifest.failed;
  std::string bad_files;
  for (const auto& record : manifest.samples) {
    if (record.status != "ok") continue;
    const std::pair<std::string, std::string> artifacts[] = {{"mesh", record.mesh_path},
                                                             {"image", record.image_path}};
    for (const auto& [name, rel] : artifacts) {
      const auto it = record.checksums.find(name);
      if (it == record.checksums.end()) continue;
      const auto path = base_dir / rel;
      bool ok = std::filesystem::exists(path);
      if (ok) {
        const auto content = read_file_bytes(path);
        ok = sha256_hex(content) == it->second;
      }
      if (!ok) {
        ++report.checksum_failures;
        bad_files += (bad_files.empty() ? "" : ", ") + rel;
      }
    }
    if (recheck_watertight && !record.mesh_path.empty() &&
        std::filesystem::exists(base_dir / record.mesh_path)) {
      const auto mesh = load_stl_file(base_dir / record.mesh_path);
      if (!watertight_check(mesh).watertight) ++report.watertight_failures;
    }
  }

  const bool three_bases =
      !manifest.samples.empty() && manifest.samples.front().weights.size() == 3;
  if (three_bases) {
    const Vec2d center{0.5, std::sqrt(3.0) / 6.0};
    const double radius = std::sqrt(3.0) / 6.0;
    std::vector<const SampleRecord*> all, train, test;
    for (const auto& record : manifest.samples) {
      all.push_back(&record);
      const Vec2d p = record.map_xy ? *record.map_xy
                                    : to_cartesian(BarycentricWeights{record.weights});
      (distance(p, center) <= radius ? train : test).push_back(&record);
    }
    report.distances.push_back(detail::pipeline::summarize_corners("all", all));
    report.distances.push_back(detail::pipeline::summarize_corners("incircle-train", train));
    report.distances.push_back(detail::pipeline::summarize_corners("incircle-test", test));
  }

  if (report.checksum_failures > 0) {
    throw Error(ErrorKind::integrity, "inspect: checksum mismatch for: " + bad_files);
  }
  return report;
}

}  // namespace morphgen
