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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morphgen/gpr.hpp"
#include "morphgen/pipeline.hpp"

namespace {

using namespace morphgen;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitPartial = 2;
constexpr int kExitFatal = 3;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::validation:
    case ErrorKind::format:
    case ErrorKind::conditioning:
    case ErrorKind::integrity:
    case ErrorKind::empty_result:
      return kExitValidation;
    case ErrorKind::io:
      return kExitFatal;
  }
  return kExitFatal;
}

int thread_fallback() {
  if (const char* env = std::getenv("MORPHGEN_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 0;  // library default: hardware concurrency
}

nlohmann::json load_json(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  write_file_bytes(path, bytes);
}

// (x, y[, value]) rows, '#' comments and a non-numeric header line allowed.
std::vector<std::vector<double>> read_csv(const fs::path& path, std::size_t min_columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    bool numeric = true;
    while (std::getline(fields, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw Error(ErrorKind::format,
                  path.string() + ":" + std::to_string(line_no) + ": unparseable CSV row");
    }
    if (row.size() < min_columns) {
      throw Error(ErrorKind::format, path.string() + ":" + std::to_string(line_no) +
                                         ": expected at least " + std::to_string(min_columns) +
                                         " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::array<std::uint32_t, 3> parse_resolution(const std::vector<std::uint32_t>& values) {
  if (values.size() == 1) return {values[0], values[0], values[0]};
  if (values.size() == 3) return {values[0], values[1], values[2]};
  throw Error(ErrorKind::validation, "--resolution takes one value or three");
}

struct DatasetCliOptions {
  std::string config_path;
  std::vector<std::string> bases;
  std::vector<std::uint32_t> resolution;
  double padding = -1.0;
  int dilation_iters = -1;
  std::string iso_mode;
  double epsilon = -1.0;
  double lambda = -1.0;
  int smooth_iters = -1;
  std::string scheme;
  int samples_per_dim = 0;
  int count = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string output_dir;
  int threads = 0;
};

// defaults < config file < command-line flags
PipelineConfig resolve_config(const DatasetCliOptions& cli) {
  PipelineConfig config;
  if (!cli.config_path.empty()) config = config_from_json(load_json(cli.config_path));
  for (const auto& base : cli.bases) config.basis_paths.emplace_back(base);
  if (!cli.resolution.empty()) config.resolution = parse_resolution(cli.resolution);
  if (cli.padding >= 0.0) config.padding = cli.padding;
  if (cli.dilation_iters >= 0) config.dilation_iters = cli.dilation_iters;
  if (!cli.iso_mode.empty()) {
    config.reconstruction = reconstruction_from_json({{"iso_mode", cli.iso_mode}});
  }
  if (cli.epsilon > 0.0) config.reconstruction.epsilon = cli.epsilon;
  if (cli.lambda >= 0.0) config.reconstruction.smoothing_lambda = cli.lambda;
  if (cli.smooth_iters >= 0) config.reconstruction.smoothing_iters = cli.smooth_iters;
  if (!cli.scheme.empty()) config.sampling.scheme = sampling_scheme_from_string(cli.scheme);
  if (cli.samples_per_dim > 0) config.sampling.samples_per_dim = cli.samples_per_dim;
  if (cli.count > 0) config.sampling.count = cli.count;
  if (cli.seed_set) config.sampling.seed = cli.seed;
  if (!cli.output_dir.empty()) config.output_dir = cli.output_dir;
  config.threads = cli.threads > 0 ? cli.threads : thread_fallback();
  if (config.basis_paths.empty()) {
    throw Error(ErrorKind::validation, "no basis meshes given (--basis or config basis_paths)");
  }
  if (config.output_dir.empty()) {
    throw Error(ErrorKind::validation, "no output directory given (--output-dir or config)");
  }
  return config;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> weights;
  std::stringstream fields(text);
  std::string field;
  while (std::getline(fields, field, ',')) {
    try {
      weights.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw Error(ErrorKind::validation, "unparseable weight '" + field + "'");
    }
  }
  return weights;
}

int run(int argc, char** argv) {
  CLI::App app{"morphgen: mesh morphing dataset toolkit", "morphgen"};
  app.require_subcommand(1);

  // voxelize ---------------------------------------------------------------
  auto* voxelize_cmd = app.add_subcommand("voxelize", "Ray-trace an STL into a binary voxel grid");
  std::string vx_input, vx_output;
  std::vector<std::uint32_t> vx_resolution{64};
  std::vector<double> vx_box;
  double vx_padding = 0.0;
  bool vx_brute = false, vx_isotropic = false;
  int vx_threads = 0;
  voxelize_cmd->add_option("--input", vx_input, "input STL")->required();
  voxelize_cmd->add_option("--output", vx_output, "output MGVX grid")->required();
  voxelize_cmd->add_option("--resolution", vx_resolution, "grid resolution (N or Nx Ny Nz)");
  voxelize_cmd->add_option("--padding", vx_padding, "world-unit padding around the box");
  voxelize_cmd->add_option("--box", vx_box,
                           "explicit bounds as xmin ymin zmin xmax ymax zmax; basis sets headed "
                           "for interpolation must share one box")
      ->expected(6);
  voxelize_cmd->add_flag("--isotropic", vx_isotropic,
                         "grow the box to one shared voxel pitch (required downstream by sdf)");
  voxelize_cmd->add_flag("--brute-force", vx_brute, "disable triangle binning (oracle mode)");
  voxelize_cmd->add_option("--threads", vx_threads, "worker threads (0 = hardware)");
  voxelize_cmd->callback([&] {
    const auto mesh = load_stl_file(vx_input);
    const Aabb box = vx_box.empty()
                         ? bounding_box(mesh)
                         : Aabb{{vx_box[0], vx_box[1], vx_box[2]}, {vx_box[3], vx_box[4], vx_box[5]}};
    const auto resolution = parse_resolution(vx_resolution);
    const auto spec = vx_isotropic ? make_isotropic_grid(box, resolution, vx_padding)
                                   : make_grid(box, resolution, vx_padding);
    if (!grid_covers_mesh(spec, mesh)) {
      std::cerr << "warning: grid does not cover the mesh bounds\n";
    }
    const int threads = vx_threads > 0 ? vx_threads : thread_fallback();
    save_grid_file(voxelize(mesh, spec, {.threads = threads, .brute_force = vx_brute}), vx_output);
    std::cout << "wrote " << vx_output << "\n";
  });

  // sdf ---------------------------------------------------------------------
  auto* sdf_cmd = app.add_subcommand("sdf", "Fill a voxel grid and compute its signed distance field");
  std::string sdf_input, sdf_output;
  int sdf_dilation = 2;
  sdf_cmd->add_option("--input", sdf_input, "input MGVX grid")->required();
  sdf_cmd->add_option("--output", sdf_output, "output MGSF field")->required();
  sdf_cmd->add_option("--dilation-iters", sdf_dilation, "hole-filling dilation iterations");
  sdf_cmd->callback([&] {
    const auto grid = load_grid_file(sdf_input);
    save_field_file(signed_distance(fill_holes(grid, sdf_dilation)), sdf_output);
    std::cout << "wrote " << sdf_output << "\n";
  });

  // interp -------------------------------------------------------------------
  auto* interp_cmd = app.add_subcommand("interp", "Barycentric combination of SDF fields");
  std::vector<std::string> interp_fields;
  std::string interp_weights, interp_output;
  interp_cmd->add_option("--fields", interp_fields, "input MGSF fields")->required()->expected(-2);
  interp_cmd->add_option("--weights", interp_weights, "comma-separated convex weights")->required();
  interp_cmd->add_option("--output", interp_output, "output MGSF field")->required();
  interp_cmd->callback([&] {
    std::vector<ScalarField> fields;
    for (const auto& path : interp_fields) fields.push_back(load_field_file(path));
    const auto w = validate_weights(parse_weights(interp_weights));
    save_field_file(interpolate(fields, w), interp_output);
    std::cout << "wrote " << interp_output << "\n";
  });

  // reconstruct ----------------------------------------------------------------
  auto* recon_cmd = app.add_subcommand("reconstruct", "Extract a watertight mesh from an SDF");
  std::string rc_input, rc_output, rc_mode = "smooth-sdf";
  double rc_epsilon = 1.0, rc_lambda = 0.5;
  int rc_iters = 10;
  recon_cmd->add_option("--input", rc_input, "input MGSF field")->required();
  recon_cmd->add_option("--output", rc_output, "output STL")->required();
  recon_cmd->add_option("--iso-mode", rc_mode, "smooth-sdf | binary-band");
  recon_cmd->add_option("--epsilon", rc_epsilon, "band half-width in voxels (binary-band)");
  recon_cmd->add_option("--lambda", rc_lambda, "Laplacian smoothing factor [0,1)");
  recon_cmd->add_option("--smoothing-iters", rc_iters, "Laplacian smoothing iterations");
  recon_cmd->callback([&] {
    const auto field = load_field_file(rc_input);
    const auto cfg = reconstruction_from_json({{"iso_mode", rc_mode},
                                               {"epsilon", rc_epsilon},
                                               {"smoothing_lambda", rc_lambda},
                                               {"smoothing_iters", rc_iters}});
    const auto mesh = reconstruct(field, cfg);
    save_stl_file(mesh, rc_output);
    const auto report = watertight_check(mesh);
    std::cout << "wrote " << rc_output << " (" << mesh.triangle_count() << " triangles, "
              << (report.watertight ? "watertight" : "NOT watertight") << ")\n";
  });

  // project ---------------------------------------------------------------------
  auto* project_cmd = app.add_subcommand("project", "Render quantized orthographic depth views");
  std::string pj_input, pj_output;
  std::vector<std::string> pj_views{"back", "side", "top"};
  int pj_width = 384, pj_height = 384;
  project_cmd->add_option("--input", pj_input, "input STL")->required();
  project_cmd->add_option("--output", pj_output, "output PNG (sidecar JSON written next to it)")->required();
  project_cmd->add_option("--views", pj_views, "1 view (grayscale) or 3 views (RGB stack)");
  project_cmd->add_option("--width", pj_width, "image width");
  project_cmd->add_option("--height", pj_height, "image height");
  project_cmd->callback([&] {
    const auto mesh = load_stl_file(pj_input);
    nlohmann::json meta;
    if (pj_views.size() == 1) {
      const auto image = depth_map(mesh, view_from_string(pj_views[0]), pj_width, pj_height);
      write_png_file(pj_output, pj_width, pj_height, 1, image.pixels);
      meta["channels"].push_back({{"view", pj_views[0]},
                                  {"depth_min", image.depth_min},
                                  {"depth_max", image.depth_max},
                                  {"pixel_pitch", image.pixel_pitch}});
    } else if (pj_views.size() == 3) {
      const auto stack = stack_views(mesh,
                                     {view_from_string(pj_views[0]), view_from_string(pj_views[1]),
                                      view_from_string(pj_views[2])},
                                     pj_width, pj_height);
      write_png_file(pj_output, pj_width, pj_height, 3, stack.pixels);
      for (const auto& channel : stack.channels) {
        meta["channels"].push_back({{"view", to_string(channel.view)},
                                    {"depth_min", channel.depth_min},
                                    {"depth_max", channel.depth_max},
                                    {"pixel_pitch", channel.pixel_pitch}});
      }
    } else {
      throw Error(ErrorKind::validation, "--views takes exactly 1 or 3 view names");
    }
    write_text(fs::path(pj_output).replace_extension(".json"), meta.dump(2) + "\n");
    std::cout << "wrote " << pj_output << "\n";
  });

  // sample-plan ---------------------------------------------------------------
  auto* plan_cmd = app.add_subcommand("sample-plan", "Generate a simplex sampling plan");
  int sp_bases = 3, sp_spd = 0, sp_count = 0;
  std::uint64_t sp_seed = 0;
  std::string sp_scheme = "lattice", sp_output;
  plan_cmd->add_option("--bases", sp_bases, "number of basis shapes");
  plan_cmd->add_option("--scheme", sp_scheme, "lattice | random | incircle-train | incircle-test");
  plan_cmd->add_option("--samples-per-dim", sp_spd, "lattice samples per dimension");
  plan_cmd->add_option("--count", sp_count, "random sample count");
  plan_cmd->add_option("--seed", sp_seed, "random seed");
  plan_cmd->add_option("--output", sp_output, "output JSON")->required();
  plan_cmd->callback([&] {
    SamplingPlan plan;
    const auto scheme = sampling_scheme_from_string(sp_scheme);
    if (scheme == SamplingScheme::random) {
      plan = random_plan(sp_bases, sp_count, sp_seed);
    } else {
      if (sp_spd <= 0) {
        throw Error(ErrorKind::validation, "--samples-per-dim is required for lattice schemes");
      }
      plan = simplex_grid(sp_bases, sp_spd);
      if (scheme != SamplingScheme::lattice) {
        auto [train, test] = incircle_split(plan);
        plan = scheme == SamplingScheme::incircle_train ? std::move(train) : std::move(test);
      }
    }
    write_text(sp_output, plan_to_json(plan).dump(2) + "\n");
    std::cout << "wrote " << sp_output << " (" << plan.points.size() << " points)\n";
  });

  // dataset + single -----------------------------------------------------------
  DatasetCliOptions ds;
  const auto add_dataset_options = [&ds](CLI::App* cmd) {
    cmd->add_option("--config", ds.config_path, "pipeline config JSON");
    cmd->add_option("--basis", ds.bases, "basis STL paths (appended to config)");
    cmd->add_option("--resolution", ds.resolution, "grid resolution (N or Nx Ny Nz)");
    cmd->add_option("--padding", ds.padding, "world-unit padding");
    cmd->add_option("--dilation-iters", ds.dilation_iters, "hole-filling dilation iterations");
    cmd->add_option("--iso-mode", ds.iso_mode, "smooth-sdf | binary-band");
    cmd->add_option("--epsilon", ds.epsilon, "band half-width in voxels");
    cmd->add_option("--lambda", ds.lambda, "smoothing factor");
    cmd->add_option("--smoothing-iters", ds.smooth_iters, "smoothing iterations");
    cmd->add_option("--output-dir", ds.output_dir, "output directory");
    cmd->add_option("--threads", ds.threads, "worker threads (0 = MORPHGEN_THREADS or hardware)");
  };
  auto* dataset_cmd = app.add_subcommand("dataset", "Generate a full interpolated dataset");
  add_dataset_options(dataset_cmd);
  dataset_cmd->add_option("--scheme", ds.scheme, "lattice | random | incircle-train | incircle-test");
  dataset_cmd->add_option("--samples-per-dim", ds.samples_per_dim, "lattice samples per dimension");
  dataset_cmd->add_option("--count", ds.count, "random sample count");
  dataset_cmd->add_option("--seed", ds.seed, "random seed")->each([&ds](const std::string&) {
    ds.seed_set = true;
  });
  int dataset_exit = kExitOk;
  dataset_cmd->callback([&] {
    const auto config = resolve_config(ds);
    const auto manifest = run_dataset(config);
    std::cout << "dataset: " << manifest.samples.size() << " samples, " << manifest.failed
              << " failed -> " << (config.output_dir / "manifest.json").string() << "\n";
    if (manifest.failed > 0) dataset_exit = kExitPartial;
  });

  auto* single_cmd = app.add_subcommand("single", "Run one interpolant end to end");
  std::string single_weights;
  add_dataset_options(single_cmd);
  single_cmd->add_option("--weights", single_weights, "comma-separated convex weights")->required();
  single_cmd->callback([&] {
    const auto config = resolve_config(ds);
    const auto record = run_single(config, parse_weights(single_weights));
    std::cout << "sample " << record.id << ": " << record.mesh_path << " ("
              << (record.watertight ? "watertight" : "NOT watertight") << ")\n";
  });

  // gpr --------------------------------------------------------------------------
  auto* gpr_cmd = app.add_subcommand("gpr", "Gaussian process regression over map coordinates");
  gpr_cmd->require_subcommand(1);
  auto* gpr_fit = gpr_cmd->add_subcommand("fit", "Fit hyperparameters by maximum likelihood");
  std::string gf_data, gf_model_out;
  double gf_length = 1.2, gf_variance = 1.0, gf_noise = 1e-10;
  int gf_restarts = 10;
  std::uint64_t gf_seed = 0;
  gpr_fit->add_option("--data", gf_data, "CSV with columns x,y,value")->required();
  gpr_fit->add_option("--output", gf_model_out, "output model JSON")->required();
  gpr_fit->add_option("--length-scale", gf_length, "initial length scale");
  gpr_fit->add_option("--signal-variance", gf_variance, "initial signal variance");
  gpr_fit->add_option("--noise", gf_noise, "fixed diagonal noise");
  gpr_fit->add_option("--restarts", gf_restarts, "optimizer restarts");
  gpr_fit->add_option("--seed", gf_seed, "restart perturbation seed");
  gpr_fit->callback([&] {
    const auto rows = read_csv(gf_data, 3);
    std::vector<Vec2d> x;
    std::vector<double> y;
    for (const auto& row : rows) {
      x.push_back({row[0], row[1]});
      y.push_back(row[2]);
    }
    const auto model = fit(x, y, {gf_length, gf_variance, gf_noise}, gf_restarts, gf_seed);
    write_text(gf_model_out, gpr_model_to_json(model).dump(2) + "\n");
    std::cout << "fit " << x.size() << " points: length_scale=" << model.hyper.length_scale
              << " signal_variance=" << model.hyper.signal_variance
              << " log_marginal_likelihood=" << model.log_marginal_likelihood << "\n";
  });
  auto* gpr_predict = gpr_cmd->add_subcommand("predict", "Predict mean, std, and 95% CI");
  std::string gp_model, gp_data, gp_output;
  gpr_predict->add_option("--model", gp_model, "model JSON from gpr fit")->required();
  gpr_predict->add_option("--data", gp_data, "CSV with columns x,y")->required();
  gpr_predict->add_option("--output", gp_output, "output CSV")->required();
  gpr_predict->callback([&] {
    const auto model = gpr_model_from_json(load_json(gp_model));
    const auto rows = read_csv(gp_data, 2);
    std::vector<Vec2d> query;
    for (const auto& row : rows) query.push_back({row[0], row[1]});
    const auto prediction = predict(model, query);
    std::ostringstream out;
    out << "x,y,mean,std,ci95_lo,ci95_hi\n";
    out.precision(17);
    for (std::size_t i = 0; i < query.size(); ++i) {
      const double half = 1.96 * prediction.stddev[i];
      out << query[i].x << "," << query[i].y << "," << prediction.mean[i] << ","
          << prediction.stddev[i] << "," << prediction.mean[i] - half << ","
          << prediction.mean[i] + half << "\n";
    }
    write_text(gp_output, out.str());
    std::cout << "wrote " << gp_output << " (" << query.size() << " predictions)\n";
  });

  // inspect --------------------------------------------------------------------
  auto* inspect_cmd = app.add_subcommand("inspect", "Verify a dataset manifest");
  std::string in_manifest;
  bool in_recheck = false;
  inspect_cmd->add_option("--manifest", in_manifest, "manifest.json path")->required();
  inspect_cmd->add_flag("--recheck-watertight", in_recheck, "reload meshes and re-check topology");
  inspect_cmd->callback([&] {
    const auto report = inspect(in_manifest, in_recheck);
    std::cout << "samples: " << report.samples << " (" << report.failed << " failed)\n";
    std::cout << "checksums: all match\n";
    if (in_recheck) {
      std::cout << "watertight failures: " << report.watertight_failures << "\n";
    }
    for (const auto& summary : report.distances) {
      std::cout << summary.split << " (" << summary.count << " samples)";
      for (int c = 0; c < 3; ++c) {
        std::cout << "  corner" << c + 1 << " min/mean/max " << summary.min_distance[std::size_t(c)]
                  << "/" << summary.mean_distance[std::size_t(c)] << "/"
                  << summary.max_distance[std::size_t(c)];
      }
      std::cout << "\n";
    }
  });

  CLI11_PARSE(app, argc, argv);
  return dataset_exit;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const morphgen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return kExitFatal;
  }
}
