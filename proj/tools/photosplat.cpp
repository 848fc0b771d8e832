// Copyright 2026 The photosplat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// photosplat: synthesize scenes, run odometry, train splats and compare
// dense against sparse initialization.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "photosplat/core/error.hpp"
#include "photosplat/harness/baseline.hpp"
#include "photosplat/harness/comparison.hpp"
#include "photosplat/harness/dataset.hpp"
#include "photosplat/harness/outputs.hpp"
#include "photosplat/harness/reference.hpp"
#include "photosplat/harness/settings.hpp"
#include "photosplat/harness/synthetic.hpp"
#include "photosplat/odometry/pipeline.hpp"
#include "photosplat/odometry/trajectory_io.hpp"
#include "photosplat/selection/point_cloud.hpp"
#include "photosplat/splat/scene_io.hpp"

namespace fs = std::filesystem;
using namespace photosplat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitTrackingLost = 3;
constexpr int kExitIo = 4;
constexpr int kExitOther = 1;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kEmptyScene:
      return kExitInvalid;
    case ErrorCode::kTrackingLost:
      return kExitTrackingLost;
    case ErrorCode::kIo:
      return kExitIo;
    default:
      return kExitOther;
  }
}

harness::Settings settings_from(const std::string& path) {
  return path.empty() ? harness::Settings{} : harness::load_settings(path);
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_error(ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<odometry::InputFrame> input_frames(const harness::Dataset& data) {
  std::vector<odometry::InputFrame> frames;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto e = data.exposures.find(static_cast<int>(i));
    frames.push_back({data.gray[i], std::make_shared<const ColorImage>(data.color[i]),
                      e == data.exposures.end() ? 1.0 : e->second});
  }
  return frames;
}

// synth ----------------------------------------------------------------------

struct SynthArgs {
  std::uint64_t seed = 0;
  int frames = 20;
  std::string res = "128x128";
  double textureless = 0.3;
  std::string out;
  std::string config;
};

int run_synth(const SynthArgs& a) {
  auto settings = settings_from(a.config);
  harness::SyntheticConfig sc = settings.synthetic;
  sc.seed = a.seed;
  sc.frames = a.frames;
  sc.textureless_fraction = a.textureless;
  const auto x = a.res.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("x");
    sc.width = std::stoi(a.res.substr(0, x));
    sc.height = std::stoi(a.res.substr(x + 1));
  } catch (const std::exception&) {
    throw_error(ErrorCode::kInvalidArgument, "--res expects WxH, got '" + a.res + "'");
  }
  const auto scene = harness::generate_synthetic_scene(sc);
  harness::write_dataset(a.out, scene);
  std::printf("wrote %d frames (%dx%d) to %s\n", sc.frames, sc.width, sc.height, a.out.c_str());
  return kExitOk;
}

// odometry -------------------------------------------------------------------

struct OdometryArgs {
  std::string data;
  std::string config;
  std::string out_cloud;
  std::string out_traj;
  bool dense = false;
  bool tracking_only = false;
};

int run_odometry_cmd(const OdometryArgs& a) {
  auto settings = settings_from(a.config);
  if (a.dense) settings.odometry.dense = true;
  if (a.tracking_only) settings.odometry.dense = false;
  const auto data = harness::load_dataset(a.data);
  const auto frames = input_frames(data);
  const auto d0 = data.depth.find(0);
  const auto res = odometry::run_odometry(frames, data.camera, settings.odometry,
                                          d0 == data.depth.end() ? nullptr : &d0->second);
  auto cloud = selection::export_point_cloud(res.cloud, data.camera, res.host_poses());
  if (!settings.odometry.dense) {
    harness::BaselineConfig bc;
    bc.mode = harness::BaselineMode::kTrackingOnly;
    cloud = harness::make_sparse_baseline(cloud, bc);
  }
  selection::write_point_cloud_ply(a.out_cloud, cloud);
  std::vector<odometry::StampedPose> traj;
  for (std::size_t i = 0; i < res.frame_poses.size(); ++i) {
    traj.push_back({static_cast<double>(i), res.frame_poses[i]});
  }
  odometry::write_tum(a.out_traj, traj);
  std::printf("%zu frames, %zu keyframes, %zu points\n", data.size(), res.keyframe_ids.size(), cloud.size());
  return kExitOk;
}

// train ----------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string cloud;
  std::string traj;
  std::string config;
  std::optional<int> iters;
  std::string out;
};

int run_train(const TrainArgs& a) {
  auto settings = settings_from(a.config);
  if (a.iters) settings.train.iterations = *a.iters;
  // Evaluate at the configured checkpoints that fall inside the run, and at
  // the end.
  std::vector<int> checkpoints;
  for (int c : settings.harness.checkpoints) {
    if (c < settings.train.iterations) checkpoints.push_back(c);
  }
  checkpoints.push_back(settings.train.iterations);
  settings.harness.checkpoints = checkpoints;
  settings.validate();

  const auto data = harness::load_dataset(a.data);
  const auto cloud = selection::read_point_cloud_ply(a.cloud);
  const auto traj = odometry::read_tum(a.traj);
  if (traj.size() != data.size()) {
    throw_error(ErrorCode::kInvalidArgument, "trajectory has " + std::to_string(traj.size()) +
                                                 " poses but the dataset has " + std::to_string(data.size()) +
                                                 " frames");
  }
  std::vector<Se3Pose> poses;
  for (const auto& p : traj) poses.push_back(p.pose);
  const double extent = splat::scene_extent(cloud);
  const auto setup = harness::make_training_setup(data, poses, extent, settings, settings.train.seed);

  make_dir(a.out);
  splat::SplatScene scene;
  const auto trace = harness::train_and_evaluate("train", settings.train.seed, cloud, setup, nullptr, &scene);
  const fs::path out(a.out);
  harness::write_traces_csv(out / "trace.csv", std::span(&trace, 1));
  splat::write_scene_ply(out / "scene.ply", scene);
  const auto& last = trace.points.back();
  std::printf("iteration %d: held-out PSNR %s dB, %d Gaussians\n", last.iteration,
              harness::format_double(last.psnr).c_str(), last.count);
  return kExitOk;
}

// compare --------------------------------------------------------------------

struct CompareArgs {
  std::string data;
  std::string seeds = "0..4";
  std::string checkpoints;
  std::string config;
  std::string out;
  std::string timings;
  std::optional<int> workers;
};

void write_audit(const fs::path& path, const harness::ComparisonResult& r, const harness::Settings& s) {
  nlohmann::json j;
  j["checkpoints"] = s.harness.checkpoints;
  j["baseline"] = harness::to_string(s.harness.baseline.mode);
  for (const auto& a : r.audits) {
    j["seeds"].push_back({{"seed", a.seed},
                          {"dense_points", a.dense_points},
                          {"sparse_points", a.sparse_points},
                          {"shared_input_hash", a.dense_input_hash},
                          {"shared_inputs_match", a.dense_input_hash == a.sparse_input_hash},
                          {"holdout", a.holdout},
                          {"training_steps", a.training_steps},
                          {"holdout_never_trained", a.holdout_never_trained}});
  }
  for (const auto& row : harness::kReferenceTable) {
    j["reference"].push_back({{"method", row.method},
                              {"iteration", row.iteration},
                              {"rooms", row.rooms},
                              {"average", row.average}});
  }
  std::ofstream f(path);
  f << j.dump(2) << '\n';
  if (!f) throw_error(ErrorCode::kIo, "cannot write " + path.string());
}

void print_summary(const std::vector<harness::SummaryRow>& rows) {
  std::printf("%-8s %6s %5s %10s %8s %10s\n", "label", "iter", "runs", "psnr", "std", "count");
  for (const auto& r : rows) {
    std::printf("%-8s %6d %5d %10.3f %8.3f %10.1f\n", r.label.c_str(), r.iteration, r.runs, r.psnr_mean,
                r.psnr_std, r.count_mean);
  }
  std::printf("\nreference, not comparable in absolute terms (other scenes and resolution):\n");
  for (const auto& r : harness::kReferenceTable) {
    std::printf("  %-13s @%-4d average %.2f dB\n", r.method, r.iteration, r.average);
  }
}

int run_compare(const CompareArgs& a) {
  auto settings = settings_from(a.config);
  if (!a.checkpoints.empty()) settings.harness.checkpoints = harness::parse_int_list(a.checkpoints);
  if (a.timings == "none") {
    settings.harness.timings = false;
  } else if (a.timings == "wall") {
    settings.harness.timings = true;
  } else if (!a.timings.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "--timings expects 'wall' or 'none'");
  }
  if (a.workers) settings.harness.workers = *a.workers;
  settings.odometry.workers = settings.harness.workers;
  settings.train.workers = settings.harness.workers;
  settings.validate();
  const auto seeds = harness::parse_seed_list(a.seeds);

  std::optional<harness::Dataset> fixed;
  if (!a.data.empty()) fixed = harness::load_dataset(a.data);
  const auto source = [&](std::uint64_t seed) {
    if (fixed) return *fixed;
    auto sc = settings.synthetic;
    sc.seed = seed;
    return harness::dataset_from_scene(harness::generate_synthetic_scene(sc));
  };
  make_dir(a.out);
  const auto result = harness::run_comparison(source, seeds, settings);
  const fs::path out(a.out);
  harness::write_traces_csv(out / "traces.csv", result.traces);
  harness::write_summary_csv(out / "summary.csv", result.summary);
  harness::write_psnr_svg(out / "psnr.svg", result.summary);
  write_audit(out / "audit.json", result, settings);
  print_summary(result.summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense photometric odometry clouds as Gaussian splatting initialization"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Render a synthetic room dataset");
  s->add_option("--seed", synth.seed);
  s->add_option("--frames", synth.frames);
  s->add_option("--res", synth.res, "WxH");
  s->add_option("--textureless", synth.textureless, "Fraction of each face left flat");
  s->add_option("--config", synth.config, "TOML settings; [synthetic] supplies the remaining fields");
  s->add_option("--out", synth.out)->required();

  OdometryArgs odo;
  auto* o = app.add_subcommand("odometry", "Track a sequence and export its point cloud");
  o->add_option("--data", odo.data)->required();
  o->add_option("--config", odo.config);
  o->add_option("--out-cloud", odo.out_cloud)->required();
  o->add_option("--out-traj", odo.out_traj)->required();
  auto* dense_flag = o->add_flag("--dense", odo.dense, "Tracking, extra and gradient-fill points");
  o->add_flag("--tracking-only", odo.tracking_only, "Pose-tracking points only")->excludes(dense_flag);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a splat scene from a cloud and trajectory");
  t->add_option("--data", train.data)->required();
  t->add_option("--cloud", train.cloud)->required();
  t->add_option("--traj", train.traj)->required();
  t->add_option("--iters", train.iters);
  t->add_option("--config", train.config);
  t->add_option("--out", train.out)->required();

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Dense versus sparse initialization over several seeds");
  c->add_option("--data", cmp.data, "Dataset directory; a synthetic room per seed when omitted");
  c->add_option("--seeds", cmp.seeds, "N, A..B or a comma list");
  c->add_option("--checkpoints", cmp.checkpoints, "Comma list of iterations");
  c->add_option("--config", cmp.config);
  c->add_option("--timings", cmp.timings, "'wall' or 'none' (ms column written as 0)");
  c->add_option("--workers", cmp.workers);
  c->add_option("--out", cmp.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*s) return run_synth(synth);
    if (*o) return run_odometry_cmd(odo);
    if (*t) return run_train(train);
    if (*c) return run_compare(cmp);
  } catch (const TrackingLostError& e) {
    std::cerr << "tracking lost at frame " << e.frame_index() << ": " << e.what() << '\n';
    return kExitTrackingLost;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
