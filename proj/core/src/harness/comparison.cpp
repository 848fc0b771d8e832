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

#include "photosplat/harness/comparison.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <memory>

#include "photosplat/core/error.hpp"
#include "photosplat/harness/baseline.hpp"
#include "photosplat/odometry/pipeline.hpp"
#include "photosplat/splat/loss.hpp"
#include "photosplat/splat/rasterizer.hpp"

namespace photosplat::harness {
namespace {

struct Fnv {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 0x100000001b3ULL;
    }
  }
  void num(double v) { bytes(&v, sizeof v); }
  void num(int v) { bytes(&v, sizeof v); }
  void num(std::uint64_t v) { bytes(&v, sizeof v); }
};

void hash_pose(Fnv& f, const Se3Pose& p) {
  f.num(p.rotation().w());
  f.num(p.rotation().x());
  f.num(p.rotation().y());
  f.num(p.rotation().z());
  for (int k = 0; k < 3; ++k) f.num(p.translation()[k]);
}

}  // namespace

TrainingSetup make_training_setup(const Dataset& data, std::span<const Se3Pose> poses, double extent,
                                  const Settings& settings, std::uint64_t seed) {
  if (poses.size() != data.size()) {
    throw_error(ErrorCode::kInvalidArgument, "pose count does not match the frame count");
  }
  TrainingSetup s;
  s.camera = data.camera;
  s.images = &data.color;
  s.poses.assign(poses.begin(), poses.end());
  s.extent = extent;
  s.config = settings.train;
  s.config.seed = seed;
  s.checkpoints = settings.harness.checkpoints;
  s.timings = settings.harness.timings;
  const auto& h = settings.harness;
  for (int i = 0; i < static_cast<int>(data.size()); ++i) {
    if (i % h.holdout_period == h.holdout_offset) {
      s.holdout.push_back(i);
    } else {
      s.train_views.push_back({i, &data.color[static_cast<std::size_t>(i)], poses[static_cast<std::size_t>(i)]});
    }
  }
  if (s.holdout.empty() || s.train_views.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "need at least one training and one held-out frame");
  }
  return s;
}

std::uint64_t shared_input_hash(const TrainingSetup& s) {
  Fnv f;
  f.num(s.camera.fx());
  f.num(s.camera.fy());
  f.num(s.camera.cx());
  f.num(s.camera.cy());
  f.num(s.camera.width());
  f.num(s.camera.height());
  for (const auto& v : s.train_views) {
    f.num(v.id);
    hash_pose(f, v.pose);
    f.bytes(v.image->data().data(), v.image->data().size() * sizeof(double));
  }
  for (int i : s.holdout) {
    f.num(i);
    hash_pose(f, s.poses[static_cast<std::size_t>(i)]);
  }
  f.num(s.extent);
  const auto& c = s.config;
  f.num(c.iterations);
  f.num(c.learning_rates.position);
  f.num(c.learning_rates.log_scale);
  f.num(c.learning_rates.rotation);
  f.num(c.learning_rates.opacity);
  f.num(c.learning_rates.color);
  f.num(c.adam.beta1);
  f.num(c.adam.beta2);
  f.num(c.adam.epsilon);
  f.num(c.loss.l1);
  f.num(c.loss.ssim);
  f.num(c.densify_interval);
  f.num(c.densify_until);
  f.num(c.densify.grad_threshold);
  f.num(c.densify.prune_opacity);
  f.num(c.densify.prune_scale);
  f.num(c.densify.split_scale);
  f.num(c.densify.split_shrink);
  f.num(c.seed);
  for (int k : s.checkpoints) f.num(k);
  return f.h;
}

TrainingTrace train_and_evaluate(const std::string& label, std::uint64_t seed,
                                 std::span<const selection::ColoredPoint> cloud,
                                 const TrainingSetup& setup, std::vector<int>* view_log,
                                 splat::SplatScene* final_scene) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  splat::Trainer trainer(splat::init_from_point_cloud(cloud, setup.extent), setup.train_views,
                         setup.camera, setup.config, setup.extent);
  TrainingTrace trace{label, seed, {}};
  for (int checkpoint : setup.checkpoints) {
    trainer.run_until(checkpoint);
    const double ms =
        setup.timings ? std::chrono::duration<double, std::milli>(Clock::now() - start).count() : 0.0;
    double sum = 0.0;
    for (int i : setup.holdout) {
      const auto r = splat::render<float>(trainer.scene(), setup.camera,
                                          setup.poses[static_cast<std::size_t>(i)], setup.config.workers);
      sum += splat::psnr(r.image(), (*setup.images)[static_cast<std::size_t>(i)]);
    }
    TracePoint p;
    p.iteration = trainer.iteration();
    p.psnr = sum / static_cast<double>(setup.holdout.size());
    p.loss = trainer.last_loss();
    p.count = static_cast<int>(trainer.scene().gaussians.size());
    p.ms = ms;
    trace.points.push_back(p);
  }
  if (view_log != nullptr) *view_log = trainer.view_log();
  if (final_scene != nullptr) *final_scene = trainer.scene();
  return trace;
}

std::pair<TrainingTrace, TrainingTrace> run_seed(const Dataset& data, std::uint64_t seed,
                                                 const Settings& settings, SeedAudit* audit) {
  std::vector<odometry::InputFrame> frames;
  frames.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto e = data.exposures.find(static_cast<int>(i));
    frames.push_back({data.gray[i], std::make_shared<const ColorImage>(data.color[i]),
                      e == data.exposures.end() ? 1.0 : e->second});
  }
  odometry::OdometryConfig oc = settings.odometry;
  oc.dense = true;
  const auto d0 = data.depth.find(0);
  const auto odo = odometry::run_odometry(frames, data.camera, oc,
                                          d0 == data.depth.end() ? nullptr : &d0->second);
  const auto dense = selection::export_point_cloud(odo.cloud, data.camera, odo.host_poses());
  BaselineConfig bc = settings.harness.baseline;
  bc.seed = seed;
  const auto sparse = make_sparse_baseline(dense, bc);

  const double extent = splat::scene_extent(dense);
  const TrainingSetup dense_setup = make_training_setup(data, odo.frame_poses, extent, settings, seed);
  const TrainingSetup sparse_setup = make_training_setup(data, odo.frame_poses, extent, settings, seed);
  const std::uint64_t hd = shared_input_hash(dense_setup), hs = shared_input_hash(sparse_setup);
  if (hd != hs) throw_error(ErrorCode::kInvalidState, "dense and sparse arms got different shared inputs");

  std::vector<int> log_dense, log_sparse;
  auto a = train_and_evaluate(kDenseLabel, seed, dense, dense_setup, &log_dense);
  auto b = train_and_evaluate(kSparseLabel, seed, sparse, sparse_setup, &log_sparse);
  bool clean = true;
  for (const auto* log : {&log_dense, &log_sparse}) {
    for (int id : *log) {
      if (std::binary_search(dense_setup.holdout.begin(), dense_setup.holdout.end(), id)) clean = false;
    }
  }
  if (!clean) throw_error(ErrorCode::kInvalidState, "a held-out view was used for training");
  if (audit != nullptr) {
    audit->seed = seed;
    audit->dense_points = dense.size();
    audit->sparse_points = sparse.size();
    audit->dense_input_hash = hd;
    audit->sparse_input_hash = hs;
    audit->holdout = dense_setup.holdout;
    audit->training_steps = log_dense.size() + log_sparse.size();
    audit->holdout_never_trained = clean;
  }
  return {std::move(a), std::move(b)};
}

ComparisonResult run_comparison(const std::function<Dataset(std::uint64_t)>& source,
                                std::span<const std::uint64_t> seeds, const Settings& settings) {
  if (seeds.empty()) throw_error(ErrorCode::kInvalidArgument, "no seeds given");
  ComparisonResult out;
  for (std::uint64_t seed : seeds) {
    const Dataset data = source(seed);
    SeedAudit audit;
    try {
      auto [dense, sparse] = run_seed(data, seed, settings, &audit);
      out.traces.push_back(std::move(dense));
      out.traces.push_back(std::move(sparse));
    } catch (const TrackingLostError& e) {
      throw TrackingLostError(e.frame_index(), "seed " + std::to_string(seed) + ": " + e.what());
    } catch (const Error& e) {
      throw_error(e.code(), "seed " + std::to_string(seed) + ": " + e.what());
    }
    out.audits.push_back(std::move(audit));
  }
  out.summary = summarize(out.traces, {kDenseLabel, kSparseLabel});
  return out;
}

}  // namespace photosplat::harness
