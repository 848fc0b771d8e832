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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "photosplat/harness/dataset.hpp"
#include "photosplat/harness/outputs.hpp"
#include "photosplat/harness/settings.hpp"
#include "photosplat/selection/point_cloud.hpp"
#include "photosplat/splat/trainer.hpp"

namespace photosplat::harness {

inline constexpr const char* kDenseLabel = "dense";
inline constexpr const char* kSparseLabel = "sparse";

// Everything both arms share: poses, views, config, extent.
struct TrainingSetup {
  PinholeCamera camera{1.0, 1.0, 0.0, 0.0, 1, 1};
  std::vector<splat::TrainView> train_views;
  std::vector<int> holdout;                    // frame indices
  const std::vector<ColorImage>* images = nullptr;  // all frames
  std::vector<Se3Pose> poses;                  // all frames
  double extent = 1.0;
  splat::TrainConfig config;
  std::vector<int> checkpoints;
  bool timings = true;
};

// Views split by `holdout_period/offset`; poses for every frame.
TrainingSetup make_training_setup(const Dataset& data, std::span<const Se3Pose> poses, double extent,
                                  const Settings& settings, std::uint64_t seed);

// FNV-1a over the shared inputs: poses, view ids, config and extent.
std::uint64_t shared_input_hash(const TrainingSetup& setup);

// Trains from `cloud` and records mean held-out PSNR at every checkpoint.
// `view_log` receives the frame used at each iteration, `final_scene` the
// scene after the last checkpoint.
TrainingTrace train_and_evaluate(const std::string& label, std::uint64_t seed,
                                 std::span<const selection::ColoredPoint> cloud,
                                 const TrainingSetup& setup, std::vector<int>* view_log = nullptr,
                                 splat::SplatScene* final_scene = nullptr);

struct SeedAudit {
  std::uint64_t seed = 0;
  std::size_t dense_points = 0;
  std::size_t sparse_points = 0;
  std::uint64_t dense_input_hash = 0;
  std::uint64_t sparse_input_hash = 0;
  std::vector<int> holdout;
  std::size_t training_steps = 0;
  bool holdout_never_trained = false;
};

struct ComparisonResult {
  std::vector<TrainingTrace> traces;  // dense then sparse for each seed
  std::vector<SummaryRow> summary;
  std::vector<SeedAudit> audits;
};

// Odometry once, then dense and sparse arms from identical poses and
// config. Odometry errors propagate; a held-out view reaching a training step
// or differing shared inputs throw kInvalidState.
std::pair<TrainingTrace, TrainingTrace> run_seed(const Dataset& data, std::uint64_t seed,
                                                 const Settings& settings, SeedAudit* audit = nullptr);

// `source(seed)` supplies the dataset for each seed (the same one, or a
// fresh synthetic scene).
ComparisonResult run_comparison(const std::function<Dataset(std::uint64_t)>& source,
                                std::span<const std::uint64_t> seeds, const Settings& settings);

}  // namespace photosplat::harness
