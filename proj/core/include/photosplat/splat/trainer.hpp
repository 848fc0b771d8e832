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
#include <vector>

#include "photosplat/core/camera.hpp"
#include "photosplat/core/image.hpp"
#include "photosplat/splat/densify.hpp"
#include "photosplat/splat/gaussian.hpp"
#include "photosplat/splat/loss.hpp"
#include "photosplat/splat/optimizer.hpp"

namespace photosplat::splat {

struct TrainConfig {
  int iterations = 640;
  LearningRates learning_rates;
  AdamConfig adam;
  LossWeights loss;
  int densify_interval = 100;
  int densify_until = 500;  // last iteration that may densify
  DensifyConfig densify;
  std::uint64_t seed = 0;  // view order
  int workers = 1;

  // Throws kInvalidArgument.
  void validate() const;
};

struct TrainView {
  int id = 0;  // frame index, recorded in the audit trail
  const ColorImage* image = nullptr;
  Se3Pose pose;  // camera-to-world
};

// One forward/backward pass and Adam update against a single view. Returns
// the loss before the update. When `stats` is given, screen-space gradients
// are accumulated for densification. Throws kInvalidArgument for an image
// that does not match the camera and kNonFinite, naming the offending
// Gaussian, for a non-finite loss or update.
double train_step(SplatScene& scene, const ColorImage& target, const PinholeCamera& camera,
                  const Se3Pose& view_pose, AdamOptimizer& optimizer, const TrainConfig& config,
                  double scene_extent, DensifyStats* stats = nullptr);

// Iterates over the training views in seeded per-epoch shuffles and
// densifies on schedule.
class Trainer {
 public:
  Trainer(SplatScene scene, std::vector<TrainView> views, const PinholeCamera& camera,
          const TrainConfig& config, double scene_extent);

  // Runs iterations until iteration() == target (at most config.iterations).
  void run_until(int target);
  double step();

  int iteration() const { return iteration_; }
  double last_loss() const { return last_loss_; }
  const SplatScene& scene() const { return scene_; }
  // View id used at each iteration, in order.
  const std::vector<int>& view_log() const { return view_log_; }
  const std::vector<DensifyReport>& densify_log() const { return densify_log_; }

 private:
  int next_view();

  SplatScene scene_;
  std::vector<TrainView> views_;
  PinholeCamera camera_;
  TrainConfig config_;
  double extent_;
  AdamOptimizer optimizer_;
  DensifyStats stats_;
  std::uint64_t rng_state_;
  std::vector<int> order_;
  std::size_t cursor_ = 0;
  int iteration_ = 0;
  double last_loss_ = 0.0;
  std::vector<int> view_log_;
  std::vector<DensifyReport> densify_log_;
};

}  // namespace photosplat::splat
