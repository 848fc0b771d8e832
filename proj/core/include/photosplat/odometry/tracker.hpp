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

#include <span>
#include <vector>

#include "photosplat/core/camera.hpp"
#include "photosplat/odometry/frame.hpp"

namespace photosplat::odometry {

struct TrackerConfig {
  double huber_threshold = 0.03;
  int max_iterations = 30;  // per pyramid level
  double min_update_norm = 1e-7;
  double initial_damping = 1e-3;
  double damping_increase = 4.0;
  double damping_decrease = 0.5;
  double min_damping = 1e-7;
  int max_rejections = 5;
  int min_points = 50;
  // Level pixels; points closer to the border at the start of a level sit out
  // that level.
  double active_margin = 2.0;
  // Quadratic prior on log a toward its initial value, per tracking point.
  // a and b are nearly collinear over a narrow intensity range; without the
  // prior, small interpolation biases move b by several 1/255 steps.
  double log_a_prior = 1.0;
  int workers = 1;
};

struct LevelTrace {
  int level = 0;
  int iterations = 0;
  // Energy after each accepted step, starting with the level's initial energy.
  std::vector<double> accepted_energies;
};

struct TrackResult {
  Se3Pose pose;  // target camera-to-world
  double log_a = 0.0;
  double affine_b = 0.0;
  PhotometricEnergy energy;  // finest level, visible residuals only
  std::vector<LevelTrace> trace;

  double affine_a() const { return std::exp(log_a); }
};

// Coarse-to-fine Levenberg-Marquardt over [twist(6), log a_j, b_j] using the
// POSE_TRACKING points hosted in `reference`; other statuses are ignored.
// Initial brightness comes from target.log_a / target.affine_b.
// Throws TrackingLostError (frame index = target.id) when fewer than
// config.min_points points are visible at the coarsest level or the solver
// diverges.
TrackResult track_frame(const PhotometricFrame& target, const PhotometricFrame& reference,
                        std::span<const TrackedPoint> points, const PinholeCamera& camera,
                        const Se3Pose& initial_guess, const TrackerConfig& config = {});

}  // namespace photosplat::odometry
