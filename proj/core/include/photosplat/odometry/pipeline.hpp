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

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "photosplat/core/camera.hpp"
#include "photosplat/core/image.hpp"
#include "photosplat/odometry/depth.hpp"
#include "photosplat/odometry/frame.hpp"
#include "photosplat/odometry/tracker.hpp"
#include "photosplat/selection/selector.hpp"

namespace photosplat::odometry {

struct OdometryConfig {
  TrackerConfig tracker;
  DepthConfig depth;
  selection::SelectionConfig selection;
  int keyframe_interval = 5;  // K
  int window_keyframes = 3;   // M
  int pyramid_levels = 4;
  // Adds extra and gradient-fill points; false gives the tracking-only cloud.
  bool dense = true;
  // Starting inverse depth when no first-frame depth map is given.
  double initial_inverse_depth = 1.0;
  // Neighbors used to seed a new keyframe point from the existing cloud.
  int seed_neighbor_count = 5;
  // A refined point whose mean Huber cost per residual exceeds this is
  // dropped as an outlier (occlusion, wrong match). 9e-4 = 0.03^2.
  double outlier_energy = 9e-4;
  int workers = 1;

  // Throws kInvalidArgument on an out-of-range field.
  void validate() const;
};

struct InputFrame {
  IntensityImage gray;
  std::shared_ptr<const ColorImage> color;  // may be null
  double exposure = 1.0;
};

struct OdometryResult {
  std::vector<int> keyframe_ids;
  std::vector<Se3Pose> trajectory;   // one per keyframe
  std::vector<Se3Pose> frame_poses;  // one per input frame
  std::vector<double> frame_log_a;
  std::vector<double> frame_b;
  std::vector<TrackedPoint> cloud;

  // Keyframe id -> pose, as consumed by point-cloud export.
  std::map<int, Se3Pose> host_poses() const;
};

// Frame 0 is a keyframe at the world origin; every keyframe_interval-th frame
// and the last frame become keyframes. Other frames are tracked against the
// latest keyframe with a constant-velocity guess. New keyframes get fresh
// points (depth seeded from the projected cloud) and every active point is
// refined against the last window_keyframes keyframes.
//
// `first_depth` is an optional z-depth map for frame 0. It fixes the metric
// scale; without it depths start at initial_inverse_depth and the result is
// normalized so the median first-keyframe depth is 1.
//
// Throws kInvalidArgument for fewer than 2 frames or mismatched sizes, and
// TrackingLostError with the failing frame index.
OdometryResult run_odometry(std::span<const InputFrame> frames, const PinholeCamera& camera,
                            const OdometryConfig& config,
                            const std::vector<float>* first_depth = nullptr);

}  // namespace photosplat::odometry
