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

#include "photosplat/core/camera.hpp"
#include "photosplat/odometry/frame.hpp"

namespace photosplat::odometry {

struct DepthConfig {
  double huber_threshold = 0.03;
  int max_iterations = 20;  // per pyramid level
  double initial_damping = 1e-3;
  double min_relative_update = 1e-6;
  // Total squared Jacobian below this means depth is not observable.
  double min_information = 1e-12;
  // Sum residuals over an 8-pixel pattern around the point (all at the
  // point's inverse depth). A single pixel matches many places along the
  // epipolar line; the pattern removes most of those false minima.
  bool use_pattern = true;
  // Coarsest pyramid level to start from; -1 uses every level. Points with a
  // trusted depth refine at full resolution only so they keep their basin.
  int max_level = -1;
};

enum class DepthStatus {
  kConverged,
  kUnchanged,   // not visible anywhere, or residuals independent of depth
  kDegenerate,  // step left (1e-4, 1e4); result clamped
};

struct DepthRefinement {
  double inverse_depth = 0.0;
  DepthStatus status = DepthStatus::kUnchanged;
  int observations = 0;  // visible targets at full resolution
  // Mean Huber cost per visible residual at full resolution after refinement.
  double mean_energy = 0.0;
};

// 1-D coarse-to-fine Levenberg-Marquardt on the point's inverse depth,
// minimizing the photometric residual over every target frame. Frame poses
// and brightness parameters are held fixed. Works for any point status.
DepthRefinement refine_inverse_depth(const TrackedPoint& point, const PhotometricFrame& host,
                                     std::span<const PhotometricFrame* const> targets,
                                     const PinholeCamera& camera, const DepthConfig& config = {});

}  // namespace photosplat::odometry
