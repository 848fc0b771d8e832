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

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "photosplat/core/se3.hpp"
#include "photosplat/selection/point_cloud.hpp"

namespace photosplat::splat {

struct Gaussian3d {
  Vec3 position = Vec3::Zero();
  Vec3 log_scale = Vec3::Zero();  // per-axis standard deviation, log
  // (w, x, y, z). Stored normalized; the renderer normalizes again so finite
  // differences may perturb single components.
  Eigen::Vector4d rotation{1.0, 0.0, 0.0, 0.0};
  double opacity_logit = 0.0;
  Eigen::Vector3d color = Eigen::Vector3d::Constant(0.5);

  double opacity() const { return 1.0 / (1.0 + std::exp(-opacity_logit)); }
  Vec3 scale() const { return log_scale.array().exp(); }
};

struct SplatScene {
  std::vector<Gaussian3d> gaussians;
  Eigen::Vector3d background = Eigen::Vector3d::Zero();
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Rotation matrix of the normalized quaternion (w, x, y, z).
Mat3 quaternion_to_matrix(const Eigen::Vector4d& q);

// Diagonal of the axis-aligned bounding box of the points; 1 for fewer than
// two distinct points.
double scene_extent(std::span<const selection::ColoredPoint> points);

// One isotropic Gaussian per point, sized by the distance to the third
// nearest neighbor and clamped to [1e-4, 0.1] * extent. Opacity 0.1, identity
// rotation. Throws kInvalidArgument for an empty cloud or extent <= 0.
SplatScene init_from_point_cloud(std::span<const selection::ColoredPoint> points, double extent);

// Throws kNonFinite naming the first Gaussian with a non-finite parameter.
void check_finite(const SplatScene& scene);

}  // namespace photosplat::splat
