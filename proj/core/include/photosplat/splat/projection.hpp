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

#include <limits>
#include <optional>

#include <Eigen/Core>

#include "photosplat/core/camera.hpp"
#include "photosplat/splat/gaussian.hpp"

namespace photosplat::splat {

inline constexpr double kNearPlane = 0.01;
inline constexpr double kCovarianceFloor = 0.3;  // px^2, added to the diagonal

template <typename T>
struct ProjectedGaussian {
  using V2 = Eigen::Matrix<T, 2, 1>;
  using V3 = Eigen::Matrix<T, 3, 1>;

  V2 mean2d = V2::Zero();
  Eigen::Matrix<T, 2, 2> cov2d = Eigen::Matrix<T, 2, 2>::Identity();
  V3 conic = V3::Zero();  // inverse covariance as (a, b, c) for [[a, b], [b, c]]
  T depth = T(0);
  V3 color = V3::Zero();
  T opacity = T(0);
  // Exponents below this give alpha under the 1/255 cutoff, with some slack.
  T min_power = -std::numeric_limits<T>::infinity();
};

// Parameter gradients of one Gaussian, laid out like Gaussian3d.
struct GaussianGradient {
  Vec3 position = Vec3::Zero();
  Vec3 log_scale = Vec3::Zero();
  Eigen::Vector4d rotation = Eigen::Vector4d::Zero();
  double opacity_logit = 0.0;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();

  GaussianGradient& operator+=(const GaussianGradient& o);
  bool all_finite() const;
};

// EWA projection into the camera at `view_pose` (camera-to-world). Returns
// nullopt when the center is not beyond the near plane.
template <typename T>
std::optional<ProjectedGaussian<T>> project_gaussian(const Gaussian3d& g, const PinholeCamera& camera,
                                                     const Se3Pose& view_pose);

// Chain rule from the projected mean and conic back to position, log_scale
// and rotation; adds into `out`.
template <typename T>
void project_gaussian_backward(const Gaussian3d& g, const PinholeCamera& camera,
                               const Se3Pose& view_pose, const Eigen::Matrix<T, 2, 1>& d_mean2d,
                               const Eigen::Matrix<T, 3, 1>& d_conic, GaussianGradient& out);

}  // namespace photosplat::splat
