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

#include <optional>

#include "photosplat/core/camera.hpp"
#include "photosplat/odometry/frame.hpp"

namespace photosplat::odometry {

struct WarpResult {
  double u = 0.0;
  double v = 0.0;
  double inverse_depth = 0.0;
};

// target_from_host = inverse(target.pose) * host.pose
inline Se3Pose relative_pose(const PhotometricFrame& host, const PhotometricFrame& target) {
  return target.pose.inverse() * host.pose;
}

// Reprojects a host pixel with inverse depth into the target camera. An exact
// identity transform returns the input pixel unchanged. nullopt when the point
// lands behind the camera or outside the image.
std::optional<WarpResult> try_warp(double u, double v, double inverse_depth,
                                   const Se3Pose& target_from_host, const PinholeCamera& camera);

// Throws kInvalidDepth for a non-positive inverse depth and kNotVisible when
// the point does not land in the target image.
WarpResult warp_point(const TrackedPoint& point, const PhotometricFrame& host,
                      const PhotometricFrame& target, const PinholeCamera& camera);

// (s_j a_j) / (s_i a_i)
inline double gain_ratio(double host_exposure, double host_log_a, double target_exposure,
                         double target_log_a) {
  return (target_exposure * std::exp(target_log_a)) / (host_exposure * std::exp(host_log_a));
}

// r = (I_j[p_j] - b_j) - (s_j a_j) / (s_i a_i) * (I_i[p_i] - b_i) at full
// resolution. nullopt when the point is not visible in the target.
std::optional<double> photometric_residual(const TrackedPoint& point, const PhotometricFrame& host,
                                           const PhotometricFrame& target,
                                           const PinholeCamera& camera);

// Residual plus its derivatives. The twist derivative is for a left
// perturbation target_from_host <- exp(delta) * target_from_host.
struct ResidualLinearization {
  double residual = 0.0;
  Eigen::Matrix<double, 6, 1> d_twist = Eigen::Matrix<double, 6, 1>::Zero();
  double d_log_a = 0.0;  // w.r.t. the target's log a
  double d_b = 0.0;      // w.r.t. the target's b
  double d_inverse_depth = 0.0;
  double target_u = 0.0;  // level coordinates
  double target_v = 0.0;
};

// Host-side quantities that do not change while a target is optimized.
struct HostSample {
  Vec3 ray;          // unit-depth ray through the level-0 pixel
  double intensity;  // I_i[p_i] at the pyramid level
  double u;          // level-0 host pixel
  double v;
};

std::optional<HostSample> sample_host(const TrackedPoint& point, const PhotometricFrame& host,
                                      const PinholeCamera& camera, int level);

struct TargetState {
  Se3Pose target_from_host;
  double log_a = 0.0;
  double b = 0.0;
};

// Evaluates the residual at pyramid `level` of the target. `camera` is the
// level-0 camera. nullopt when not visible.
std::optional<ResidualLinearization> linearize_residual(const HostSample& host_sample,
                                                        double inverse_depth,
                                                        const PhotometricFrame& host,
                                                        const PhotometricFrame& target,
                                                        const TargetState& state,
                                                        const PinholeCamera& camera, int level);

}  // namespace photosplat::odometry
