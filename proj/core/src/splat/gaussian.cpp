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

#include "photosplat/splat/gaussian.hpp"

#include <algorithm>
#include <string>

#include "photosplat/core/error.hpp"
#include "photosplat/core/kdtree.hpp"

namespace photosplat::splat {

Mat3 quaternion_to_matrix(const Eigen::Vector4d& q_raw) {
  const Eigen::Vector4d q = q_raw.normalized();
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

double scene_extent(std::span<const selection::ColoredPoint> points) {
  if (points.empty()) return 1.0;
  Vec3 lo = points[0].position, hi = points[0].position;
  for (const auto& p : points) {
    lo = lo.cwiseMin(p.position);
    hi = hi.cwiseMax(p.position);
  }
  const double d = (hi - lo).norm();
  return d > 0.0 ? d : 1.0;
}

SplatScene init_from_point_cloud(std::span<const selection::ColoredPoint> points, double extent) {
  if (points.empty()) throw_error(ErrorCode::kInvalidArgument, "cannot initialize from an empty cloud");
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw_error(ErrorCode::kInvalidArgument, "scene extent must be positive");
  }
  std::vector<Vec3> positions;
  positions.reserve(points.size());
  for (const auto& p : points) positions.push_back(p.position);
  const KdTree<3> tree(positions);

  const double lo = 1e-4 * extent, hi = 0.1 * extent;
  SplatScene scene;
  scene.gaussians.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto near = tree.nearest(positions[i], 3, i);
    const double d = near.size() == 3 ? std::sqrt(near[2].squared_distance) : 0.0;
    Gaussian3d g;
    g.position = points[i].position;
    g.color = points[i].color.cwiseMax(0.0).cwiseMin(1.0);
    g.opacity_logit = logit(0.1);
    g.log_scale = Vec3::Constant(std::log(std::clamp(d, lo, hi)));
    scene.gaussians.push_back(g);
  }
  return scene;
}

void check_finite(const SplatScene& scene) {
  for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
    const auto& g = scene.gaussians[i];
    if (!g.position.allFinite() || !g.log_scale.allFinite() || !g.rotation.allFinite() ||
        !std::isfinite(g.opacity_logit) || !g.color.allFinite()) {
      throw_error(ErrorCode::kNonFinite, "gaussian " + std::to_string(i) + " has a non-finite parameter");
    }
  }
}

}  // namespace photosplat::splat
