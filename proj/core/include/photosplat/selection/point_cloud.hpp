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

#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "photosplat/core/camera.hpp"
#include "photosplat/odometry/frame.hpp"

namespace photosplat::selection {

struct ColoredPoint {
  Vec3 position = Vec3::Zero();
  Eigen::Vector3d color = Eigen::Vector3d::Zero();  // RGB in [0, 1]
  odometry::PointStatus status = odometry::PointStatus::kPoseTracking;
};

// Backprojects every point with a valid depth into world coordinates using its
// host pose. Throws kInvalidState when a host frame has no pose.
std::vector<ColoredPoint> export_point_cloud(std::span<const odometry::TrackedPoint> cloud,
                                             const PinholeCamera& camera,
                                             const std::map<int, Se3Pose>& host_poses);

// ASCII PLY: x y z (float), red green blue status (uchar; status 0 tracking,
// 1 extra, 2 fill).
void write_point_cloud_ply(const std::filesystem::path& path, std::span<const ColoredPoint> points);
std::vector<ColoredPoint> read_point_cloud_ply(const std::filesystem::path& path);

}  // namespace photosplat::selection
