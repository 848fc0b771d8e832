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

#include "photosplat/core/se3.hpp"

namespace photosplat::odometry {

struct StampedPose {
  double timestamp = 0.0;
  Se3Pose pose;
};

// TUM format: `timestamp tx ty tz qx qy qz qw`, 9 significant digits.
// Lines starting with '#' are skipped on read.
void write_tum(const std::filesystem::path& path, std::span<const StampedPose> poses);
std::vector<StampedPose> read_tum(const std::filesystem::path& path);

// `frame_index exposure` per line. Missing frames default to 1.0.
std::map<int, double> read_exposures(const std::filesystem::path& path);
void write_exposures(const std::filesystem::path& path, const std::map<int, double>& exposures);

}  // namespace photosplat::odometry
