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
#include <optional>
#include <vector>

#include "photosplat/core/camera.hpp"
#include "photosplat/core/image.hpp"
#include "photosplat/harness/synthetic.hpp"

namespace photosplat::harness {

// On disk:
//   intrinsics.txt          "fx fy cx cy width height"
//   images/NNNNNN.png|pgm   frames, numbered from 0 without gaps
//   groundtruth.txt         optional TUM trajectory, one line per frame
//   exposures.txt           optional "frame_index exposure" lines
//   depth/NNNNNN.pfm        optional z-depth maps
struct Dataset {
  PinholeCamera camera{1.0, 1.0, 0.0, 0.0, 1, 1};
  std::vector<ColorImage> color;
  std::vector<IntensityImage> gray;
  std::optional<std::vector<Se3Pose>> trajectory;
  std::map<int, double> exposures;
  std::map<int, std::vector<float>> depth;

  std::size_t size() const { return color.size(); }
};

// Throws kIo naming the offending path, and kInvalidArgument when the
// intrinsics disagree with an image or the trajectory line count differs from
// the frame count (both counts in the message).
Dataset load_dataset(const std::filesystem::path& dir);

// Writes every frame as PNG, the ground-truth trajectory and depth maps.
void write_dataset(const std::filesystem::path& dir, const SyntheticScene& scene);

// Converts a synthetic scene in memory, as load(write(scene)) would.
Dataset dataset_from_scene(const SyntheticScene& scene);

}  // namespace photosplat::harness
