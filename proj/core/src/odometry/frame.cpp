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

#include "photosplat/odometry/frame.hpp"

#include "photosplat/core/error.hpp"

namespace photosplat::odometry {

PhotometricFrame make_frame(int id, const IntensityImage& gray,
                            std::shared_ptr<const ColorImage> color, int pyramid_levels,
                            double exposure) {
  if (!(exposure > 0.0) || !std::isfinite(exposure)) {
    throw_error(ErrorCode::kInvalidArgument,
                "frame " + std::to_string(id) + ": exposure must be positive");
  }
  if (color && (color->width() != gray.width() || color->height() != gray.height())) {
    throw_error(ErrorCode::kInvalidArgument,
                "frame " + std::to_string(id) + ": color and gray sizes differ");
  }
  PhotometricFrame f;
  f.id = id;
  f.pyramid = build_pyramid(gray, pyramid_levels);
  f.color = color ? std::move(color) : std::make_shared<const ColorImage>(gray_to_color(gray));
  f.exposure = exposure;
  return f;
}

const char* to_string(PointStatus status) {
  switch (status) {
    case PointStatus::kPoseTracking: return "tracking";
    case PointStatus::kPositionOnly: return "extra";
    case PointStatus::kGradientFill: return "fill";
  }
  return "unknown";
}

}  // namespace photosplat::odometry
