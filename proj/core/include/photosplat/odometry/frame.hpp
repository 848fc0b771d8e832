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
#include <cstdint>
#include <memory>

#include "photosplat/core/image.hpp"
#include "photosplat/core/se3.hpp"

namespace photosplat::odometry {

// Image with exposure s and affine brightness (a, b). `a` is stored as its
// logarithm so it stays positive under optimization.
struct PhotometricFrame {
  int id = 0;
  ImagePyramid pyramid;
  std::shared_ptr<const ColorImage> color;
  double exposure = 1.0;
  double log_a = 0.0;
  double affine_b = 0.0;
  Se3Pose pose;  // camera-to-world

  double affine_a() const { return std::exp(log_a); }
  const IntensityImage& image() const { return pyramid.finest(); }
  int width() const { return image().width(); }
  int height() const { return image().height(); }
};

// Builds the pyramid and validates exposure > 0. `color` may be null, in
// which case the grayscale image is replicated into RGB.
PhotometricFrame make_frame(int id, const IntensityImage& gray,
                            std::shared_ptr<const ColorImage> color, int pyramid_levels,
                            double exposure = 1.0);

enum class PointStatus : std::uint8_t {
  kPoseTracking = 0,
  kPositionOnly = 1,
  kGradientFill = 2,
};

const char* to_string(PointStatus status);

struct TrackedPoint {
  static constexpr double kMinInverseDepth = 1e-4;
  static constexpr double kMaxInverseDepth = 1e4;

  int host_frame = 0;
  double u = 0.0;
  double v = 0.0;
  double inverse_depth = 1.0;
  PointStatus status = PointStatus::kPoseTracking;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();
  // Cleared when depth refinement hit the inverse-depth bounds.
  bool depth_valid = true;
};

struct PhotometricEnergy {
  double total = 0.0;
  int residual_count = 0;
  double huber_threshold = 0.03;
};

// r^2 inside the threshold, 2k|r| - k^2 outside.
inline double huber_cost(double r, double k) {
  const double a = std::abs(r);
  return a <= k ? r * r : k * (2.0 * a - k);
}

inline double huber_weight(double r, double k) {
  const double a = std::abs(r);
  return a <= k ? 1.0 : k / a;
}

}  // namespace photosplat::odometry
