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

#include "photosplat/core/se3.hpp"

namespace photosplat {

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

// Ideal pinhole camera, no distortion. Pixel (x, y) has its center at
// coordinates (x, y).
class PinholeCamera {
 public:
  static constexpr double kMinDepth = 1e-9;

  PinholeCamera(double fx, double fy, double cx, double cy, int width, int height);

  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }
  int width() const { return width_; }
  int height() const { return height_; }

  // Intrinsics for a pyramid level built by 2x2 box downsampling.
  PinholeCamera at_level(int level) const;

  // Throws kBehindCamera for z <= kMinDepth.
  Projection project(const Vec3& point_in_camera) const;
  std::optional<Projection> try_project(const Vec3& point_in_camera) const;

  // Unit-depth ray ((u - cx) / fx, (v - cy) / fy, 1).
  Vec3 ray(double u, double v) const;

  bool contains(double u, double v, double margin = 0.0) const {
    return u >= margin && v >= margin && u <= width_ - 1 - margin && v <= height_ - 1 - margin;
  }

  friend bool operator==(const PinholeCamera&, const PinholeCamera&) = default;

 private:
  double fx_, fy_, cx_, cy_;
  int width_, height_;
};

// Pixel coordinate at pyramid level `level` for a level-0 coordinate.
inline double coordinate_at_level(double coord, int level) {
  return (coord + 0.5) / static_cast<double>(1 << level) - 0.5;
}

// world = pose * (ray(u, v) / inverse_depth). Throws kInvalidDepth for inverse_depth <= 0.
Vec3 backproject(double u, double v, double inverse_depth, const PinholeCamera& camera,
                 const Se3Pose& pose);

}  // namespace photosplat
