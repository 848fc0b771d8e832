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

#include "photosplat/core/camera.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "photosplat/core/error.hpp"

namespace photosplat {

PinholeCamera::PinholeCamera(double fx, double fy, double cx, double cy, int width, int height)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy), width_(width), height_(height) {
  const bool ok = std::isfinite(fx) && std::isfinite(fy) && std::isfinite(cx) &&
                  std::isfinite(cy) && fx > 0.0 && fy > 0.0 && width > 0 && height > 0 &&
                  cx >= 0.0 && cx < width && cy >= 0.0 && cy < height;
  if (!ok) {
    std::ostringstream msg;
    msg << "invalid pinhole camera fx=" << fx << " fy=" << fy << " cx=" << cx << " cy=" << cy
        << " size=" << width << "x" << height;
    throw_error(ErrorCode::kInvalidArgument, msg.str());
  }
}

PinholeCamera PinholeCamera::at_level(int level) const {
  if (level == 0) return *this;
  const double scale = 1.0 / static_cast<double>(1 << level);
  const int w = width_ >> level;
  const int h = height_ >> level;
  // Principal point can land a fraction of a pixel past the shrunken border on
  // odd sizes; keep it inside so the invariant holds at every level.
  const double cx = std::min(coordinate_at_level(cx_, level), w - 1e-6);
  const double cy = std::min(coordinate_at_level(cy_, level), h - 1e-6);
  return PinholeCamera(fx_ * scale, fy_ * scale, std::max(cx, 0.0), std::max(cy, 0.0), w, h);
}

std::optional<Projection> PinholeCamera::try_project(const Vec3& p) const {
  if (!(p.z() > kMinDepth)) return std::nullopt;
  return Projection{fx_ * p.x() / p.z() + cx_, fy_ * p.y() / p.z() + cy_, p.z()};
}

Projection PinholeCamera::project(const Vec3& p) const {
  auto proj = try_project(p);
  if (!proj) {
    throw_error(ErrorCode::kBehindCamera, "point depth " + std::to_string(p.z()) +
                                              " is not in front of the camera");
  }
  return *proj;
}

Vec3 PinholeCamera::ray(double u, double v) const {
  return Vec3((u - cx_) / fx_, (v - cy_) / fy_, 1.0);
}

Vec3 backproject(double u, double v, double inverse_depth, const PinholeCamera& camera,
                 const Se3Pose& pose) {
  if (!(inverse_depth > 0.0) || !std::isfinite(inverse_depth)) {
    throw_error(ErrorCode::kInvalidDepth,
                "inverse depth must be positive, got " + std::to_string(inverse_depth));
  }
  return pose * (camera.ray(u, v) / inverse_depth);
}

}  // namespace photosplat
