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

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace photosplat {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
// (translation, rotation) ordering: head(3) is v, tail(3) is omega.
using Twist = Eigen::Matrix<double, 6, 1>;

// Rigid transform stored as unit quaternion + translation. When used as a
// camera pose it maps camera coordinates into world coordinates.
class Se3Pose {
 public:
  Se3Pose() = default;
  // Normalizes the quaternion; throws kInvalidArgument on a zero or non-finite input.
  Se3Pose(const Quat& rotation, const Vec3& translation);

  static Se3Pose identity() { return {}; }

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }

  Se3Pose operator*(const Se3Pose& rhs) const;
  Vec3 operator*(const Vec3& point) const { return rotation_ * point + translation_; }
  Se3Pose inverse() const;

  // Bitwise identity check (used to short-circuit exact identity warps).
  bool is_exact_identity() const;

 private:
  Quat rotation_{1.0, 0.0, 0.0, 0.0};
  Vec3 translation_{Vec3::Zero()};
};

Se3Pose se3_exp(const Twist& twist);
Twist se3_log(const Se3Pose& pose);

Mat3 skew(const Vec3& v);

// Rotation angle of the pose in radians, in [0, pi].
double rotation_angle(const Se3Pose& pose);
// Angle of a^-1 * b plus translation distance, for pose comparisons.
double rotation_distance(const Se3Pose& a, const Se3Pose& b);
double translation_distance(const Se3Pose& a, const Se3Pose& b);

}  // namespace photosplat
