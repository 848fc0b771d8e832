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

#include "photosplat/core/se3.hpp"

#include <cmath>

#include "photosplat/core/error.hpp"

namespace photosplat {
namespace {

constexpr double kSmallAngle = 1e-8;

Quat normalized_or_throw(const Quat& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || n < 1e-12) {
    throw_error(ErrorCode::kInvalidArgument, "quaternion must be finite and non-zero");
  }
  Quat out = q;
  out.coeffs() /= n;
  return out;
}

}  // namespace

Se3Pose::Se3Pose(const Quat& rotation, const Vec3& translation)
    : rotation_(normalized_or_throw(rotation)), translation_(translation) {
  if (!translation_.allFinite()) {
    throw_error(ErrorCode::kInvalidArgument, "translation must be finite");
  }
}

Se3Pose Se3Pose::operator*(const Se3Pose& rhs) const {
  Se3Pose out;
  out.rotation_ = rotation_ * rhs.rotation_;
  out.rotation_.coeffs() /= out.rotation_.norm();
  out.translation_ = rotation_ * rhs.translation_ + translation_;
  return out;
}

Se3Pose Se3Pose::inverse() const {
  Se3Pose out;
  out.rotation_ = rotation_.conjugate();
  out.translation_ = -(out.rotation_ * translation_);
  return out;
}

bool Se3Pose::is_exact_identity() const {
  return rotation_.w() == 1.0 && rotation_.x() == 0.0 && rotation_.y() == 0.0 &&
         rotation_.z() == 0.0 && translation_.x() == 0.0 && translation_.y() == 0.0 &&
         translation_.z() == 0.0;
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Se3Pose se3_exp(const Twist& twist) {
  if (!twist.allFinite()) {
    throw_error(ErrorCode::kInvalidArgument, "twist must be finite");
  }
  const Vec3 v = twist.head<3>();
  const Vec3 omega = twist.tail<3>();
  const double theta = omega.norm();
  const Mat3 w = skew(omega);

  Quat q;
  Mat3 jacobian;
  if (theta < kSmallAngle) {
    q = Quat(1.0, 0.5 * omega.x(), 0.5 * omega.y(), 0.5 * omega.z());
    jacobian = Mat3::Identity() + 0.5 * w;
  } else {
    const double half = 0.5 * theta;
    const double k = std::sin(half) / theta;
    q = Quat(std::cos(half), k * omega.x(), k * omega.y(), k * omega.z());
    const double theta2 = theta * theta;
    jacobian = Mat3::Identity() + (1.0 - std::cos(theta)) / theta2 * w +
               (theta - std::sin(theta)) / (theta2 * theta) * w * w;
  }
  return Se3Pose(q, jacobian * v);
}

Twist se3_log(const Se3Pose& pose) {
  Quat q = pose.rotation();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Vec3 imag = q.vec();
  const double sin_half = imag.norm();
  Vec3 omega;
  if (sin_half < kSmallAngle) {
    omega = 2.0 * imag / q.w();
  } else {
    const double theta = 2.0 * std::atan2(sin_half, q.w());
    omega = theta / sin_half * imag;
  }
  const double theta = omega.norm();
  const Mat3 w = skew(omega);
  Mat3 inv_jacobian;
  if (theta < kSmallAngle) {
    inv_jacobian = Mat3::Identity() - 0.5 * w;
  } else {
    const double half = 0.5 * theta;
    const double coef = (1.0 - half * std::cos(half) / std::sin(half)) / (theta * theta);
    inv_jacobian = Mat3::Identity() - 0.5 * w + coef * w * w;
  }
  Twist out;
  out.head<3>() = inv_jacobian * pose.translation();
  out.tail<3>() = omega;
  return out;
}

double rotation_angle(const Se3Pose& pose) {
  const Quat& q = pose.rotation();
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

double rotation_distance(const Se3Pose& a, const Se3Pose& b) {
  return rotation_angle(a.inverse() * b);
}

double translation_distance(const Se3Pose& a, const Se3Pose& b) {
  return (a.translation() - b.translation()).norm();
}

}  // namespace photosplat
