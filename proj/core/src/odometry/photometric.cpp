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

#include "photosplat/odometry/photometric.hpp"

#include "photosplat/core/error.hpp"

namespace photosplat::odometry {

std::optional<WarpResult> try_warp(double u, double v, double inverse_depth,
                                   const Se3Pose& target_from_host, const PinholeCamera& camera) {
  if (!(inverse_depth > 0.0)) return std::nullopt;
  if (target_from_host.is_exact_identity()) {
    if (!camera.contains(u, v)) return std::nullopt;
    return WarpResult{u, v, inverse_depth};
  }
  // Scaled point R * ray + rho * t projects like the real point and stays
  // finite as rho -> 0.
  const Vec3 scaled = target_from_host.rotation() * camera.ray(u, v) +
                      inverse_depth * target_from_host.translation();
  const auto proj = camera.try_project(scaled);
  if (!proj || !camera.contains(proj->u, proj->v)) return std::nullopt;
  return WarpResult{proj->u, proj->v, inverse_depth / scaled.z()};
}

WarpResult warp_point(const TrackedPoint& point, const PhotometricFrame& host,
                      const PhotometricFrame& target, const PinholeCamera& camera) {
  if (!(point.inverse_depth > 0.0)) {
    throw_error(ErrorCode::kInvalidDepth, "inverse depth must be positive");
  }
  auto w = try_warp(point.u, point.v, point.inverse_depth, relative_pose(host, target), camera);
  if (!w) {
    throw_error(ErrorCode::kNotVisible, "point does not project into frame " +
                                            std::to_string(target.id));
  }
  return *w;
}

std::optional<double> photometric_residual(const TrackedPoint& point, const PhotometricFrame& host,
                                           const PhotometricFrame& target,
                                           const PinholeCamera& camera) {
  auto w = try_warp(point.u, point.v, point.inverse_depth, relative_pose(host, target), camera);
  if (!w) return std::nullopt;
  const auto ij = try_bilinear_sample(target.image(), w->u, w->v);
  const auto ii = try_bilinear_sample(host.image(), point.u, point.v);
  if (!ij || !ii) return std::nullopt;
  const double ratio = gain_ratio(host.exposure, host.log_a, target.exposure, target.log_a);
  return (*ij - target.affine_b) - ratio * (*ii - host.affine_b);
}

std::optional<HostSample> sample_host(const TrackedPoint& point, const PhotometricFrame& host,
                                      const PinholeCamera& camera, int level) {
  if (level >= host.pyramid.num_levels()) return std::nullopt;
  const double ul = coordinate_at_level(point.u, level);
  const double vl = coordinate_at_level(point.v, level);
  const auto value = try_bilinear_sample(host.pyramid.level(level), ul, vl);
  if (!value) return std::nullopt;
  return HostSample{camera.ray(point.u, point.v), *value, point.u, point.v};
}

std::optional<ResidualLinearization> linearize_residual(const HostSample& host_sample,
                                                        double inverse_depth,
                                                        const PhotometricFrame& host,
                                                        const PhotometricFrame& target,
                                                        const TargetState& state,
                                                        const PinholeCamera& camera, int level) {
  if (!(inverse_depth > 0.0) || level >= target.pyramid.num_levels()) return std::nullopt;
  const IntensityImage& image = target.pyramid.level(level);
  const double scale = 1.0 / static_cast<double>(1 << level);

  const Se3Pose& t = state.target_from_host;
  double u0, v0;
  Vec3 point;  // target-frame point
  const bool identity = t.is_exact_identity();
  if (identity) {
    point = host_sample.ray / inverse_depth;
    u0 = host_sample.u;
    v0 = host_sample.v;
  } else {
    point = t.rotation() * (host_sample.ray / inverse_depth) + t.translation();
    if (!(point.z() > PinholeCamera::kMinDepth)) return std::nullopt;
    u0 = camera.fx() * point.x() / point.z() + camera.cx();
    v0 = camera.fy() * point.y() / point.z() + camera.cy();
  }
  const double ul = coordinate_at_level(u0, level);
  const double vl = coordinate_at_level(v0, level);
  const auto s = try_sample_with_gradient(image, ul, vl);
  if (!s) return std::nullopt;

  const double ratio = gain_ratio(host.exposure, host.log_a, target.exposure, state.log_a);
  ResidualLinearization out;
  out.residual = (s->value - state.b) - ratio * (host_sample.intensity - host.affine_b);
  out.target_u = ul;
  out.target_v = vl;
  out.d_b = -1.0;
  out.d_log_a = -ratio * (host_sample.intensity - host.affine_b);

  // Image gradient in level-0 pixel units.
  const double gx = s->gx * scale;
  const double gy = s->gy * scale;
  const double iz = 1.0 / point.z();
  // d(residual)/d(point) = g^T * d(pi)/d(point)
  const Vec3 d_point(gx * camera.fx() * iz, gy * camera.fy() * iz,
                     -(gx * camera.fx() * point.x() + gy * camera.fy() * point.y()) * iz * iz);
  out.d_twist.head<3>() = d_point;
  out.d_twist.tail<3>() = point.cross(d_point);
  // pi(R ray / rho + t) = pi(R ray + rho t), so d/d(rho) = J_pi(point) t / rho.
  out.d_inverse_depth = d_point.dot(t.translation()) / inverse_depth;
  return out;
}

}  // namespace photosplat::odometry
