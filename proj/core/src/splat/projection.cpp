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

#include "photosplat/splat/projection.hpp"

#include <cmath>

namespace photosplat::splat {
namespace {

template <typename T>
using M3 = Eigen::Matrix<T, 3, 3>;
template <typename T>
using M23 = Eigen::Matrix<T, 2, 3>;
template <typename T>
using V3 = Eigen::Matrix<T, 3, 1>;

// Everything the backward pass needs, recomputed from the parameters.
template <typename T>
struct Intermediates {
  M3<T> w;       // world-to-camera rotation
  V3<T> t;       // center in camera coordinates
  M3<T> r;       // Gaussian rotation (normalized quaternion)
  V3<T> s;       // scales
  M3<T> m;       // r * diag(s)
  M3<T> sigma;   // world covariance
  M3<T> v;       // camera covariance
  M23<T> j;      // projection Jacobian at the center
  Eigen::Matrix<T, 2, 2> cov;
};

template <typename T>
M3<T> rotation_from(const Eigen::Vector4d& q_raw) {
  const Eigen::Matrix<T, 4, 1> q = q_raw.cast<T>().normalized();
  const T w = q[0], x = q[1], y = q[2], z = q[3];
  M3<T> r;
  r << T(1) - T(2) * (y * y + z * z), T(2) * (x * y - w * z), T(2) * (x * z + w * y),
      T(2) * (x * y + w * z), T(1) - T(2) * (x * x + z * z), T(2) * (y * z - w * x),
      T(2) * (x * z - w * y), T(2) * (y * z + w * x), T(1) - T(2) * (x * x + y * y);
  return r;
}

template <typename T>
Intermediates<T> intermediates(const Gaussian3d& g, const PinholeCamera& camera,
                               const Se3Pose& view_pose) {
  Intermediates<T> k;
  const Se3Pose view = view_pose.inverse();
  k.w = view.rotation_matrix().cast<T>();
  k.t = k.w * g.position.cast<T>() + view.translation().cast<T>();
  k.r = rotation_from<T>(g.rotation);
  k.s = g.log_scale.cast<T>().array().exp();
  k.m = k.r * k.s.asDiagonal();
  k.sigma = k.m * k.m.transpose();
  k.v = k.w * k.sigma * k.w.transpose();
  const T fx = T(camera.fx()), fy = T(camera.fy());
  const T z = k.t.z();
  k.j << fx / z, T(0), -fx * k.t.x() / (z * z), T(0), fy / z, -fy * k.t.y() / (z * z);
  k.cov = k.j * k.v * k.j.transpose();
  k.cov(0, 0) += T(kCovarianceFloor);
  k.cov(1, 1) += T(kCovarianceFloor);
  return k;
}

}  // namespace

GaussianGradient& GaussianGradient::operator+=(const GaussianGradient& o) {
  position += o.position;
  log_scale += o.log_scale;
  rotation += o.rotation;
  opacity_logit += o.opacity_logit;
  color += o.color;
  return *this;
}

bool GaussianGradient::all_finite() const {
  return position.allFinite() && log_scale.allFinite() && rotation.allFinite() &&
         std::isfinite(opacity_logit) && color.allFinite();
}

template <typename T>
std::optional<ProjectedGaussian<T>> project_gaussian(const Gaussian3d& g, const PinholeCamera& camera,
                                                     const Se3Pose& view_pose) {
  const auto k = intermediates<T>(g, camera, view_pose);
  if (!(k.t.z() > T(kNearPlane))) return std::nullopt;
  ProjectedGaussian<T> p;
  p.depth = k.t.z();
  p.mean2d << T(camera.fx()) * k.t.x() / k.t.z() + T(camera.cx()),
      T(camera.fy()) * k.t.y() / k.t.z() + T(camera.cy());
  p.cov2d = k.cov;
  const T det = k.cov(0, 0) * k.cov(1, 1) - k.cov(0, 1) * k.cov(0, 1);
  p.conic << k.cov(1, 1) / det, -k.cov(0, 1) / det, k.cov(0, 0) / det;
  p.color = g.color.cast<T>();
  p.opacity = T(g.opacity());
  p.min_power = T(std::log((1.0 / 255.0) / g.opacity()) - 1e-3);
  return p;
}

template <typename T>
void project_gaussian_backward(const Gaussian3d& g, const PinholeCamera& camera,
                               const Se3Pose& view_pose, const Eigen::Matrix<T, 2, 1>& d_mean2d,
                               const Eigen::Matrix<T, 3, 1>& d_conic, GaussianGradient& out) {
  const auto k = intermediates<T>(g, camera, view_pose);
  const T fx = T(camera.fx()), fy = T(camera.fy());
  const T x = k.t.x(), y = k.t.y(), z = k.t.z();

  // Conic (a, b, c) from covariance (A, B, C).
  const T A = k.cov(0, 0), B = k.cov(0, 1), C = k.cov(1, 1);
  const T det = A * C - B * B;
  const T d2 = det * det;
  const T ga = d_conic[0], gb = d_conic[1], gc = d_conic[2];
  const T dA = ga * (-C * C / d2) + gb * (B * C / d2) + gc * (-B * B / d2);
  const T dB = ga * (T(2) * B * C / d2) + gb * (-(det + T(2) * B * B) / d2) + gc * (T(2) * A * B / d2);
  const T dC = ga * (-B * B / d2) + gb * (A * B / d2) + gc * (-A * A / d2);
  Eigen::Matrix<T, 2, 2> gcov;
  gcov << dA, dB / T(2), dB / T(2), dC;

  // cov = J V J^T
  const M3<T> d_v = k.j.transpose() * gcov * k.j;
  const M23<T> d_j = T(2) * gcov * k.j * k.v;

  // Center in camera coordinates, through the mean and J.
  V3<T> d_t;
  d_t.x() = d_mean2d.x() * fx / z + d_j(0, 2) * (-fx / (z * z));
  d_t.y() = d_mean2d.y() * fy / z + d_j(1, 2) * (-fy / (z * z));
  d_t.z() = d_mean2d.x() * (-fx * x / (z * z)) + d_mean2d.y() * (-fy * y / (z * z)) +
            d_j(0, 0) * (-fx / (z * z)) + d_j(0, 2) * (T(2) * fx * x / (z * z * z)) +
            d_j(1, 1) * (-fy / (z * z)) + d_j(1, 2) * (T(2) * fy * y / (z * z * z));
  out.position += (k.w.transpose() * d_t).template cast<double>();

  // V = W Sigma W^T, Sigma = M M^T, M = R diag(s)
  const M3<T> d_sigma = k.w.transpose() * d_v * k.w;
  const M3<T> d_m = T(2) * d_sigma * k.m;
  const M3<T> rt_dm = k.r.transpose() * d_m;
  for (int i = 0; i < 3; ++i) out.log_scale[i] += static_cast<double>(k.s[i] * rt_dm(i, i));
  const M3<T> gr = d_m * k.s.asDiagonal();

  const Eigen::Matrix<T, 4, 1> q_raw = g.rotation.cast<T>();
  const T norm = q_raw.norm();
  const Eigen::Matrix<T, 4, 1> q = q_raw / norm;
  const T qw = q[0], qx = q[1], qy = q[2], qz = q[3];
  Eigen::Matrix<T, 4, 1> dq;
  dq[0] = T(2) * (-qz * gr(0, 1) + qy * gr(0, 2) + qz * gr(1, 0) - qx * gr(1, 2) - qy * gr(2, 0) +
                  qx * gr(2, 1));
  dq[1] = T(2) * (qy * gr(0, 1) + qz * gr(0, 2) + qy * gr(1, 0) - T(2) * qx * gr(1, 1) -
                  qw * gr(1, 2) + qz * gr(2, 0) + qw * gr(2, 1) - T(2) * qx * gr(2, 2));
  dq[2] = T(2) * (-T(2) * qy * gr(0, 0) + qx * gr(0, 1) + qw * gr(0, 2) + qx * gr(1, 0) +
                  qz * gr(1, 2) - qw * gr(2, 0) + qz * gr(2, 1) - T(2) * qy * gr(2, 2));
  dq[3] = T(2) * (-T(2) * qz * gr(0, 0) - qw * gr(0, 1) + qx * gr(0, 2) + qw * gr(1, 0) -
                  T(2) * qz * gr(1, 1) + qy * gr(1, 2) + qx * gr(2, 0) + qy * gr(2, 1));
  // Through the normalization q / |q|.
  const Eigen::Matrix<T, 4, 1> d_raw = (dq - q * q.dot(dq)) / norm;
  out.rotation += d_raw.template cast<double>();
}

template std::optional<ProjectedGaussian<float>> project_gaussian<float>(const Gaussian3d&,
                                                                         const PinholeCamera&,
                                                                         const Se3Pose&);
template std::optional<ProjectedGaussian<double>> project_gaussian<double>(const Gaussian3d&,
                                                                           const PinholeCamera&,
                                                                           const Se3Pose&);
template void project_gaussian_backward<float>(const Gaussian3d&, const PinholeCamera&,
                                               const Se3Pose&, const Eigen::Vector2f&,
                                               const Eigen::Vector3f&, GaussianGradient&);
template void project_gaussian_backward<double>(const Gaussian3d&, const PinholeCamera&,
                                                const Se3Pose&, const Eigen::Vector2d&,
                                                const Eigen::Vector3d&, GaussianGradient&);

}  // namespace photosplat::splat
