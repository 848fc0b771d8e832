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

// Independent reference implementations. Nothing here calls into the code
// under test except for plain data types.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "photosplat/core/camera.hpp"
#include "photosplat/core/image.hpp"
#include "photosplat/core/se3.hpp"
#include "photosplat/splat/gaussian.hpp"

namespace oracle {

using photosplat::ColorImage;
using photosplat::IntensityImage;
using photosplat::PinholeCamera;
using photosplat::Se3Pose;

// Bilinear interpolation written out with nested loops over the four taps.
inline double bilinear(const IntensityImage& img, double u, double v) {
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  double sum = 0.0;
  for (int dy = 0; dy <= 1; ++dy) {
    for (int dx = 0; dx <= 1; ++dx) {
      const int x = std::min(x0 + dx, img.width() - 1);
      const int y = std::min(y0 + dy, img.height() - 1);
      const double wx = dx == 0 ? 1.0 - (u - x0) : (u - x0);
      const double wy = dy == 0 ? 1.0 - (v - y0) : (v - y0);
      sum += wx * wy * img.at(x, y);
    }
  }
  return sum;
}

// Rotation matrix from (w, x, y, z) via Rodrigues on the axis-angle form.
inline Eigen::Matrix3d rotation(const Eigen::Vector4d& q_in) {
  const Eigen::Vector4d q = q_in.normalized();
  const double s = q.tail<3>().norm();
  if (s < 1e-15) return Eigen::Matrix3d::Identity();
  const double angle = 2.0 * std::atan2(s, q[0]);
  const Eigen::Vector3d axis = q.tail<3>() / s;
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k + (1 - std::cos(angle)) * k * k;
}

// Per-pixel splatting in double precision with no tiles, no bounding boxes and
// no early stop: every Gaussian is evaluated at every pixel.
inline ColorImage render(const photosplat::splat::SplatScene& scene, const PinholeCamera& cam,
                         const Se3Pose& view_pose, std::vector<double>* transmittance = nullptr) {
  struct Splat {
    Eigen::Vector2d mean;
    Eigen::Matrix2d inv;
    double depth;
    double opacity;
    Eigen::Vector3d color;
    std::size_t index;
  };
  const Eigen::Matrix3d w = view_pose.rotation_matrix().transpose();
  const Eigen::Vector3d tw = -w * view_pose.translation();
  std::vector<Splat> splats;
  for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
    const auto& g = scene.gaussians[i];
    const Eigen::Vector3d p = w * g.position + tw;
    if (p.z() <= 0.01) continue;
    Eigen::Matrix<double, 2, 3> j;
    j << cam.fx() / p.z(), 0, -cam.fx() * p.x() / (p.z() * p.z()), 0, cam.fy() / p.z(),
        -cam.fy() * p.y() / (p.z() * p.z());
    const Eigen::Matrix3d r = rotation(g.rotation);
    const Eigen::Vector3d s = g.log_scale.array().exp();
    const Eigen::Matrix3d sigma = r * s.array().square().matrix().asDiagonal() * r.transpose();
    Eigen::Matrix2d cov = j * w * sigma * w.transpose() * j.transpose();
    cov += 0.3 * Eigen::Matrix2d::Identity();
    splats.push_back({{cam.fx() * p.x() / p.z() + cam.cx(), cam.fy() * p.y() / p.z() + cam.cy()},
                      cov.inverse(), p.z(), 1.0 / (1.0 + std::exp(-g.opacity_logit)), g.color, i});
  }
  std::stable_sort(splats.begin(), splats.end(),
                   [](const Splat& a, const Splat& b) { return a.depth < b.depth; });
  ColorImage out(cam.width(), cam.height());
  if (transmittance) transmittance->assign(static_cast<std::size_t>(cam.width()) * cam.height(), 1.0);
  for (int y = 0; y < cam.height(); ++y) {
    for (int x = 0; x < cam.width(); ++x) {
      Eigen::Vector3d c = Eigen::Vector3d::Zero();
      double t = 1.0;
      for (const auto& s : splats) {
        const Eigen::Vector2d d(x - s.mean.x(), y - s.mean.y());
        double a = s.opacity * std::exp(-0.5 * d.dot(s.inv * d));
        a = std::min(a, 0.99);
        if (a < 1.0 / 255.0) continue;
        c += s.color * a * t;
        t *= 1.0 - a;
      }
      c += scene.background * t;
      out.set(x, y, c);
      if (transmittance) (*transmittance)[static_cast<std::size_t>(y) * cam.width() + x] = t;
    }
  }
  return out;
}

// Random scene in front of an identity camera, kept inside the view.
inline photosplat::splat::SplatScene random_scene(std::mt19937_64& rng, int n, double min_scale,
                                                  double max_scale) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  photosplat::splat::SplatScene scene;
  scene.background = {u(rng), u(rng), u(rng)};
  for (int i = 0; i < n; ++i) {
    photosplat::splat::Gaussian3d g;
    const double z = 2.0 + 2.0 * u(rng);
    g.position = {(u(rng) - 0.5) * 0.8 * z, (u(rng) - 0.5) * 0.8 * z, z};
    for (int k = 0; k < 3; ++k) g.log_scale[k] = std::log(min_scale + (max_scale - min_scale) * u(rng));
    g.rotation = Eigen::Vector4d(u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5).normalized();
    const double o = 0.2 + 0.75 * u(rng);
    g.opacity_logit = std::log(o / (1.0 - o));
    g.color = {u(rng), u(rng), u(rng)};
    scene.gaussians.push_back(g);
  }
  return scene;
}

}  // namespace oracle
