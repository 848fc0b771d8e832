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

// Seeded gradient and renderer-equivalence checks shared by the unit tests
// and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "photosplat/splat/rasterizer.hpp"

namespace checks {

using namespace photosplat;
using namespace photosplat::splat;

inline const PinholeCamera kCam32(32, 32, 15.5, 15.5, 32, 32);

// Broad, translucent Gaussians near the image center: no pixel sits on the
// 1/255 cutoff or the transmittance stop, where the render is not smooth.
inline SplatScene gradcheck_scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  SplatScene s;
  s.background = {0.2, 0.3, 0.4};
  for (int i = 0; i < 8; ++i) {
    Gaussian3d g;
    const double z = 2 + 2 * u(rng);
    g.position = {(u(rng) - 0.5) * 0.25 * z, (u(rng) - 0.5) * 0.25 * z, z};
    for (int k = 0; k < 3; ++k) g.log_scale[k] = std::log((14 + 10 * u(rng)) * z / 32);
    g.rotation = Eigen::Vector4d(u(rng) + 0.5, u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5).normalized();
    g.opacity_logit = logit(0.1 + 0.5 * u(rng));
    g.color = {u(rng), u(rng), u(rng)};
    s.gaussians.push_back(g);
  }
  return s;
}

inline double& param(Gaussian3d& g, int p) {
  if (p < 3) return g.position[p];
  if (p < 6) return g.log_scale[p - 3];
  if (p < 10) return g.rotation[p - 6];
  if (p == 10) return g.opacity_logit;
  return g.color[p - 11];
}

inline double param(const GaussianGradient& g, int p) {
  if (p < 3) return g.position[p];
  if (p < 6) return g.log_scale[p - 3];
  if (p < 10) return g.rotation[p - 6];
  if (p == 10) return g.opacity_logit;
  return g.color[p - 11];
}

struct GradCheck {
  int checked = 0;
  int failed = 0;
  double worst_ratio = 0.0;  // error / tolerance
};

// Loss = <upstream, render>; central differences with h = 1e-4, relative
// tolerance 1e-3 and absolute floor 1e-6.
inline GradCheck gradient_check(std::uint64_t seed) {
  const SplatScene scene = gradcheck_scene(seed);
  std::mt19937_64 rng(seed + 1000);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> up(32 * 32 * 3);
  for (auto& v : up) v = u(rng);
  const Se3Pose pose;
  auto loss = [&](const SplatScene& s) {
    const auto r = render<double>(s, kCam32, pose);
    double l = 0;
    for (std::size_t i = 0; i < up.size(); ++i) l += up[i] * r.color[i];
    return l;
  };
  const auto fwd = render<double>(scene, kCam32, pose);
  const auto grads = render_backward<double>(scene, kCam32, pose, fwd, up);
  GradCheck out;
  const double h = 1e-4;
  for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
    for (int p = 0; p < 14; ++p) {
      SplatScene a = scene, b = scene;
      param(a.gaussians[i], p) += h;
      param(b.gaussians[i], p) -= h;
      const double fd = (loss(a) - loss(b)) / (2 * h);
      const double err = std::abs(fd - param(grads.gaussians[i], p));
      const double tol = std::max(1e-6, 1e-3 * std::abs(fd));
      ++out.checked;
      if (err > tol) ++out.failed;
      out.worst_ratio = std::max(out.worst_ratio, err / tol);
    }
  }
  return out;
}

// Random scene with up to 32 Gaussians of mixed size and opacity, some
// partly off-screen or overlapping in depth.
inline SplatScene oracle_scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, 32);
  return oracle::random_scene(rng, count(rng), 0.02, 0.4);
}

inline double oracle_difference(std::uint64_t seed, double* max_transmittance_diff = nullptr) {
  const SplatScene scene = oracle_scene(seed);
  const auto tiled = render<float>(scene, kCam32, Se3Pose());
  std::vector<double> trans;
  const auto ref = oracle::render(scene, kCam32, Se3Pose(), &trans);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.data().size(); ++i) {
    worst = std::max(worst, std::abs(static_cast<double>(tiled.color[i]) - ref.data()[i]));
  }
  if (max_transmittance_diff) {
    *max_transmittance_diff = 0.0;
    for (std::size_t i = 0; i < trans.size(); ++i) {
      *max_transmittance_diff =
          std::max(*max_transmittance_diff, std::abs(static_cast<double>(tiled.transmittance[i]) - trans[i]));
    }
  }
  return worst;
}

}  // namespace checks
