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

#include "photosplat/splat/optimizer.hpp"

#include <cmath>

#include "photosplat/core/error.hpp"

namespace photosplat::splat {

void adam_update(double& param, double grad, double& m, double& v, int t, double lr,
                 const AdamConfig& c) {
  m = c.beta1 * m + (1.0 - c.beta1) * grad;
  v = c.beta2 * v + (1.0 - c.beta2) * grad * grad;
  const double m_hat = m / (1.0 - std::pow(c.beta1, t));
  const double v_hat = v / (1.0 - std::pow(c.beta2, t));
  param -= lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
}

AdamOptimizer::AdamOptimizer(std::size_t gaussians, const AdamConfig& config)
    : config_(config), m_(gaussians, std::array<double, kParams>{}),
      v_(gaussians, std::array<double, kParams>{}) {}

void AdamOptimizer::step(SplatScene& scene, std::span<const GaussianGradient> grads,
                         const LearningRates& rates, double scene_extent) {
  if (grads.size() != scene.gaussians.size() || m_.size() != scene.gaussians.size()) {
    throw_error(ErrorCode::kInvalidArgument, "optimizer state does not match the scene");
  }
  ++t_;
  for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
    Gaussian3d& g = scene.gaussians[i];
    const GaussianGradient& d = grads[i];
    auto& m = m_[i];
    auto& v = v_[i];
    int k = 0;
    auto upd = [&](double& p, double grad, double lr) {
      adam_update(p, grad, m[k], v[k], t_, lr, config_);
      ++k;
    };
    for (int a = 0; a < 3; ++a) upd(g.position[a], d.position[a], rates.position * scene_extent);
    for (int a = 0; a < 3; ++a) upd(g.log_scale[a], d.log_scale[a], rates.log_scale);
    for (int a = 0; a < 4; ++a) upd(g.rotation[a], d.rotation[a], rates.rotation);
    upd(g.opacity_logit, d.opacity_logit, rates.opacity);
    for (int a = 0; a < 3; ++a) upd(g.color[a], d.color[a], rates.color);
    const double norm = g.rotation.norm();
    if (norm > 0.0 && std::isfinite(norm)) g.rotation /= norm;
  }
}

void AdamOptimizer::remap(std::span<const int> origin) {
  std::vector<std::array<double, kParams>> m(origin.size(), std::array<double, kParams>{});
  std::vector<std::array<double, kParams>> v(origin.size(), std::array<double, kParams>{});
  for (std::size_t i = 0; i < origin.size(); ++i) {
    if (origin[i] >= 0) {
      m[i] = m_.at(static_cast<std::size_t>(origin[i]));
      v[i] = v_.at(static_cast<std::size_t>(origin[i]));
    }
  }
  m_ = std::move(m);
  v_ = std::move(v);
}

}  // namespace photosplat::splat
