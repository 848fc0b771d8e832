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

#include <array>
#include <span>
#include <vector>

#include "photosplat/splat/gaussian.hpp"
#include "photosplat/splat/projection.hpp"

namespace photosplat::splat {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-15;
};

struct LearningRates {
  double position = 1.6e-4;  // multiplied by the scene extent
  double log_scale = 5e-3;
  double rotation = 1e-3;
  double opacity = 5e-2;
  double color = 2.5e-3;
};

// One Adam update of a single scalar at step t >= 1.
void adam_update(double& param, double grad, double& m, double& v, int t, double lr,
                 const AdamConfig& config);

// Adam over every Gaussian parameter; one shared step counter, per-group
// learning rates.
class AdamOptimizer {
 public:
  static constexpr int kParams = 14;

  AdamOptimizer() = default;
  AdamOptimizer(std::size_t gaussians, const AdamConfig& config);

  // Renormalizes rotations afterwards. Throws kInvalidArgument when the
  // gradient count differs from the state size.
  void step(SplatScene& scene, std::span<const GaussianGradient> grads, const LearningRates& rates,
            double scene_extent);

  // After densification: entry i of the new state copies old state
  // origin[i], or starts at zero when origin[i] < 0.
  void remap(std::span<const int> origin);

  int steps() const { return t_; }
  std::size_t size() const { return m_.size(); }

 private:
  AdamConfig config_;
  int t_ = 0;
  std::vector<std::array<double, kParams>> m_;
  std::vector<std::array<double, kParams>> v_;
};

}  // namespace photosplat::splat
