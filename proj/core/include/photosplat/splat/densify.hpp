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

#include <vector>

#include "photosplat/splat/gaussian.hpp"
#include "photosplat/splat/rasterizer.hpp"

namespace photosplat::splat {

struct DensifyConfig {
  double grad_threshold = 2e-4;    // mean |dL/d mean2d| in NDC
  double prune_opacity = 0.005;
  double prune_scale = 0.1;        // fraction of the scene extent
  double split_scale = 0.01;       // fraction of the scene extent
  double split_shrink = 1.6;
};

// Mean screen-space gradient per Gaussian over the views that saw it.
struct DensifyStats {
  std::vector<double> grad_sum;
  std::vector<int> count;

  explicit DensifyStats(std::size_t n = 0) : grad_sum(n, 0.0), count(n, 0) {}
  void accumulate(const RenderGradients& grads);
  void reset(std::size_t n);
};

struct DensifyReport {
  int cloned = 0;
  int split = 0;
  int pruned = 0;
  // For each Gaussian of the new scene, its index before the call, or -1
  // for a newly created one.
  std::vector<int> origin;
};

// Prunes low-opacity and oversized Gaussians, then clones (small) or splits
// (large) the survivors whose mean gradient exceeds the threshold. Splits
// place two children at +-1 sigma along the largest axis with scales divided
// by split_shrink. The new scene keeps survivors in order, then clones, then
// split children. Stats are reset. Throws kEmptyScene when nothing survives.
DensifyReport densify_and_prune(SplatScene& scene, DensifyStats& stats, const DensifyConfig& config,
                                double scene_extent);

}  // namespace photosplat::splat
