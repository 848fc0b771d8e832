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

#include "photosplat/splat/densify.hpp"

#include <cmath>

#include "photosplat/core/error.hpp"

namespace photosplat::splat {

void DensifyStats::accumulate(const RenderGradients& grads) {
  if (grads.mean2d_norm.size() != grad_sum.size()) {
    throw_error(ErrorCode::kInvalidArgument, "densify stats do not match the scene");
  }
  for (std::size_t i = 0; i < grad_sum.size(); ++i) {
    if (!grads.visible[i]) continue;
    grad_sum[i] += grads.mean2d_norm[i];
    ++count[i];
  }
}

void DensifyStats::reset(std::size_t n) {
  grad_sum.assign(n, 0.0);
  count.assign(n, 0);
}

DensifyReport densify_and_prune(SplatScene& scene, DensifyStats& stats, const DensifyConfig& config,
                                double scene_extent) {
  const std::size_t n = scene.gaussians.size();
  if (stats.grad_sum.size() != n) {
    throw_error(ErrorCode::kInvalidArgument, "densify stats do not match the scene");
  }
  DensifyReport report;
  std::vector<Gaussian3d> kept, clones, children;
  std::vector<int> kept_origin, clone_origin;
  for (std::size_t i = 0; i < n; ++i) {
    const Gaussian3d& g = scene.gaussians[i];
    const double max_scale = g.scale().maxCoeff();
    if (g.opacity() < config.prune_opacity || max_scale > config.prune_scale * scene_extent) {
      ++report.pruned;
      continue;
    }
    const double mean = stats.count[i] > 0 ? stats.grad_sum[i] / stats.count[i] : 0.0;
    if (!(mean > config.grad_threshold)) {
      kept.push_back(g);
      kept_origin.push_back(static_cast<int>(i));
      continue;
    }
    if (max_scale <= config.split_scale * scene_extent) {
      kept.push_back(g);
      kept_origin.push_back(static_cast<int>(i));
      clones.push_back(g);
      clone_origin.push_back(-1);
      ++report.cloned;
      continue;
    }
    int axis = 0;
    g.log_scale.maxCoeff(&axis);
    const Vec3 offset = quaternion_to_matrix(g.rotation).col(axis) * g.scale()[axis];
    Gaussian3d child = g;
    child.log_scale.array() -= std::log(config.split_shrink);
    child.position = g.position + offset;
    children.push_back(child);
    child.position = g.position - offset;
    children.push_back(child);
    ++report.split;
  }
  if (kept.empty() && children.empty()) {
    throw_error(ErrorCode::kEmptyScene, "densify_and_prune removed every Gaussian");
  }
  scene.gaussians = std::move(kept);
  report.origin = std::move(kept_origin);
  scene.gaussians.insert(scene.gaussians.end(), clones.begin(), clones.end());
  report.origin.insert(report.origin.end(), clone_origin.begin(), clone_origin.end());
  scene.gaussians.insert(scene.gaussians.end(), children.begin(), children.end());
  report.origin.insert(report.origin.end(), children.size(), -1);
  stats.reset(scene.gaussians.size());
  return report;
}

}  // namespace photosplat::splat
