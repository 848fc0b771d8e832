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

#include "photosplat/splat/trainer.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "photosplat/core/error.hpp"
#include "photosplat/splat/rasterizer.hpp"

namespace photosplat::splat {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// First Gaussian whose parameters or projection are non-finite, or -1.
int find_non_finite(const SplatScene& scene, const PinholeCamera& camera, const Se3Pose& pose) {
  for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
    const auto& g = scene.gaussians[i];
    if (!g.position.allFinite() || !g.log_scale.allFinite() || !g.rotation.allFinite() ||
        !std::isfinite(g.opacity_logit) || !g.color.allFinite()) {
      return static_cast<int>(i);
    }
    const auto p = project_gaussian<double>(g, camera, pose);
    if (p && (!p->mean2d.allFinite() || !p->conic.allFinite())) return static_cast<int>(i);
  }
  return -1;
}

[[noreturn]] void non_finite(const SplatScene& scene, const PinholeCamera& camera,
                             const Se3Pose& pose, const std::string& what) {
  const int bad = find_non_finite(scene, camera, pose);
  throw_error(ErrorCode::kNonFinite,
              what + (bad >= 0 ? " (gaussian " + std::to_string(bad) + ")" : " (no single gaussian)"));
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw_error(ErrorCode::kInvalidArgument, "train config: " + what);
  };
  if (iterations < 0) fail("iterations must be >= 0");
  const auto& lr = learning_rates;
  if (!(lr.position > 0 && lr.log_scale > 0 && lr.rotation > 0 && lr.opacity > 0 && lr.color > 0)) {
    fail("learning rates must be positive");
  }
  if (densify_interval < 1) fail("densify_interval must be >= 1");
  if (!(densify.grad_threshold > 0) || !(densify.prune_opacity >= 0 && densify.prune_opacity < 1) ||
      !(densify.prune_scale > 0) || !(densify.split_scale > 0) || !(densify.split_shrink > 1)) {
    fail("densify thresholds out of range");
  }
  if (!(loss.l1 >= 0 && loss.ssim >= 0)) fail("loss weights must be non-negative");
  if (!(adam.beta1 >= 0 && adam.beta1 < 1 && adam.beta2 >= 0 && adam.beta2 < 1 && adam.epsilon > 0)) {
    fail("adam parameters out of range");
  }
  if (workers < 1) fail("workers must be >= 1");
}

double train_step(SplatScene& scene, const ColorImage& target, const PinholeCamera& camera,
                  const Se3Pose& view_pose, AdamOptimizer& optimizer, const TrainConfig& config,
                  double scene_extent, DensifyStats* stats) {
  if (target.width() != camera.width() || target.height() != camera.height()) {
    throw_error(ErrorCode::kInvalidArgument, "training image does not match the camera size");
  }
  const auto fwd = render<float>(scene, camera, view_pose, config.workers);
  const std::vector<double> rendered(fwd.color.begin(), fwd.color.end());
  std::vector<double> grad;
  const double loss = photometric_loss(rendered, target.data(), camera.width(), camera.height(),
                                       config.loss, &grad);
  if (!std::isfinite(loss)) non_finite(scene, camera, view_pose, "non-finite loss");
  const std::vector<float> upstream(grad.begin(), grad.end());
  const auto grads = render_backward<float>(scene, camera, view_pose, fwd, upstream, config.workers);
  for (std::size_t i = 0; i < grads.gaussians.size(); ++i) {
    if (!grads.gaussians[i].all_finite()) {
      throw_error(ErrorCode::kNonFinite, "non-finite gradient (gaussian " + std::to_string(i) + ")");
    }
  }
  if (stats != nullptr) stats->accumulate(grads);
  optimizer.step(scene, grads.gaussians, config.learning_rates, scene_extent);
  if (find_non_finite(scene, camera, view_pose) >= 0) {
    non_finite(scene, camera, view_pose, "non-finite parameter after the update");
  }
  return loss;
}

Trainer::Trainer(SplatScene scene, std::vector<TrainView> views, const PinholeCamera& camera,
                 const TrainConfig& config, double scene_extent)
    : scene_(std::move(scene)), views_(std::move(views)), camera_(camera), config_(config),
      extent_(scene_extent), optimizer_(scene_.gaussians.size(), config.adam),
      stats_(scene_.gaussians.size()), rng_state_(config.seed) {
  config_.validate();
  if (scene_.gaussians.empty()) throw_error(ErrorCode::kEmptyScene, "cannot train an empty scene");
  if (views_.empty()) throw_error(ErrorCode::kInvalidArgument, "no training views");
  if (!(extent_ > 0.0)) throw_error(ErrorCode::kInvalidArgument, "scene extent must be positive");
  for (const auto& v : views_) {
    if (v.image == nullptr) throw_error(ErrorCode::kInvalidArgument, "training view without an image");
  }
}

int Trainer::next_view() {
  if (cursor_ == order_.size()) {
    order_.resize(views_.size());
    std::iota(order_.begin(), order_.end(), 0);
    // Fisher-Yates with a fixed generator, identical on every platform.
    for (std::size_t i = order_.size(); i > 1; --i) {
      const std::size_t j = splitmix64(rng_state_) % i;
      std::swap(order_[i - 1], order_[j]);
    }
    cursor_ = 0;
  }
  return order_[cursor_++];
}

double Trainer::step() {
  const TrainView& view = views_[static_cast<std::size_t>(next_view())];
  view_log_.push_back(view.id);
  last_loss_ = train_step(scene_, *view.image, camera_, view.pose, optimizer_, config_, extent_, &stats_);
  ++iteration_;
  if (iteration_ % config_.densify_interval == 0 && iteration_ <= config_.densify_until) {
    auto report = densify_and_prune(scene_, stats_, config_.densify, extent_);
    optimizer_.remap(report.origin);
    densify_log_.push_back(std::move(report));
  }
  return last_loss_;
}

void Trainer::run_until(int target) {
  const int end = std::min(target, config_.iterations);
  while (iteration_ < end) step();
}

}  // namespace photosplat::splat
