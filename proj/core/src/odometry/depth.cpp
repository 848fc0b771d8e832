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

#include "photosplat/odometry/depth.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "photosplat/odometry/photometric.hpp"

namespace photosplat::odometry {
namespace {

// Offsets in pixels of the evaluated level; the center comes first.
constexpr std::array<std::array<int, 2>, 8> kPattern{
    {{0, 0}, {0, -2}, {-1, -1}, {1, -1}, {-2, 0}, {2, 0}, {-1, 1}, {0, 2}}};

struct Accum {
  double h = 0.0;
  double g = 0.0;
  double energy = 0.0;
  double visible_energy = 0.0;
  int visible = 0;      // residuals
  int visible_center = 0;  // targets where the center pixel lands
};

struct Observation {
  const PhotometricFrame* frame;
  TargetState state;
};

std::vector<HostSample> host_samples(const TrackedPoint& point, const PhotometricFrame& host,
                                     const PinholeCamera& camera, int level, bool pattern) {
  std::vector<HostSample> out;
  const int scale = 1 << level;
  const std::size_t count = pattern ? kPattern.size() : 1;
  for (std::size_t i = 0; i < count; ++i) {
    TrackedPoint shifted = point;
    shifted.u += kPattern[i][0] * scale;
    shifted.v += kPattern[i][1] * scale;
    if (!camera.contains(shifted.u, shifted.v)) {
      if (i == 0) return {};
      continue;
    }
    if (auto hs = sample_host(shifted, host, camera, level)) {
      out.push_back(*hs);
    } else if (i == 0) {
      return {};
    }
  }
  return out;
}

// `active` (row-major obs x samples), when given, restricts the sum to the
// residuals that were visible when the level started.
Accum evaluate(std::span<const HostSample> samples, double rho, const PhotometricFrame& host,
               std::span<const Observation> obs, const PinholeCamera& camera, int level,
               double k, const std::vector<char>* active = nullptr) {
  Accum a;
  const double penalty = huber_cost(2.0 * k, k);
  for (std::size_t t = 0; t < obs.size(); ++t) {
    const auto& o = obs[t];
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (active != nullptr && !(*active)[t * samples.size() + i]) continue;
      const auto lin = linearize_residual(samples[i], rho, host, *o.frame, o.state, camera, level);
      if (!lin) {
        a.energy += penalty;
        continue;
      }
      const double w = huber_weight(lin->residual, k);
      const double cost = huber_cost(lin->residual, k);
      a.energy += cost;
      a.visible_energy += cost;
      a.h += w * lin->d_inverse_depth * lin->d_inverse_depth;
      a.g += w * lin->d_inverse_depth * lin->residual;
      ++a.visible;
      if (i == 0) ++a.visible_center;
    }
  }
  return a;
}

}  // namespace

DepthRefinement refine_inverse_depth(const TrackedPoint& point, const PhotometricFrame& host,
                                     std::span<const PhotometricFrame* const> targets,
                                     const PinholeCamera& camera, const DepthConfig& config) {
  DepthRefinement out;
  out.inverse_depth = point.inverse_depth;
  if (!(point.inverse_depth > 0.0) || targets.empty()) return out;

  std::vector<Observation> obs;
  obs.reserve(targets.size());
  int levels = host.pyramid.num_levels();
  for (const PhotometricFrame* t : targets) {
    if (t == nullptr || t == &host) continue;
    obs.push_back({t, TargetState{relative_pose(host, *t), t->log_a, t->affine_b}});
    levels = std::min(levels, t->pyramid.num_levels());
  }
  if (obs.empty()) return out;

  const double k = config.huber_threshold;
  // Observability at the starting depth, full resolution.
  {
    const auto hs = host_samples(point, host, camera, 0, config.use_pattern);
    if (hs.empty()) return out;
    const Accum a0 = evaluate(hs, point.inverse_depth, host, obs, camera, 0, k);
    out.observations = a0.visible_center;
    if (a0.visible_center == 0 || a0.h < config.min_information) return out;
  }

  double rho = point.inverse_depth;
  bool clamped = false;
  const int top = config.max_level < 0 ? levels - 1 : std::min(levels - 1, config.max_level);
  for (int level = top; level >= 0 && !clamped; --level) {
    const auto hs = host_samples(point, host, camera, level, config.use_pattern);
    if (hs.empty()) continue;
    std::vector<char> active(obs.size() * hs.size(), 0);
    for (std::size_t t = 0; t < obs.size(); ++t) {
      for (std::size_t i = 0; i < hs.size(); ++i) {
        active[t * hs.size() + i] =
            linearize_residual(hs[i], rho, host, *obs[t].frame, obs[t].state, camera, level)
                .has_value();
      }
    }
    auto eval = [&](double r) { return evaluate(hs, r, host, obs, camera, level, k, &active); };
    Accum cur = eval(rho);
    if (cur.visible == 0 || cur.h < config.min_information) continue;
    double lambda = config.initial_damping;
    for (int it = 0; it < config.max_iterations; ++it) {
      double step = -cur.g / (cur.h * (1.0 + lambda));
      double next_rho = rho + step;
      if (!(next_rho > TrackedPoint::kMinInverseDepth && next_rho < TrackedPoint::kMaxInverseDepth)) {
        next_rho = std::clamp(next_rho, TrackedPoint::kMinInverseDepth,
                              TrackedPoint::kMaxInverseDepth);
        step = next_rho - rho;
        const Accum trial = eval(next_rho);
        if (trial.energy < cur.energy) {
          rho = next_rho;
          clamped = true;
          break;
        }
        lambda *= 4.0;
        continue;
      }
      const Accum trial = eval(next_rho);
      if (trial.energy < cur.energy && trial.visible > 0) {
        rho = next_rho;
        cur = trial;
        lambda = std::max(lambda * 0.5, 1e-7);
        if (cur.h < config.min_information) break;
      } else {
        lambda *= 4.0;
        if (lambda > 1e6) break;
      }
      if (std::abs(step) < config.min_relative_update * rho) break;
    }
  }

  out.inverse_depth = rho;
  out.status = clamped ? DepthStatus::kDegenerate : DepthStatus::kConverged;
  const auto hs = host_samples(point, host, camera, 0, config.use_pattern);
  const Accum final_state = evaluate(hs, rho, host, obs, camera, 0, k);
  out.mean_energy =
      final_state.visible > 0
          ? final_state.visible_energy / static_cast<double>(final_state.visible)
          : 0.0;
  return out;
}

}  // namespace photosplat::odometry
