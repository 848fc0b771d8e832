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

#include "photosplat/odometry/tracker.hpp"

#include <Eigen/Cholesky>

#include "photosplat/core/error.hpp"
#include "photosplat/core/parallel.hpp"
#include "photosplat/odometry/photometric.hpp"

namespace photosplat::odometry {
namespace {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

// Fixed chunking keeps the reduction order independent of the worker count.
constexpr std::size_t kChunk = 128;

struct LevelPoint {
  HostSample host;
  double inverse_depth;
};

struct Normal {
  Mat8 h = Mat8::Zero();
  Vec8 g = Vec8::Zero();
  double energy = 0.0;  // includes the penalty for points that left the image
  double visible_energy = 0.0;
  int visible = 0;

  void add(const Normal& o) {
    h += o.h;
    g += o.g;
    energy += o.energy;
    visible_energy += o.visible_energy;
    visible += o.visible;
  }
};

class LevelProblem {
 public:
  LevelProblem(const PhotometricFrame& target, const PhotometricFrame& reference,
               const PinholeCamera& camera, int level, std::vector<LevelPoint> points,
               const TrackerConfig& config)
      : target_(target),
        reference_(reference),
        camera_(camera),
        level_(level),
        points_(std::move(points)),
        config_(config) {}

  std::size_t size() const { return points_.size(); }

  Normal evaluate(const TargetState& state, double log_a0, bool with_jacobians) const {
    const double k = config_.huber_threshold;
    // A point that leaves the image costs as much as a residual of 2k.
    const double penalty = huber_cost(2.0 * k, k);
    const std::size_t chunks = (points_.size() + kChunk - 1) / kChunk;
    std::vector<Normal> partial(chunks);
    parallel_for(chunks, config_.workers, [&](std::size_t c) {
      Normal& n = partial[c];
      const std::size_t end = std::min(points_.size(), (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) {
        const auto lin = linearize_residual(points_[i].host, points_[i].inverse_depth, reference_,
                                            target_, state, camera_, level_);
        if (!lin) {
          n.energy += penalty;
          continue;
        }
        const double cost = huber_cost(lin->residual, k);
        n.energy += cost;
        n.visible_energy += cost;
        ++n.visible;
        if (!with_jacobians) continue;
        Vec8 j;
        j.head<6>() = lin->d_twist;
        j[6] = lin->d_log_a;
        j[7] = lin->d_b;
        const double w = huber_weight(lin->residual, k);
        n.h.selfadjointView<Eigen::Upper>().rankUpdate(j, w);
        n.g += w * lin->residual * j;
      }
    });
    Normal total;
    for (const auto& p : partial) total.add(p);
    total.h = total.h.selfadjointView<Eigen::Upper>();
    const double w = config_.log_a_prior * static_cast<double>(points_.size());
    const double d = state.log_a - log_a0;
    total.energy += w * d * d;
    total.h(6, 6) += w;
    total.g[6] += w * d;
    return total;
  }

 private:
  const PhotometricFrame& target_;
  const PhotometricFrame& reference_;
  const PinholeCamera& camera_;
  int level_;
  std::vector<LevelPoint> points_;
  const TrackerConfig& config_;
};

TargetState apply_step(const TargetState& s, const Vec8& step) {
  TargetState out;
  out.target_from_host = se3_exp(step.head<6>()) * s.target_from_host;
  out.log_a = s.log_a + step[6];
  out.b = s.b + step[7];
  return out;
}

}  // namespace

TrackResult track_frame(const PhotometricFrame& target, const PhotometricFrame& reference,
                        std::span<const TrackedPoint> points, const PinholeCamera& camera,
                        const Se3Pose& initial_guess, const TrackerConfig& config) {
  const int levels = std::min(target.pyramid.num_levels(), reference.pyramid.num_levels());
  if (levels < 1) throw_error(ErrorCode::kInvalidArgument, "frames have no pyramid");

  TargetState state;
  state.target_from_host = initial_guess.inverse() * reference.pose;
  state.log_a = target.log_a;
  state.b = target.affine_b;

  TrackResult result;
  for (int level = levels - 1; level >= 0; --level) {
    std::vector<LevelPoint> level_points;
    level_points.reserve(points.size());
    for (const auto& p : points) {
      if (p.status != PointStatus::kPoseTracking || !(p.inverse_depth > 0.0)) continue;
      if (auto hs = sample_host(p, reference, camera, level)) {
        level_points.push_back({*hs, p.inverse_depth});
      }
    }
    // Fix the active set for this level: points that land inside the image
    // with a margin at the current estimate. Points outside cannot pull the
    // pose toward views that keep more of them visible.
    {
      const IntensityImage& img = target.pyramid.level(level);
      const double margin = config.active_margin;
      std::vector<LevelPoint> active;
      active.reserve(level_points.size());
      for (const auto& lp : level_points) {
        const auto lin = linearize_residual(lp.host, lp.inverse_depth, reference, target, state,
                                            camera, level);
        if (lin && lin->target_u >= margin && lin->target_v >= margin &&
            lin->target_u <= img.width() - 1 - margin && lin->target_v <= img.height() - 1 - margin) {
          active.push_back(lp);
        }
      }
      level_points = std::move(active);
    }
    LevelProblem problem(target, reference, camera, level, std::move(level_points), config);
    Normal current = problem.evaluate(state, target.log_a, true);

    if (level == levels - 1 && current.visible < config.min_points) {
      throw TrackingLostError(target.id, std::to_string(current.visible) +
                                             " visible tracking points at the coarsest level, need " +
                                             std::to_string(config.min_points));
    }
    if (current.visible == 0) {
      throw TrackingLostError(target.id, "no visible tracking points at level " +
                                             std::to_string(level));
    }

    LevelTrace trace;
    trace.level = level;
    trace.accepted_energies.push_back(current.energy);
    const double initial_energy = current.energy;
    double lambda = config.initial_damping;
    int rejections = 0;
    bool accepted_any = false;
    for (int it = 0; it < config.max_iterations; ++it) {
      ++trace.iterations;
      Mat8 damped = current.h;
      for (int d = 0; d < 8; ++d) damped(d, d) *= (1.0 + lambda);
      // Tiny ridge so unobservable directions (e.g. zero texture) stay solvable.
      damped.diagonal().array() += 1e-12;
      const Vec8 step = -damped.ldlt().solve(current.g);
      if (!step.allFinite()) break;

      const TargetState candidate = apply_step(state, step);
      const Normal next = problem.evaluate(candidate, target.log_a, false);
      if (next.energy < current.energy) {
        state = candidate;
        current = problem.evaluate(state, target.log_a, true);
        trace.accepted_energies.push_back(current.energy);
        lambda = std::max(lambda * config.damping_decrease, config.min_damping);
        rejections = 0;
        accepted_any = true;
      } else {
        lambda *= config.damping_increase;
        ++rejections;
      }
      if (step.head<6>().norm() < config.min_update_norm) break;
      if (rejections >= config.max_rejections) {
        const double k = config.huber_threshold;
        const double mean = current.energy / static_cast<double>(problem.size());
        if (!accepted_any && current.energy >= initial_energy && mean > k * k) {
          throw TrackingLostError(target.id, "photometric solver diverged at level " +
                                                 std::to_string(level));
        }
        break;
      }
    }
    result.trace.push_back(std::move(trace));

    if (level == 0) {
      result.energy.total = current.visible_energy;
      result.energy.residual_count = current.visible;
      result.energy.huber_threshold = config.huber_threshold;
    }
  }

  result.pose = reference.pose * state.target_from_host.inverse();
  result.log_a = state.log_a;
  result.affine_b = state.b;
  return result;
}

}  // namespace photosplat::odometry
