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

#include "photosplat/odometry/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "photosplat/core/error.hpp"
#include "photosplat/core/kdtree.hpp"
#include "photosplat/core/parallel.hpp"

namespace photosplat::odometry {
namespace {

// Inverse depth of each new pixel from the k nearest cloud points projected
// into the new keyframe. Returns false when no cloud point is visible.
bool seed_from_cloud(std::vector<TrackedPoint>& fresh, std::span<const TrackedPoint> cloud,
                     const std::map<int, Se3Pose>& host_poses, const PhotometricFrame& host,
                     const PinholeCamera& camera, int k) {
  std::vector<Vec2> pixels;
  std::vector<double> rhos;
  const Se3Pose host_from_world = host.pose.inverse();
  for (const auto& p : cloud) {
    if (!p.depth_valid || p.status == PointStatus::kGradientFill) continue;
    const Vec3 x = host_from_world *
                   backproject(p.u, p.v, p.inverse_depth, camera, host_poses.at(p.host_frame));
    const auto proj = camera.try_project(x);
    if (!proj || !camera.contains(proj->u, proj->v)) continue;
    pixels.emplace_back(proj->u, proj->v);
    rhos.push_back(1.0 / proj->depth);
  }
  if (pixels.empty()) return false;
  const KdTree<2> tree(std::move(pixels));
  for (auto& p : fresh) {
    const auto near = tree.nearest(Vec2(p.u, p.v), static_cast<std::size_t>(k));
    double sum = 0.0;
    for (const auto& n : near) sum += rhos[n.index];
    p.inverse_depth = sum / static_cast<double>(near.size());
  }
  return true;
}

// Refines every valid, non-fill point hosted in one of `hosts` against every
// frame of `frames` other than its host. `observed` marks points that were
// visible in at least one target; only those constrain poses.
void refine_points(std::vector<TrackedPoint>& cloud, std::vector<char>& observed,
                   std::span<const PhotometricFrame* const> hosts,
                   std::span<const PhotometricFrame* const> frames, const PinholeCamera& camera,
                   const OdometryConfig& config, bool unobserved_only = false) {
  auto host_of = [&](int id) -> const PhotometricFrame* {
    for (const PhotometricFrame* f : hosts) {
      if (f->id == id) return f;
    }
    return nullptr;
  };
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud[i];
    if (p.depth_valid && p.status != PointStatus::kGradientFill && host_of(p.host_frame) &&
        !(unobserved_only && observed[i])) {
      active.push_back(i);
    }
  }
  std::vector<DepthRefinement> out(active.size());
  parallel_for(active.size(), config.workers, [&](std::size_t n) {
    const TrackedPoint& p = cloud[active[n]];
    const PhotometricFrame* host = host_of(p.host_frame);
    std::vector<const PhotometricFrame*> targets;
    for (const PhotometricFrame* f : frames) {
      if (f->id != host->id) targets.push_back(f);
    }
    DepthConfig depth = config.depth;
    if (observed[active[n]]) depth.max_level = 0;
    out[n] = refine_inverse_depth(p, *host, targets, camera, depth);
  });
  for (std::size_t n = 0; n < active.size(); ++n) {
    TrackedPoint& p = cloud[active[n]];
    p.inverse_depth = out[n].inverse_depth;
    if (out[n].observations > 0) observed[active[n]] = 1;
    if (out[n].status == DepthStatus::kDegenerate) p.depth_valid = false;
    if (out[n].status == DepthStatus::kConverged && out[n].mean_energy > config.outlier_energy) {
      p.depth_valid = false;
    }
  }
}

// Selects pixels in `host` and gives them starting depths.
std::vector<TrackedPoint> new_points(const PhotometricFrame& host,
                                     std::span<const TrackedPoint> cloud,
                                     const std::map<int, Se3Pose>& host_poses,
                                     const PinholeCamera& camera, const OdometryConfig& config,
                                     const std::vector<float>* depth_map) {
  const auto sel = selection::select_pixels(host.image(), config.selection, config.dense);
  std::vector<TrackedPoint> fresh;
  fresh.reserve(sel.tracking.size() + sel.extra.size());
  auto add = [&](const selection::Pixel& px, PointStatus status) {
    TrackedPoint p;
    p.host_frame = host.id;
    p.u = px.x;
    p.v = px.y;
    p.status = status;
    p.color = host.color->at(px.x, px.y);
    p.inverse_depth = config.initial_inverse_depth;
    if (depth_map != nullptr) {
      const double z = (*depth_map)[static_cast<std::size_t>(px.y) * host.width() + px.x];
      if (!(z > 0.0) || !std::isfinite(z)) return;
      p.inverse_depth = std::clamp(1.0 / z, TrackedPoint::kMinInverseDepth,
                                   TrackedPoint::kMaxInverseDepth);
    }
    fresh.push_back(p);
  };
  for (const auto& px : sel.tracking) add(px, PointStatus::kPoseTracking);
  for (const auto& px : sel.extra) add(px, PointStatus::kPositionOnly);
  if (depth_map == nullptr && !cloud.empty()) {
    seed_from_cloud(fresh, cloud, host_poses, host, camera, config.seed_neighbor_count);
  }
  return fresh;
}

void add_fill(std::vector<TrackedPoint>& cloud, const PhotometricFrame& host,
              const OdometryConfig& config) {
  std::vector<TrackedPoint> sources;
  for (const auto& p : cloud) {
    if (p.host_frame == host.id && p.depth_valid && p.status != PointStatus::kGradientFill) {
      sources.push_back(p);
    }
  }
  if (sources.empty()) return;
  auto fill = selection::fill_gradientless_regions(sources, host.image(), *host.color, host.id,
                                                   config.selection);
  cloud.insert(cloud.end(), fill.begin(), fill.end());
}

double median_of(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

Se3Pose scale_translation(const Se3Pose& pose, double s) {
  return Se3Pose(pose.rotation(), pose.translation() * s);
}

}  // namespace

void OdometryConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw_error(ErrorCode::kInvalidArgument, "odometry config: " + what);
  };
  if (keyframe_interval < 1) fail("keyframe_interval must be >= 1");
  if (window_keyframes < 2) fail("window_keyframes must be >= 2");
  if (pyramid_levels < 1 || pyramid_levels > ImagePyramid::kMaxLevels) {
    fail("pyramid_levels must be in [1, " + std::to_string(ImagePyramid::kMaxLevels) + "]");
  }
  if (!(initial_inverse_depth > TrackedPoint::kMinInverseDepth &&
        initial_inverse_depth < TrackedPoint::kMaxInverseDepth)) {
    fail("initial_inverse_depth must be in (1e-4, 1e4)");
  }
  if (seed_neighbor_count < 1) fail("seed_neighbor_count must be >= 1");
  if (!(outlier_energy > 0.0)) fail("outlier_energy must be positive");
  if (!(tracker.huber_threshold > 0.0) || !(depth.huber_threshold > 0.0)) {
    fail("huber_threshold must be positive");
  }
  selection.validate();
}

std::map<int, Se3Pose> OdometryResult::host_poses() const {
  std::map<int, Se3Pose> out;
  for (std::size_t i = 0; i < keyframe_ids.size(); ++i) out[keyframe_ids[i]] = trajectory[i];
  return out;
}

OdometryResult run_odometry(std::span<const InputFrame> frames, const PinholeCamera& camera,
                            const OdometryConfig& config, const std::vector<float>* first_depth) {
  config.validate();
  const int n = static_cast<int>(frames.size());
  if (n < 2) throw_error(ErrorCode::kInvalidArgument, "odometry needs at least 2 frames");
  for (int i = 0; i < n; ++i) {
    if (frames[i].gray.width() != camera.width() || frames[i].gray.height() != camera.height()) {
      throw_error(ErrorCode::kInvalidArgument,
                  "frame " + std::to_string(i) + " does not match the camera size");
    }
  }
  if (first_depth != nullptr &&
      first_depth->size() != static_cast<std::size_t>(camera.width()) * camera.height()) {
    throw_error(ErrorCode::kInvalidArgument, "first-frame depth map does not match the camera size");
  }

  TrackerConfig tracker = config.tracker;
  tracker.workers = config.workers;
  auto build = [&](int i) {
    return make_frame(i, frames[i].gray, frames[i].color, config.pyramid_levels,
                      frames[i].exposure);
  };

  OdometryResult result;
  result.frame_poses.resize(n);
  result.frame_log_a.assign(n, 0.0);
  result.frame_b.assign(n, 0.0);

  // Keyframes live in a deque so pointers stay valid as it grows.
  std::deque<PhotometricFrame> keyframes;
  std::vector<TrackedPoint> cloud;
  std::vector<char> observed;
  // Frames tracked since the latest keyframe; they refine its points.
  std::vector<PhotometricFrame> recent;
  const bool monocular = first_depth == nullptr;

  auto window = [&] {
    std::vector<const PhotometricFrame*> out;
    const std::size_t m = static_cast<std::size_t>(config.window_keyframes);
    const std::size_t first = keyframes.size() > m ? keyframes.size() - m : 0;
    for (std::size_t k = first; k < keyframes.size(); ++k) out.push_back(&keyframes[k]);
    return out;
  };
  auto add_points = [&](std::vector<TrackedPoint> fresh, bool known_depth) {
    cloud.insert(cloud.end(), fresh.begin(), fresh.end());
    observed.resize(cloud.size(), known_depth ? 1 : 0);
  };
  auto fill = [&](const PhotometricFrame& host) {
    if (!config.dense) return;
    add_fill(cloud, host, config);
    observed.resize(cloud.size(), 0);
  };

  keyframes.push_back(build(0));
  add_points(new_points(keyframes[0], cloud, {}, camera, config, first_depth), !monocular);
  if (!monocular) fill(keyframes[0]);

  for (int i = 1; i < n; ++i) {
    const PhotometricFrame& ref = keyframes.back();
    std::vector<TrackedPoint> points;
    std::vector<TrackedPoint> unobserved;
    for (std::size_t k = 0; k < cloud.size(); ++k) {
      const auto& p = cloud[k];
      if (p.host_frame == ref.id && p.depth_valid && p.status == PointStatus::kPoseTracking) {
        (observed[k] ? points : unobserved).push_back(p);
      }
    }
    // Until enough depths are confirmed (monocular start), use all of them.
    if (static_cast<int>(points.size()) < config.tracker.min_points) {
      points.insert(points.end(), unobserved.begin(), unobserved.end());
    }
    Se3Pose guess = result.frame_poses[i - 1];
    if (i >= 2) {
      guess = result.frame_poses[i - 1] *
              (result.frame_poses[i - 2].inverse() * result.frame_poses[i - 1]);
    }
    PhotometricFrame target = build(i);
    target.log_a = result.frame_log_a[i - 1];
    target.affine_b = result.frame_b[i - 1];
    const TrackResult tr = track_frame(target, ref, points, camera, guess, tracker);
    target.pose = tr.pose;
    target.log_a = tr.log_a;
    target.affine_b = tr.affine_b;
    result.frame_poses[i] = tr.pose;
    result.frame_log_a[i] = tr.log_a;
    result.frame_b[i] = tr.affine_b;

    const bool is_keyframe = i % config.keyframe_interval == 0 || i == n - 1;
    if (!is_keyframe) {
      // Trace the latest keyframe's unconfirmed points through the new frame.
      // Confirmed depths wait for the next keyframe's wider baseline.
      recent.push_back(std::move(target));
      std::vector<const PhotometricFrame*> frames_for = window();
      for (const auto& f : recent) frames_for.push_back(&f);
      const PhotometricFrame* host = &keyframes.back();
      refine_points(cloud, observed, std::span(&host, 1), frames_for, camera, config, true);
      continue;
    }

    if (monocular && keyframes.size() == 1) {
      // Fix the gauge: the median first-keyframe depth becomes 1.
      std::vector<const PhotometricFrame*> frames_for{&keyframes[0], &target};
      for (const auto& f : recent) frames_for.push_back(&f);
      const PhotometricFrame* host = &keyframes[0];
      refine_points(cloud, observed, std::span(&host, 1), frames_for, camera, config);
      std::vector<double> rhos;
      for (const auto& p : cloud) {
        if (p.depth_valid) rhos.push_back(p.inverse_depth);
      }
      if (!rhos.empty()) {
        const double s = median_of(rhos);
        for (auto& p : cloud) p.inverse_depth /= s;
        for (int j = 1; j <= i; ++j) {
          result.frame_poses[j] = scale_translation(result.frame_poses[j], s);
        }
        for (auto& f : recent) f.pose = result.frame_poses[f.id];
        target.pose = result.frame_poses[i];
      }
      fill(keyframes[0]);
    }

    keyframes.push_back(std::move(target));
    const PhotometricFrame& host = keyframes.back();
    std::map<int, Se3Pose> host_poses;
    for (const auto& kf : keyframes) host_poses[kf.id] = kf.pose;
    add_points(new_points(host, cloud, host_poses, camera, config, nullptr), false);
    std::vector<const PhotometricFrame*> hosts = window();
    std::vector<const PhotometricFrame*> frames_for = hosts;
    for (const auto& f : recent) frames_for.push_back(&f);
    refine_points(cloud, observed, hosts, frames_for, camera, config);
    fill(host);
    recent.clear();
  }

  for (const auto& kf : keyframes) {
    result.keyframe_ids.push_back(kf.id);
    result.trajectory.push_back(kf.pose);
  }
  result.cloud = std::move(cloud);
  return result;
}

}  // namespace photosplat::odometry
