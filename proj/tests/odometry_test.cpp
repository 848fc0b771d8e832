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

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "pair_fixture.hpp"
#include "photosplat/core/error.hpp"
#include "photosplat/odometry/depth.hpp"
#include "photosplat/odometry/photometric.hpp"
#include "photosplat/odometry/pipeline.hpp"
#include "photosplat/odometry/tracker.hpp"
#include "photosplat/odometry/trajectory_io.hpp"

using namespace photosplat;
using namespace photosplat::odometry;
namespace fs = std::filesystem;

namespace {

const PinholeCamera kCam(80, 80, 31.5, 31.5, 64, 64);

// Smooth procedural texture on the plane z = depth, seen from `pose`.
IntensityImage plane_image(const Se3Pose& pose, double depth, const PinholeCamera& cam) {
  IntensityImage img(cam.width(), cam.height());
  const Vec3 n(0, 0, 1);
  for (int y = 0; y < cam.height(); ++y) {
    for (int x = 0; x < cam.width(); ++x) {
      const Vec3 dir = pose.rotation() * cam.ray(x, y);
      const double s = (depth - pose.translation().z()) / dir.z();
      const Vec3 p = pose.translation() + s * dir;
      img.at(x, y) = 0.5 + 0.2 * std::sin(9 * p.x()) * std::cos(7 * p.y()) + 0.1 * std::sin(13 * p.x() + 5 * p.y());
    }
  }
  return img;
}

IntensityImage random_smooth_image(std::mt19937_64& rng, const PinholeCamera& cam) {
  std::uniform_real_distribution<double> u(0, 1);
  const double a = 0.3 + u(rng) * 0.3, b = 0.2 + u(rng) * 0.3, c = u(rng) * 6;
  IntensityImage img(cam.width(), cam.height());
  for (int y = 0; y < cam.height(); ++y) {
    for (int x = 0; x < cam.width(); ++x) {
      img.at(x, y) = 0.5 + 0.2 * std::sin(a * x + c) * std::cos(b * y) + 0.1 * std::sin(0.17 * (x + y));
    }
  }
  return img;
}

TrackedPoint point_at(double u, double v, double inverse_depth) {
  TrackedPoint p;
  p.u = u;
  p.v = v;
  p.inverse_depth = inverse_depth;
  return p;
}

}  // namespace

TEST(Warp, IdentityKeepsPixel) {
  const auto f = make_frame(0, IntensityImage(64, 64, 0.5), nullptr, 1);
  const auto w = warp_point(point_at(12.25, 40.5, 0.7), f, f, kCam);
  EXPECT_EQ(w.u, 12.25);
  EXPECT_EQ(w.v, 40.5);
  EXPECT_EQ(w.inverse_depth, 0.7);
}

TEST(Warp, ForwardMotionFixesPrincipalPoint) {
  auto host = make_frame(0, IntensityImage(64, 64, 0.5), nullptr, 1);
  auto target = host;
  target.pose = Se3Pose(Quat::Identity(), Vec3(0, 0, 0.4));
  const auto w = warp_point(point_at(kCam.cx(), kCam.cy(), 0.5), host, target, kCam);
  EXPECT_NEAR(w.u, kCam.cx(), 1e-12);
  EXPECT_NEAR(w.v, kCam.cy(), 1e-12);
  EXPECT_NEAR(w.inverse_depth, 1.0 / 1.6, 1e-12);
}

TEST(Warp, MatchesHandComposition) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> px(5, 58), rho(0.2, 1.0);
  std::normal_distribution<double> n(0, 0.05);
  auto host = make_frame(0, IntensityImage(64, 64, 0.5), nullptr, 1);
  auto target = host;
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Twist th, tt;
    for (int k = 0; k < 6; ++k) {
      th[k] = n(rng);
      tt[k] = n(rng);
    }
    host.pose = se3_exp(th);
    target.pose = se3_exp(tt);
    const auto p = point_at(px(rng), px(rng), rho(rng));
    // Oracle: world point from the host, then into the target camera.
    const Vec3 world = host.pose * (kCam.ray(p.u, p.v) / p.inverse_depth);
    const Vec3 pc = target.pose.inverse() * world;
    const double u = kCam.fx() * pc.x() / pc.z() + kCam.cx();
    const double v = kCam.fy() * pc.y() / pc.z() + kCam.cy();
    if (!kCam.contains(u, v)) {
      EXPECT_EQ(photometric_residual(p, host, target, kCam), std::nullopt);
      continue;
    }
    const auto w = warp_point(p, host, target, kCam);
    EXPECT_NEAR(w.u, u, 1e-9);
    EXPECT_NEAR(w.v, v, 1e-9);
    EXPECT_NEAR(w.inverse_depth, 1.0 / pc.z(), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Warp, NotVisibleAndBadDepth) {
  auto host = make_frame(0, IntensityImage(64, 64, 0.5), nullptr, 1);
  auto target = host;
  target.pose = Se3Pose(Quat::Identity(), Vec3(0, 0, 5));
  try {
    warp_point(point_at(32, 32, 1.0), host, target, kCam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotVisible);
  }
  EXPECT_THROW(warp_point(point_at(32, 32, 0.0), host, host, kCam), Error);
}

TEST(Residual, HandComputedCases) {
  std::mt19937_64 rng(12);
  const auto img = random_smooth_image(rng, kCam);
  auto host = make_frame(0, img, nullptr, 1);
  auto target = host;
  const auto p = point_at(20.3, 30.6, 0.8);
  EXPECT_EQ(*photometric_residual(p, host, target, kCam), 0.0);

  target.affine_b = 0.03;
  EXPECT_NEAR(*photometric_residual(p, host, target, kCam), -0.03, 1e-15);

  // I_j = 2 I_i with a gain ratio of 2 cancels.
  IntensityImage half(64, 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) half.at(x, y) = img.at(x, y) / 2;
  }
  host = make_frame(0, half, nullptr, 1);
  target = make_frame(1, img, nullptr, 1);
  target.exposure = 2.0;
  EXPECT_NEAR(*photometric_residual(p, host, target, kCam), 0.0, 1e-15);
  target.exposure = 1.0;
  target.log_a = std::log(2.0);
  EXPECT_NEAR(*photometric_residual(p, host, target, kCam), 0.0, 1e-15);
}

TEST(Residual, OnlyTheGainRatioMatters) {
  std::mt19937_64 rng(13);
  auto host = make_frame(0, random_smooth_image(rng, kCam), nullptr, 1);
  auto target = make_frame(1, random_smooth_image(rng, kCam), nullptr, 1);
  host.affine_b = 0.02;
  target.affine_b = -0.01;
  target.log_a = 0.1;
  host.exposure = 1.5;
  const auto p = point_at(33.3, 17.9, 0.5);
  const double r0 = *photometric_residual(p, host, target, kCam);
  for (double c : {0.25, 3.0, 10.0}) {
    host.exposure *= c;
    target.exposure *= c;
    EXPECT_NEAR(*photometric_residual(p, host, target, kCam), r0, 1e-14);
  }
}

TEST(Residual, JacobiansMatchCentralDifferences) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> px(12, 52), rho(0.3, 1.0), unit(-1, 1);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 100; ++i) {
    auto host = make_frame(0, random_smooth_image(rng, kCam), nullptr, 2);
    auto target = make_frame(1, random_smooth_image(rng, kCam), nullptr, 2);
    host.log_a = 0.1 * unit(rng);
    host.affine_b = 0.05 * unit(rng);
    Twist tw;
    for (int k = 0; k < 6; ++k) tw[k] = 0.03 * unit(rng);
    TargetState st{se3_exp(tw), 0.1 * unit(rng), 0.05 * unit(rng)};
    const int level = i % 2;
    const auto p = point_at(px(rng), px(rng), rho(rng));
    const auto hs = sample_host(p, host, kCam, level);
    ASSERT_TRUE(hs);
    const auto lin = linearize_residual(*hs, p.inverse_depth, host, target, st, kCam, level);
    if (!lin) continue;
    // Bilinear interpolation has kinks on the lattice; stay clear of them.
    auto off_lattice = [](double c) { return std::abs(c - std::round(c)) > 1e-3; };
    if (!off_lattice(lin->target_u) || !off_lattice(lin->target_v)) continue;
    auto eval = [&](const TargetState& s, double r) {
      const auto l = linearize_residual(*hs, r, host, target, s, kCam, level);
      return l ? l->residual : std::nan("");
    };
    auto check = [&](double analytic, double numeric) {
      EXPECT_LE(std::abs(analytic - numeric), 1e-4 * std::max(std::abs(numeric), 1e-3))
          << analytic << " vs " << numeric;
    };
    const double h = 1e-6;
    for (int k = 0; k < 6; ++k) {
      Twist d = Twist::Zero();
      d[k] = h;
      TargetState a = st, b = st;
      a.target_from_host = se3_exp(d) * st.target_from_host;
      b.target_from_host = se3_exp(-d) * st.target_from_host;
      check(lin->d_twist[k], (eval(a, p.inverse_depth) - eval(b, p.inverse_depth)) / (2 * h));
    }
    TargetState a = st, b = st;
    a.log_a += h;
    b.log_a -= h;
    check(lin->d_log_a, (eval(a, p.inverse_depth) - eval(b, p.inverse_depth)) / (2 * h));
    a = st;
    b = st;
    a.b += h;
    b.b -= h;
    check(lin->d_b, (eval(a, p.inverse_depth) - eval(b, p.inverse_depth)) / (2 * h));
    check(lin->d_inverse_depth, (eval(st, p.inverse_depth + h) - eval(st, p.inverse_depth - h)) / (2 * h));
    ++checked;
  }
  EXPECT_EQ(checked, 100);
}

TEST(Tracker, AlreadyAtOptimum) {
  const auto pair = fixture::make_pair(3, 0.0, 0.0, 0.0);
  const auto r = track_frame(pair.reference, pair.reference, pair.points, pair.camera, Se3Pose());
  EXPECT_LT(rotation_angle(r.pose), 1e-12);
  EXPECT_LT(r.pose.translation().norm(), 1e-12);
  EXPECT_EQ(r.energy.total, 0.0);
  EXPECT_EQ(r.log_a, 0.0);
  EXPECT_EQ(r.affine_b, 0.0);
}

TEST(Tracker, RecoversPerturbation) {
  const auto pair = fixture::make_pair(4, 1.0, 0.01, 0.0);
  const auto r = track_frame(pair.target, pair.reference, pair.points, pair.camera, Se3Pose());
  EXPECT_LT(rotation_distance(r.pose, pair.truth) * 180 / std::numbers::pi, 0.1);
  EXPECT_LT(translation_distance(r.pose, pair.truth), 0.002 * pair.mean_depth);
}

TEST(Tracker, RecoversBrightnessOffset) {
  const auto pair = fixture::make_pair(4, 1.0, 0.01, 0.05);
  const auto r = track_frame(pair.target, pair.reference, pair.points, pair.camera, Se3Pose());
  EXPECT_NEAR(r.affine_b, 0.05, 0.005);
  EXPECT_LT(rotation_distance(r.pose, pair.truth) * 180 / std::numbers::pi, 0.1);
  EXPECT_LT(translation_distance(r.pose, pair.truth), 0.002 * pair.mean_depth);
}

TEST(Tracker, AcceptedStepsNeverIncreaseEnergy) {
  const auto pair = fixture::make_pair(5, 1.5, 0.015, 0.02);
  const auto r = track_frame(pair.target, pair.reference, pair.points, pair.camera, Se3Pose());
  for (const auto& level : r.trace) {
    for (std::size_t i = 1; i < level.accepted_energies.size(); ++i) {
      EXPECT_LE(level.accepted_energies[i], level.accepted_energies[i - 1]);
    }
  }
}

TEST(Tracker, InvariantToReanchoringTheWorld) {
  auto pair = fixture::make_pair(6, 1.0, 0.01, 0.01);
  const auto base = track_frame(pair.target, pair.reference, pair.points, pair.camera, Se3Pose());
  Twist g;
  g << 0.4, -1.2, 2.0, 0.3, -0.5, 0.8;
  const auto anchor = se3_exp(g);
  pair.reference.pose = anchor * pair.reference.pose;
  const auto moved = track_frame(pair.target, pair.reference, pair.points, pair.camera, anchor);
  EXPECT_LT(rotation_distance(moved.pose, anchor * base.pose), 1e-6);
  EXPECT_LT(translation_distance(moved.pose, anchor * base.pose), 1e-6);
  EXPECT_NEAR(moved.affine_b, base.affine_b, 1e-6);
}

TEST(Tracker, OnlyTrackingPointsContribute) {
  auto pair = fixture::make_pair(7, 0.5, 0.005, 0.0);
  const auto clean = track_frame(pair.target, pair.reference, pair.points, pair.camera, Se3Pose());
  auto mixed = pair.points;
  for (std::size_t i = 0; i < pair.points.size(); i += 2) {
    auto p = pair.points[i];
    p.status = i % 4 == 0 ? PointStatus::kPositionOnly : PointStatus::kGradientFill;
    p.inverse_depth *= 3.0;  // wrong on purpose; must not matter
    mixed.push_back(p);
  }
  const auto r = track_frame(pair.target, pair.reference, mixed, pair.camera, Se3Pose());
  EXPECT_EQ(r.energy.residual_count, clean.energy.residual_count);
  EXPECT_EQ(r.energy.total, clean.energy.total);
  EXPECT_EQ(r.pose.translation(), clean.pose.translation());
}

TEST(Tracker, TooFewPointsIsTrackingLost) {
  const auto pair = fixture::make_pair(8, 0.5, 0.005, 0.0);
  const std::vector<TrackedPoint> few(pair.points.begin(), pair.points.begin() + 20);
  try {
    track_frame(pair.target, pair.reference, few, pair.camera, Se3Pose());
    FAIL();
  } catch (const TrackingLostError& e) {
    EXPECT_EQ(e.frame_index(), 1);
  }
}

TEST(Depth, ZeroBaselineLeavesDepthUnchanged) {
  const auto img = plane_image(Se3Pose(), 2.0, kCam);
  const auto host = make_frame(0, img, nullptr, 3);
  const auto target = make_frame(1, img, nullptr, 3);
  const PhotometricFrame* targets[] = {&target};
  const auto r = refine_inverse_depth(point_at(30, 30, 1.0), host, targets, kCam);
  EXPECT_EQ(r.inverse_depth, 1.0);
  EXPECT_EQ(r.status, DepthStatus::kUnchanged);
}

TEST(Depth, LateralBaselineConverges) {
  const Se3Pose moved(Quat::Identity(), Vec3(0.1, 0, 0));
  const auto host = make_frame(0, plane_image(Se3Pose(), 2.0, kCam), nullptr, 3);
  auto target = make_frame(1, plane_image(moved, 2.0, kCam), nullptr, 3);
  target.pose = moved;
  const PhotometricFrame* targets[] = {&target};
  int converged = 0;
  for (int y = 20; y <= 44; y += 8) {
    for (int x = 20; x <= 44; x += 8) {
      const auto r = refine_inverse_depth(point_at(x, y, 1.0), host, targets, kCam);
      if (std::abs(r.inverse_depth - 0.5) < 0.01) ++converged;
    }
  }
  EXPECT_GE(converged, 14);  // of 16
}

TEST(Depth, TexturelessIsUnobservable) {
  const auto host = make_frame(0, IntensityImage(64, 64, 0.4), nullptr, 3);
  auto target = host;
  target.id = 1;
  target.pose = Se3Pose(Quat::Identity(), Vec3(0.1, 0, 0));
  const PhotometricFrame* targets[] = {&target};
  const auto r = refine_inverse_depth(point_at(30, 30, 1.0), host, targets, kCam);
  EXPECT_EQ(r.status, DepthStatus::kUnchanged);
  EXPECT_EQ(r.inverse_depth, 1.0);
}

TEST(Pipeline, TwoIdenticalFrames) {
  harness::SyntheticConfig sc;
  sc.frames = 2;
  sc.supersample = 2;
  const auto scene = harness::generate_synthetic_scene(sc);
  const IntensityImage gray = to_grayscale(scene.views[0].color);
  std::vector<InputFrame> frames(2, InputFrame{gray, nullptr, 1.0});
  OdometryConfig cfg;
  cfg.selection.target_tracking_count = 200;
  const auto r = run_odometry(frames, scene.camera, cfg);
  ASSERT_EQ(r.trajectory.size(), 2u);
  for (const auto& p : r.trajectory) {
    EXPECT_LT(rotation_angle(p), 1e-12);
    EXPECT_LT(p.translation().norm(), 1e-12);
  }
}

TEST(Pipeline, RejectsSingleFrame) {
  std::vector<InputFrame> frames(1, InputFrame{IntensityImage(64, 64, 0.5), nullptr, 1.0});
  EXPECT_THROW(run_odometry(frames, kCam, OdometryConfig{}), Error);
}

TEST(TrajectoryIo, TumRoundTrip) {
  const auto dir = fs::temp_directory_path() / "photosplat_tum";
  fs::create_directories(dir);
  std::mt19937_64 rng(15);
  std::normal_distribution<double> n(0, 0.5);
  std::vector<StampedPose> poses;
  for (int i = 0; i < 5; ++i) {
    Twist t;
    for (int k = 0; k < 6; ++k) t[k] = n(rng);
    poses.push_back({i * 0.5, se3_exp(t)});
  }
  write_tum(dir / "t.txt", poses);
  const auto back = read_tum(dir / "t.txt");
  ASSERT_EQ(back.size(), poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    EXPECT_EQ(back[i].timestamp, poses[i].timestamp);
    // 9 significant digits.
    EXPECT_LT(translation_distance(back[i].pose, poses[i].pose), 1e-8);
    EXPECT_LT(rotation_distance(back[i].pose, poses[i].pose), 1e-8);
  }
}
