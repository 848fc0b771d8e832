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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "photosplat/core/error.hpp"
#include "photosplat/harness/synthetic.hpp"
#include "photosplat/selection/point_cloud.hpp"
#include "photosplat/selection/selector.hpp"

using namespace photosplat;
using namespace photosplat::selection;
using odometry::PointStatus;
using odometry::TrackedPoint;
namespace fs = std::filesystem;

namespace {

// Central-difference magnitude, zero on the border.
double grad_at(const IntensityImage& img, int x, int y) {
  if (x < 1 || y < 1 || x > img.width() - 2 || y > img.height() - 2) return 0.0;
  const double gx = (img.at(x + 1, y) - img.at(x - 1, y)) / 2;
  const double gy = (img.at(x, y + 1) - img.at(x, y - 1)) / 2;
  return std::hypot(gx, gy);
}

double cell_max_grad(const IntensityImage& img, int cx, int cy, int cs) {
  double best = 0.0;
  for (int y = cy * cs; y < std::min((cy + 1) * cs, img.height()); ++y) {
    for (int x = cx * cs; x < std::min((cx + 1) * cs, img.width()); ++x) best = std::max(best, grad_at(img, x, y));
  }
  return best;
}

IntensityImage noise_image(std::uint64_t seed, int w, int h, double amplitude = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  IntensityImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.at(x, y) = 0.5 + u(rng);
  }
  return img;
}

TrackedPoint tracked(double u, double v, double rho, PointStatus s = PointStatus::kPoseTracking) {
  TrackedPoint p;
  p.u = u;
  p.v = v;
  p.inverse_depth = rho;
  p.status = s;
  return p;
}

}  // namespace

TEST(Tracking, ConstantImageHasNoTexture) {
  try {
    select_tracking_pixels(IntensityImage(64, 64, 0.5), SelectionConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientTexture);
  }
}

TEST(Tracking, StepEdgeSupportsAllPixels) {
  IntensityImage img(96, 96, 0.2);
  for (int y = 0; y < 96; ++y) {
    for (int x = 48; x < 96; ++x) img.at(x, y) = 0.8;
  }
  const auto px = select_tracking_pixels(img, SelectionConfig{});
  ASSERT_FALSE(px.empty());
  for (const auto& p : px) {
    EXPECT_GE(p.x, 47 - 1);
    EXPECT_LE(p.x, 48 + 1);
  }
}

TEST(Tracking, CheckerboardCountNearTarget) {
  for (int target : {200, 400, 800}) {
    IntensityImage img(128, 128);
    for (int y = 0; y < 128; ++y) {
      for (int x = 0; x < 128; ++x) img.at(x, y) = ((x / 4 + y / 4) % 2) ? 0.75 : 0.25;
    }
    SelectionConfig cfg;
    cfg.target_tracking_count = target;
    const auto n = static_cast<double>(select_tracking_pixels(img, cfg).size());
    EXPECT_GE(n, 0.8 * target) << target;
    EXPECT_LE(n, 1.2 * target) << target;
  }
}

TEST(Tracking, TrackingPixelsClearOfBordersAndAboveFloor) {
  const auto img = noise_image(1, 96, 96);
  SelectionConfig cfg;
  for (const auto& p : select_tracking_pixels(img, cfg)) {
    EXPECT_GE(p.x, 2);
    EXPECT_GE(p.y, 2);
    EXPECT_LE(p.x, 93);
    EXPECT_LE(p.y, 93);
    EXPECT_GE(grad_at(img, p.x, p.y), cfg.gradient_floor);
  }
}

TEST(Extra, NoneWhenTrackingCoversEveryCell) {
  const auto img = noise_image(2, 64, 64);
  SelectionConfig cfg;
  std::vector<Pixel> all;
  for (int y = 0; y < 64; y += cfg.extra_cell_size) {
    for (int x = 0; x < 64; x += cfg.extra_cell_size) all.push_back({x + 3, y + 3});
  }
  EXPECT_TRUE(select_extra_pixels(img, all, cfg).empty());
}

TEST(Extra, OnePerQualifyingCellWithoutTracking) {
  auto img = noise_image(3, 64, 64);
  // A flat quadrant has cells below the floor.
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) img.at(x, y) = 0.5;
  }
  SelectionConfig cfg;
  const int cs = cfg.extra_cell_size;
  const auto extra = select_extra_pixels(img, {}, cfg);
  std::set<std::pair<int, int>> cells;
  for (const auto& p : extra) {
    EXPECT_TRUE(cells.insert({p.x / cs, p.y / cs}).second) << "two extras in one cell";
    EXPECT_EQ(grad_at(img, p.x, p.y), cell_max_grad(img, p.x / cs, p.y / cs, cs));
  }
  int qualifying = 0;
  for (int cy = 0; cy < 64 / cs; ++cy) {
    for (int cx = 0; cx < 64 / cs; ++cx) {
      if (cell_max_grad(img, cx, cy, cs) >= cfg.gradient_floor) ++qualifying;
    }
  }
  EXPECT_EQ(static_cast<int>(extra.size()), qualifying);
  EXPECT_LT(qualifying, 64);
}

TEST(Extra, CoverageOnTexturedImages) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto img = noise_image(seed, 128, 96, 0.05 + 0.05 * (seed % 3));
    SelectionConfig cfg;
    const auto r = select_pixels(img, cfg, true);
    const auto covered = std::count(r.occupancy.begin(), r.occupancy.end(), true);
    EXPECT_GE(static_cast<double>(covered), 0.95 * static_cast<double>(r.occupancy.size()));
    // Lists are disjoint.
    std::set<std::pair<int, int>> seen;
    for (const auto& p : r.tracking) seen.insert({p.x, p.y});
    for (const auto& p : r.extra) EXPECT_TRUE(seen.insert({p.x, p.y}).second);
  }
}

TEST(Fill, NothingToFillOnTexturedImage) {
  const auto img = noise_image(4, 64, 64);
  const std::vector<TrackedPoint> cloud{tracked(10, 10, 0.5)};
  EXPECT_TRUE(fill_gradientless_regions(cloud, img, gray_to_color(img), 0, SelectionConfig{}).empty());
}

TEST(Fill, SingleFlatCellTakesNeighborMean) {
  auto img = noise_image(5, 64, 64);
  // One flat cell, with a one-pixel margin so its interior gradient is zero.
  for (int y = 15; y <= 24; ++y) {
    for (int x = 15; x <= 24; ++x) img.at(x, y) = 0.5;
  }
  std::vector<TrackedPoint> cloud;
  for (int i = 0; i < 8; ++i) cloud.push_back(tracked(5 + 6 * i, 40, 0.5, i % 2 ? PointStatus::kPositionOnly : PointStatus::kPoseTracking));
  const auto fill = fill_gradientless_regions(cloud, img, gray_to_color(img), 3, SelectionConfig{});
  ASSERT_EQ(fill.size(), 1u);
  EXPECT_EQ(fill[0].inverse_depth, 0.5);
  EXPECT_EQ(fill[0].u, 19.5);
  EXPECT_EQ(fill[0].v, 19.5);
  EXPECT_EQ(fill[0].status, PointStatus::kGradientFill);
  EXPECT_EQ(fill[0].host_frame, 3);
}

TEST(Fill, ExactKNearestMean) {
  IntensityImage img(64, 64, 0.5);  // every cell is flat
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pos(0, 63), rho(0.2, 2.0);
  std::vector<TrackedPoint> cloud;
  for (int i = 0; i < 40; ++i) cloud.push_back(tracked(pos(rng), pos(rng), rho(rng)));
  cloud.push_back(tracked(1, 1, 100.0, PointStatus::kGradientFill));  // never a source
  SelectionConfig cfg;
  const auto fill = fill_gradientless_regions(cloud, img, gray_to_color(img), 0, cfg);
  EXPECT_EQ(fill.size(), 64u);
  for (const auto& f : fill) {
    std::vector<std::pair<double, double>> d;  // (distance^2, inverse depth)
    for (std::size_t i = 0; i + 1 < cloud.size(); ++i) {
      d.emplace_back(std::pow(cloud[i].u - f.u, 2) + std::pow(cloud[i].v - f.v, 2), cloud[i].inverse_depth);
    }
    std::sort(d.begin(), d.end());
    double sum = 0;
    for (int k = 0; k < cfg.fill_neighbor_count; ++k) sum += d[k].second;
    EXPECT_EQ(f.inverse_depth, sum / cfg.fill_neighbor_count);
    EXPECT_LT(grad_at(img, static_cast<int>(f.u), static_cast<int>(f.v)), cfg.gradient_floor);
  }
}

TEST(Fill, EmptyCloudIsInvalid) {
  IntensityImage img(64, 64, 0.5);
  try {
    fill_gradientless_regions({}, img, gray_to_color(img), 0, SelectionConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Fill, FlatWallDepthsFromGroundTruthNeighbors) {
  harness::SyntheticConfig sc;
  sc.textureless_fraction = 0.3;
  sc.seed = 2;
  harness::SyntheticRoom room(sc);
  int good = 0, total = 0;
  for (double t : {0.0, 7.0, 14.0}) {
    const auto view = room.render(room.orbit_pose(t));
    const auto gray = to_grayscale(view.color);
    SelectionConfig cfg;
    cfg.target_tracking_count = 200;
    cfg.extra_cell_size = 4;
    const auto sel = select_pixels(gray, cfg, true);
    std::vector<TrackedPoint> cloud;
    auto depth = [&](double u, double v) {
      return view.depth[static_cast<std::size_t>(std::lround(v)) * sc.width + std::lround(u)];
    };
    for (const auto& p : sel.tracking) cloud.push_back(tracked(p.x, p.y, 1.0 / depth(p.x, p.y)));
    for (const auto& p : sel.extra) cloud.push_back(tracked(p.x, p.y, 1.0 / depth(p.x, p.y), PointStatus::kPositionOnly));
    const auto fill = fill_gradientless_regions(cloud, gray, view.color, 0, cfg);
    for (const auto& f : fill) {
      const double z = depth(f.u, f.v);
      if (std::abs(1.0 / f.inverse_depth - z) < 0.1 * z) ++good;
      ++total;
    }
  }
  ASSERT_GT(total, 20);
  EXPECT_GE(good, 0.8 * total) << good << "/" << total;
}

TEST(Export, PrincipalPointAtUnitDepth) {
  const PinholeCamera cam(100, 100, 32, 24, 64, 48);
  const std::vector<TrackedPoint> cloud{tracked(32, 24, 1.0)};
  const auto out = export_point_cloud(cloud, cam, {{0, Se3Pose()}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].position, Vec3(0, 0, 1));
}

TEST(Export, ReprojectsIntoHostFrames) {
  const PinholeCamera cam(90, 95, 40, 30, 80, 60);
  std::map<int, Se3Pose> poses;
  Twist t1, t2;
  t1 << 0.3, -0.1, 0.2, 0.1, 0.2, -0.05;
  t2 << -0.5, 0.4, 0.1, -0.2, 0.1, 0.3;
  poses[0] = se3_exp(t1);
  poses[5] = se3_exp(t2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 79), v(0, 59), rho(0.1, 3);
  std::vector<TrackedPoint> cloud;
  for (int i = 0; i < 200; ++i) {
    auto p = tracked(u(rng), v(rng), rho(rng), static_cast<PointStatus>(i % 3));
    p.host_frame = i % 2 ? 5 : 0;
    cloud.push_back(p);
  }
  const auto out = export_point_cloud(cloud, cam, poses);
  ASSERT_EQ(out.size(), cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3 pc = poses[cloud[i].host_frame].inverse() * out[i].position;
    EXPECT_NEAR(cam.fx() * pc.x() / pc.z() + cam.cx(), cloud[i].u, 1e-6);
    EXPECT_NEAR(cam.fy() * pc.y() / pc.z() + cam.cy(), cloud[i].v, 1e-6);
    EXPECT_EQ(out[i].status, cloud[i].status);
  }
}

TEST(Export, MissingHostPose) {
  const PinholeCamera cam(100, 100, 32, 24, 64, 48);
  auto p = tracked(3, 3, 1.0);
  p.host_frame = 9;
  const std::vector<TrackedPoint> cloud{p};
  try {
    export_point_cloud(cloud, cam, {{0, Se3Pose()}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidState);
  }
}

TEST(Ply, RoundTripWithStatus) {
  const auto path = fs::temp_directory_path() / "photosplat_cloud.ply";
  std::vector<ColoredPoint> pts;
  for (int i = 0; i < 6; ++i) {
    pts.push_back({Vec3(i * 0.125, -i * 0.5, 2.0 + i), Eigen::Vector3d(i / 5.0, 1.0 - i / 5.0, 0.5),
                   static_cast<PointStatus>(i % 3)});
  }
  write_point_cloud_ply(path, pts);
  const auto back = read_point_cloud_ply(path);
  ASSERT_EQ(back.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LT((back[i].position - pts[i].position).norm(), 1e-6);
    EXPECT_LT((back[i].color - pts[i].color).cwiseAbs().maxCoeff(), 0.5 / 255 + 1e-12);
    EXPECT_EQ(back[i].status, pts[i].status);
  }
}
