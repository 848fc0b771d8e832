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
#include <fstream>
#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "photosplat/core/error.hpp"
#include "photosplat/harness/baseline.hpp"
#include "photosplat/harness/comparison.hpp"
#include "photosplat/harness/dataset.hpp"
#include "photosplat/harness/outputs.hpp"
#include "photosplat/harness/settings.hpp"
#include "photosplat/harness/synthetic.hpp"

using namespace photosplat;
using namespace photosplat::harness;
using selection::ColoredPoint;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("photosplat_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

SyntheticConfig small_config(std::uint64_t seed = 3) {
  SyntheticConfig c;
  c.seed = seed;
  c.width = 64;
  c.height = 64;
  c.frames = 4;
  c.supersample = 2;
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ColoredPoint> status_cloud(int tracking, int extra, int fill) {
  std::vector<ColoredPoint> pts;
  auto add = [&](int n, odometry::PointStatus s) {
    for (int i = 0; i < n; ++i) pts.push_back({Vec3(pts.size(), 0, 0), Eigen::Vector3d::Zero(), s});
  };
  add(tracking, odometry::PointStatus::kPoseTracking);
  add(extra, odometry::PointStatus::kPositionOnly);
  add(fill, odometry::PointStatus::kGradientFill);
  return pts;
}

std::vector<double> xs(const std::vector<ColoredPoint>& pts) {
  std::vector<double> out;
  for (const auto& p : pts) out.push_back(p.position.x());
  return out;
}

}  // namespace

TEST(Synthetic, SameSeedSameImages) {
  const auto a = generate_synthetic_scene(small_config());
  const auto b = generate_synthetic_scene(small_config());
  ASSERT_EQ(a.views.size(), 4u);
  for (std::size_t i = 0; i < a.views.size(); ++i) {
    EXPECT_EQ(a.views[i].color.data(), b.views[i].color.data());
    EXPECT_EQ(a.views[i].depth, b.views[i].depth);
  }
  const auto c = generate_synthetic_scene(small_config(4));
  EXPECT_NE(a.views[0].color.data(), c.views[0].color.data());
}

TEST(Synthetic, WallFacingDepthIsAnalytic) {
  SyntheticConfig cfg = small_config();
  const SyntheticRoom room(cfg);
  // At the room center looking along +z, every ray lands on the front wall.
  const auto view = room.render(Se3Pose());
  const double wall = 0.5 * cfg.room_size.z();
  for (double d : view.depth) EXPECT_NEAR(d, wall, 1e-6);
}

TEST(Synthetic, TexturelessShareMatchesConfig) {
  SyntheticConfig cfg;
  const SyntheticRoom room(cfg);
  const Vec3 h = 0.5 * cfg.room_size;
  // 8 x 6 floor tiles of 0.5 m, round(0.3 * 48) of them flat. Probe each
  // tile center.
  int flat = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 6; ++j) {
      const Vec3 p(-h.x() + 0.25 + 0.5 * i, h.y(), -h.z() + 0.25 + 0.5 * j);
      flat += room.tile_weight(RoomFace::kFloor, p) == 1.0;
    }
  }
  EXPECT_EQ(flat, 14);
}

TEST(Synthetic, InvalidConfig) {
  SyntheticConfig cfg;
  cfg.frames = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = SyntheticConfig{};
  cfg.textureless_fraction = 1.5;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Dataset, WriteLoadRoundTrip) {
  const auto scene = generate_synthetic_scene(small_config());
  const auto dir = scratch("roundtrip");
  write_dataset(dir, scene);
  const auto data = load_dataset(dir);
  ASSERT_EQ(data.size(), scene.views.size());
  EXPECT_EQ(data.camera.fx(), scene.camera.fx());
  ASSERT_TRUE(data.trajectory);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& a = data.color[i].data();
    const auto& b = scene.views[i].color.data();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
    EXPECT_LT(translation_distance((*data.trajectory)[i], scene.views[i].pose), 1e-6);
  }
  const auto mem = dataset_from_scene(scene);
  EXPECT_EQ(mem.color[1].data(), data.color[1].data());
}

TEST(Dataset, MissingIntrinsicsNamesPath) {
  const auto scene = generate_synthetic_scene(small_config());
  const auto dir = scratch("nointr");
  write_dataset(dir, scene);
  fs::remove(dir / "intrinsics.txt");
  try {
    load_dataset(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("intrinsics.txt"), std::string::npos);
  }
}

TEST(Dataset, TrajectoryCountMismatch) {
  const auto scene = generate_synthetic_scene(small_config());
  const auto dir = scratch("traj");
  write_dataset(dir, scene);
  std::ofstream(dir / "groundtruth.txt", std::ios::app) << "99 0 0 0 0 0 0 1\n";
  try {
    load_dataset(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    const std::string msg = e.what();
    EXPECT_NE(msg.find('5'), std::string::npos);
    EXPECT_NE(msg.find('4'), std::string::npos);
  }
}

TEST(Baseline, FullRatioKeepsEveryTrackingPoint) {
  const auto cloud = status_cloud(30, 10, 5);
  BaselineConfig cfg{BaselineMode::kRatio, 1.0, 7};
  const auto out = make_sparse_baseline(cloud, cfg);
  ASSERT_EQ(out.size(), 30u);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].position, cloud[i].position);
}

TEST(Baseline, QuarterRatioCountAndOrder) {
  const auto cloud = status_cloud(1000, 0, 0);
  const auto out = make_sparse_baseline(cloud, {BaselineMode::kRatio, 0.25, 11});
  ASSERT_EQ(out.size(), 250u);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LT(out[i - 1].position.x(), out[i].position.x());
  EXPECT_EQ(xs(out), xs(make_sparse_baseline(cloud, {BaselineMode::kRatio, 0.25, 11})));
  EXPECT_NE(xs(out), xs(make_sparse_baseline(cloud, {BaselineMode::kRatio, 0.25, 12})));
}

TEST(Baseline, TrackingOnlyDropsOtherStatuses) {
  const auto out = make_sparse_baseline(status_cloud(12, 40, 9), {});
  ASSERT_EQ(out.size(), 12u);
  for (const auto& p : out) EXPECT_EQ(p.status, odometry::PointStatus::kPoseTracking);
}

TEST(Baseline, EmptyResultAndBadRatio) {
  EXPECT_THROW(make_sparse_baseline(status_cloud(0, 5, 5), {}), Error);
  EXPECT_THROW(make_sparse_baseline(status_cloud(3, 0, 0), {BaselineMode::kRatio, 0.1, 0}), Error);
  EXPECT_THROW(make_sparse_baseline(status_cloud(3, 0, 0), {BaselineMode::kRatio, 1.5, 0}), Error);
  EXPECT_EQ(parse_baseline_mode("ratio"), BaselineMode::kRatio);
  EXPECT_THROW(parse_baseline_mode("dense"), Error);
}

TEST(Comparison, IdenticalCloudsGiveIdenticalTraces) {
  auto cfg = small_config();
  cfg.frames = 6;
  const auto data = dataset_from_scene(generate_synthetic_scene(cfg));
  Settings settings;
  settings.harness.timings = false;
  settings.harness.checkpoints = {5, 10};
  const auto setup = make_training_setup(data, *data.trajectory, 3.0, settings, 1);
  EXPECT_EQ(setup.holdout, std::vector<int>{2});
  std::vector<ColoredPoint> cloud;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) cloud.push_back({Vec3(u(rng), u(rng), u(rng)), Eigen::Vector3d::Constant(0.5)});
  std::vector<int> log_a, log_b;
  const auto a = train_and_evaluate("x", 1, cloud, setup, &log_a);
  const auto b = train_and_evaluate("x", 1, cloud, setup, &log_b);
  EXPECT_EQ(a, b);
  EXPECT_EQ(log_a, log_b);
  ASSERT_EQ(a.points.size(), 2u);
  EXPECT_EQ(a.points[1].iteration, 10);
  EXPECT_EQ(a.points[1].ms, 0.0);
  for (int v : log_a) EXPECT_NE(v, 2);
  EXPECT_EQ(shared_input_hash(setup), shared_input_hash(make_training_setup(data, *data.trajectory, 3.0, settings, 1)));
  EXPECT_NE(shared_input_hash(setup), shared_input_hash(make_training_setup(data, *data.trajectory, 3.0, settings, 2)));
}

TEST(Outputs, SummaryGapsAndSpread) {
  std::vector<TrainingTrace> t{{"dense", 0, {{10, 20, 0.1, 5, 0}}}, {"sparse", 0, {{10, 15, 0.2, 3, 0}}},
                               {"dense", 1, {{10, 24, 0.1, 7, 0}}}, {"sparse", 1, {{10, 17, 0.2, 3, 0}}}};
  const auto rows = summarize(t, {"dense", "sparse"});
  bool saw_gap = false;
  for (const auto& r : rows) {
    if (r.label == "dense") {
      EXPECT_EQ(r.runs, 2);
      EXPECT_DOUBLE_EQ(r.psnr_mean, 22);
      EXPECT_DOUBLE_EQ(r.psnr_std, std::sqrt(8.0));
      EXPECT_DOUBLE_EQ(r.count_mean, 6);
    }
    if (r.label == "gap") {
      saw_gap = true;
      EXPECT_DOUBLE_EQ(r.psnr_mean, 6);
    }
  }
  EXPECT_TRUE(saw_gap);
}

TEST(Outputs, CsvRoundTripAndRowCount) {
  std::vector<TrainingTrace> t{{"dense", 3, {{10, 21.123456789012345, 0.1 / 3, 100, 1.5}, {20, INFINITY, 0, 90, 2}}},
                               {"sparse", 3, {{10, 1.0 / 7, 1e-300, 4, 0}}}};
  const auto dir = scratch("csv");
  write_traces_csv(dir / "t.csv", t);
  const std::string text = read_file(dir / "t.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);  // header + 3 rows
  EXPECT_EQ(read_traces_csv(dir / "t.csv"), t);
  EXPECT_THROW(read_traces_csv(dir / "absent.csv"), Error);
}

TEST(Outputs, SvgHasOnePolylinePerLabel) {
  std::vector<TrainingTrace> t{{"dense", 0, {{10, 20, 0, 1, 0}, {20, 22, 0, 1, 0}}},
                               {"sparse", 0, {{10, 15, 0, 1, 0}, {20, 18, 0, 1, 0}}}};
  const auto dir = scratch("svg");
  write_psnr_svg(dir / "p.svg", summarize(t));
  const std::string svg = read_file(dir / "p.svg");
  std::size_t n = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++n;
  EXPECT_EQ(n, 2u);
}

TEST(Settings, DefaultFileMatchesDefaults) {
  const auto loaded = load_settings(fs::path(PHOTOSPLAT_SOURCE_DIR) / "configs" / "default.toml");
  EXPECT_EQ(settings_to_toml(loaded), settings_to_toml(Settings{}));
}

TEST(Settings, TomlRoundTrip) {
  Settings s;
  s.odometry.selection.target_tracking_count = 123;
  s.train.iterations = 777;
  s.harness.checkpoints = {5, 50, 500};
  s.synthetic.textureless_fraction = 0.125;
  const auto text = settings_to_toml(s);
  EXPECT_EQ(settings_to_toml(parse_settings(text)), text);
}

TEST(Settings, RejectsUnknownAndInvalid) {
  EXPECT_THROW(parse_settings("[splat]\nbogus = 1\n"), Error);
  EXPECT_THROW(parse_settings("[nowhere]\n"), Error);
  EXPECT_THROW(parse_settings("[harness]\ncheckpoints = [30, 10]\n"), Error);
  EXPECT_THROW(load_settings("/nonexistent/photosplat.toml"), Error);
}

TEST(Settings, SeedAndIntLists) {
  EXPECT_EQ(parse_seed_list("3"), std::vector<std::uint64_t>{3});
  EXPECT_EQ(parse_seed_list("0..4"), (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(parse_seed_list("1,4,7"), (std::vector<std::uint64_t>{1, 4, 7}));
  EXPECT_THROW(parse_seed_list("3..1"), Error);
  EXPECT_THROW(parse_seed_list("x"), Error);
  EXPECT_THROW(parse_seed_list(""), Error);
  EXPECT_EQ(parse_int_list("10,20,40"), (std::vector<int>{10, 20, 40}));
  EXPECT_THROW(parse_int_list("10,,20"), Error);
}
