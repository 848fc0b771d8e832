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

// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "pair_fixture.hpp"
#include "photosplat/harness/comparison.hpp"
#include "photosplat/harness/dataset.hpp"
#include "photosplat/harness/outputs.hpp"
#include "photosplat/harness/reference.hpp"
#include "photosplat/harness/settings.hpp"
#include "photosplat/harness/synthetic.hpp"
#include "photosplat/odometry/pipeline.hpp"
#include "photosplat/odometry/tracker.hpp"
#include "photosplat/selection/point_cloud.hpp"
#include "photosplat/selection/selector.hpp"
#include "splat_checks.hpp"

using namespace photosplat;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, double seconds, double limit, const std::string& detail) {
  const bool in_time = limit <= 0 || seconds < limit;
  if (!(pass && in_time)) ++failures;
  std::printf("criterion %d: %s  %s  (%.1f s", id, pass && in_time ? "PASS" : "FAIL", detail.c_str(), seconds);
  if (limit > 0) std::printf(", limit %.0f s", limit);
  std::printf(")\n");
  std::fflush(stdout);
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

harness::Settings desk_settings() {
  return harness::load_settings(fs::path(PHOTOSPLAT_SOURCE_DIR) / "configs" / "desk128.toml");
}

std::vector<odometry::InputFrame> input_frames(const harness::SyntheticScene& scene) {
  std::vector<odometry::InputFrame> frames;
  for (const auto& v : scene.views) frames.push_back({to_grayscale(v.color), std::make_shared<ColorImage>(v.color), 1.0});
  return frames;
}

void gradients() {
  const auto t0 = Clock::now();
  int checked = 0, failed = 0;
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = checks::gradient_check(seed);
    checked += r.checked;
    failed += r.failed;
    worst = std::max(worst, r.worst_ratio);
  }
  report(1, failed == 0, since(t0), 60,
         fmt("%d/%d gradients within tolerance, worst error/tolerance %.3f", checked - failed, checked, worst));
}

void renderer_oracle() {
  const auto t0 = Clock::now();
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) worst = std::max(worst, checks::oracle_difference(seed, nullptr));
  report(2, worst <= 2e-3, since(t0), 60, fmt("max channel difference %.2e over 50 scenes (tol 2e-3)", worst));
}

void solver_recovery() {
  const auto t0 = Clock::now();
  int ok = 0;
  double worst_rot = 0, worst_t = 0, worst_b = 0;
  for (int i = 0; i < 20; ++i) {
    std::mt19937_64 rng(1000 + i);
    std::uniform_real_distribution<double> u(0, 1);
    const double deg = 2 * u(rng), frac = 0.02 * u(rng), off = 0.1 * u(rng) - 0.05;
    auto p = fixture::make_pair(i, deg, frac, off);
    p.target.pose = Se3Pose();
    bool pass = false;
    try {
      const auto r = odometry::track_frame(p.target, p.reference, p.points, p.camera, Se3Pose());
      const double rot = rotation_distance(r.pose, p.truth) * 180 / std::numbers::pi;
      const double tr = translation_distance(r.pose, p.truth) / p.mean_depth;
      const double db = std::abs(r.affine_b - off);
      worst_rot = std::max(worst_rot, rot);
      worst_t = std::max(worst_t, tr);
      worst_b = std::max(worst_b, db);
      pass = rot < 0.1 && tr < 0.002 && db < 0.005;
    } catch (const std::exception& e) {
      std::printf("  pair %d: %s\n", i, e.what());
    }
    ok += pass;
  }
  report(3, ok >= 18, since(t0), 120,
         fmt("%d/20 pairs recovered (need 18); worst %.3f deg, %.3f%% of depth, b off by %.4f", ok, worst_rot,
             100 * worst_t, worst_b));
}

void selector_properties() {
  const auto t0 = Clock::now();
  const auto settings = desk_settings();
  const auto& sel = settings.odometry.selection;
  bool exact = true, unique = true, ratio_ok = true;
  std::size_t fills = 0;
  std::string ratios;
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    auto sc = settings.synthetic;
    sc.seed = seed;
    sc.frames = 6;
    const auto scene = harness::generate_synthetic_scene(sc);
    const auto gray = to_grayscale(scene.views[0].color);

    // Extras: one per cell and never in a cell that holds a tracking pixel.
    const auto px = selection::select_pixels(gray, sel, true);
    const auto grid = selection::make_cell_grid(gray, sel.extra_cell_size);
    std::set<int> tracked_cells, extra_cells;
    for (const auto& p : px.tracking) tracked_cells.insert(grid.index_of(p.x, p.y));
    for (const auto& p : px.extra) {
      const int c = grid.index_of(p.x, p.y);
      if (!extra_cells.insert(c).second || tracked_cells.count(c)) unique = false;
    }

    // Fill: exact mean of the k nearest non-fill inverse depths, by brute force.
    std::vector<odometry::TrackedPoint> cloud;
    auto add = [&](const selection::Pixel& p) {
      odometry::TrackedPoint t;
      t.u = p.x;
      t.v = p.y;
      t.inverse_depth = 1.0 / scene.views[0].depth[static_cast<std::size_t>(p.y) * sc.width + p.x];
      cloud.push_back(t);
    };
    for (const auto& p : px.tracking) add(p);
    for (const auto& p : px.extra) add(p);
    const auto fill = selection::fill_gradientless_regions(cloud, gray, scene.views[0].color, 0, sel);
    fills += fill.size();
    for (const auto& f : fill) {
      std::vector<std::pair<double, double>> d;
      for (const auto& c : cloud) d.emplace_back(std::pow(c.u - f.u, 2) + std::pow(c.v - f.v, 2), c.inverse_depth);
      std::stable_sort(d.begin(), d.end(), [](auto& a, auto& b) { return a.first < b.first; });
      double sum = 0;
      for (int k = 0; k < sel.fill_neighbor_count; ++k) sum += d[k].second;
      if (f.inverse_depth != sum / sel.fill_neighbor_count) exact = false;
    }

    // Whole-sequence cloud sizes, dense against tracking-only.
    const auto frames = input_frames(scene);
    std::vector<float> d0(scene.views[0].depth.begin(), scene.views[0].depth.end());
    auto oc = settings.odometry;
    const auto dense = odometry::run_odometry(frames, scene.camera, oc, &d0);
    oc.dense = false;
    const auto sparse = odometry::run_odometry(frames, scene.camera, oc, &d0);
    const auto nd = selection::export_point_cloud(dense.cloud, scene.camera, dense.host_poses()).size();
    const auto ns = selection::export_point_cloud(sparse.cloud, scene.camera, sparse.host_poses()).size();
    const double r = static_cast<double>(nd) / static_cast<double>(ns);
    ratio_ok = ratio_ok && r >= 3.0;
    ratios += fmt("%s%zu/%zu=%.1fx", ratios.empty() ? "" : ", ", nd, ns, r);
  }
  report(4, exact && unique && ratio_ok && fills > 0, since(t0), 30,
         fmt("fill means exact: %s (%zu points), extras cell-unique: %s, dense/tracking-only %s (need 3x)",
             exact ? "yes" : "no", fills, unique ? "yes" : "no", ratios.c_str()));
}

harness::Dataset synthetic_dataset(const harness::Settings& s, std::uint64_t seed) {
  auto sc = s.synthetic;
  sc.seed = seed;
  return harness::dataset_from_scene(harness::generate_synthetic_scene(sc));
}

void dense_vs_sparse() {
  const auto t0 = Clock::now();
  auto settings = desk_settings();
  settings.harness.timings = false;
  const std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  const auto result = harness::run_comparison(
      [&](std::uint64_t seed) { return synthetic_dataset(settings, seed); }, seeds, settings);

  // Paired gaps per checkpoint.
  const auto& cps = settings.harness.checkpoints;
  std::vector<std::vector<double>> gaps(cps.size());
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const auto& dense = result.traces[2 * s];
    const auto& sparse = result.traces[2 * s + 1];
    for (std::size_t c = 0; c < cps.size(); ++c) gaps[c].push_back(dense.points[c].psnr - sparse.points[c].psnr);
  }
  bool all_nonneg = true, mean120 = false;
  int wins120 = 0;
  std::printf("  iter   dense  sparse    gap   per-seed gaps\n");
  for (std::size_t c = 0; c < cps.size(); ++c) {
    double dm = 0, sm = 0, gm = 0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      dm += result.traces[2 * s].points[c].psnr / seeds.size();
      sm += result.traces[2 * s + 1].points[c].psnr / seeds.size();
      gm += gaps[c][s] / seeds.size();
    }
    std::string per;
    for (double g : gaps[c]) per += fmt(" %+.2f", g);
    std::printf("  %4d  %6.2f  %6.2f  %+6.2f  %s\n", cps[c], dm, sm, gm, per.c_str());
    if (cps[c] <= 640 && gm < 0) all_nonneg = false;
    if (cps[c] == 120) {
      mean120 = gm > 1.5;
      for (double g : gaps[c]) wins120 += g > 0;
    }
  }
  std::printf("  reference (Replica, not a target):");
  for (const auto& r : harness::kReferenceTable) std::printf("  %s@%d %.2f", r.method, r.iteration, r.average);
  std::printf("\n");
  const auto it = std::find(cps.begin(), cps.end(), 120);
  const double g120 = it == cps.end() ? NAN : [&] {
    double m = 0;
    for (double g : gaps[it - cps.begin()]) m += g / seeds.size();
    return m;
  }();
  report(5, mean120 && all_nonneg && wins120 >= 4, since(t0), 0,
         fmt("mean gap @120 %+.2f dB (need > 1.5), dense wins @120 in %d/5, mean gap >= 0 at every checkpoint: %s",
             g120, wins120, all_nonneg ? "yes" : "no"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
  const auto t0 = Clock::now();
  auto settings = desk_settings();
  settings.harness.timings = false;
  settings.harness.checkpoints = {10, 20, 40};
  settings.synthetic.frames = 8;
  const std::vector<std::uint64_t> seeds{0, 1};
  const auto root = fs::temp_directory_path() / "photosplat_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> csv;
  for (int workers : {1, 3}) {
    auto s = settings;
    s.harness.workers = workers;
    s.train.workers = workers;
    s.odometry.workers = workers;
    s.odometry.tracker.workers = workers;
    const auto r = harness::run_comparison([&](std::uint64_t seed) { return synthetic_dataset(s, seed); }, seeds, s);
    const auto dir = root / std::to_string(workers);
    fs::create_directories(dir);
    harness::write_traces_csv(dir / "traces.csv", r.traces);
    harness::write_summary_csv(dir / "summary.csv", r.summary);
    csv.push_back(slurp(dir / "traces.csv") + slurp(dir / "summary.csv"));
  }
  report(6, csv[0] == csv[1] && !csv[0].empty(), since(t0), 0,
         fmt("traces.csv and summary.csv with 1 and 3 workers are %s (%zu bytes)",
             csv[0] == csv[1] ? "byte-identical" : "different", csv[0].size()));
}

void odometry_accuracy() {
  const auto t0 = Clock::now();
  const auto settings = desk_settings();
  auto sc = settings.synthetic;
  sc.frames = 20;
  const auto scene = harness::generate_synthetic_scene(sc);
  std::vector<float> d0(scene.views[0].depth.begin(), scene.views[0].depth.end());
  const auto res = odometry::run_odometry(input_frames(scene), scene.camera, settings.odometry, &d0);
  const Se3Pose origin = scene.views[0].pose.inverse();
  double path = 0, sq = 0;
  for (int i = 0; i < sc.frames; ++i) {
    const Se3Pose gt = origin * scene.views[i].pose;
    if (i > 0) path += ((origin * scene.views[i - 1].pose).translation() - gt.translation()).norm();
    sq += (gt.translation() - res.frame_poses[i].translation()).squaredNorm();
  }
  const double ate = std::sqrt(sq / sc.frames);
  int good = 0, total = 0;
  for (const auto& p : res.cloud) {
    if (p.status != odometry::PointStatus::kPoseTracking) continue;
    ++total;
    const double z = scene.views[p.host_frame].depth[static_cast<std::size_t>(p.v) * sc.width + static_cast<std::size_t>(p.u)];
    if (p.depth_valid && std::abs(1.0 / p.inverse_depth - z) < 0.05 * z) ++good;
  }
  const bool pass = ate < 0.01 * path && total > 0 && good >= 0.9 * total;
  report(7, pass, since(t0), 120,
         fmt("ATE %.4f m = %.2f%% of %.3f m path (need < 1%%), depths within 5%%: %d/%d = %.1f%% (need 90%%)", ate,
             100 * ate / path, path, good, total, 100.0 * good / std::max(total, 1)));
}

}  // namespace

int main(int argc, char** argv) {
  // Optional criterion numbers select a subset.
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<std::function<void()>> all{gradients, renderer_oracle, solver_recovery, selector_properties,
                                               dense_vs_sparse, determinism, odometry_accuracy};
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    try {
      all[i]();
    } catch (const std::exception& e) {
      report(id, false, 0, 0, std::string("threw: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
