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

#include "photosplat/harness/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "photosplat/core/error.hpp"
#include "photosplat/core/image_io.hpp"
#include "photosplat/odometry/trajectory_io.hpp"

namespace photosplat::harness {
namespace fs = std::filesystem;
namespace {

std::string frame_name(int i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06d.%s", i, ext);
  return buf;
}

PinholeCamera read_intrinsics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "missing intrinsics file " + path.string());
  double fx, fy, cx, cy;
  int w, h;
  if (!(in >> fx >> fy >> cx >> cy >> w >> h)) {
    throw_error(ErrorCode::kIo, path.string() + ": expected \"fx fy cx cy width height\"");
  }
  if (!(fx > 0 && fy > 0) || w <= 0 || h <= 0) {
    throw_error(ErrorCode::kInvalidArgument, path.string() + ": intrinsics out of range");
  }
  return PinholeCamera(fx, fy, cx, cy, w, h);
}

void write_intrinsics(const fs::path& path, const PinholeCamera& cam) {
  std::ofstream out(path);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %d %d\n", cam.fx(), cam.fy(), cam.cx(),
                cam.cy(), cam.width(), cam.height());
  out << buf;
  if (!out) throw_error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw_error(ErrorCode::kIo, "dataset directory not found: " + dir.string());
  Dataset ds;
  ds.camera = read_intrinsics(dir / "intrinsics.txt");

  const fs::path images = dir / "images";
  for (int i = 0;; ++i) {
    fs::path p = images / frame_name(i, "png");
    if (!fs::exists(p)) p = images / frame_name(i, "pgm");
    if (!fs::exists(p)) break;
    auto img = load_image(p);
    if (img.color.width() != ds.camera.width() || img.color.height() != ds.camera.height()) {
      throw_error(ErrorCode::kInvalidArgument,
                  p.string() + " is " + std::to_string(img.color.width()) + "x" +
                      std::to_string(img.color.height()) + " but the intrinsics say " +
                      std::to_string(ds.camera.width()) + "x" + std::to_string(ds.camera.height()));
    }
    ds.color.push_back(std::move(img.color));
    ds.gray.push_back(std::move(img.gray));
  }
  if (ds.color.empty()) throw_error(ErrorCode::kIo, "no frames found in " + images.string());

  const fs::path traj = dir / "groundtruth.txt";
  if (fs::exists(traj)) {
    const auto poses = odometry::read_tum(traj);
    if (poses.size() != ds.size()) {
      throw_error(ErrorCode::kInvalidArgument,
                  traj.string() + " has " + std::to_string(poses.size()) + " poses for " +
                      std::to_string(ds.size()) + " frames");
    }
    std::vector<Se3Pose> out;
    for (const auto& p : poses) out.push_back(p.pose);
    ds.trajectory = std::move(out);
  }
  const fs::path exposures = dir / "exposures.txt";
  if (fs::exists(exposures)) ds.exposures = odometry::read_exposures(exposures);

  for (int i = 0; i < static_cast<int>(ds.size()); ++i) {
    const fs::path p = dir / "depth" / frame_name(i, "pfm");
    if (!fs::exists(p)) continue;
    auto map = load_pfm(p);
    if (map.width != ds.camera.width() || map.height != ds.camera.height()) {
      throw_error(ErrorCode::kInvalidArgument, p.string() + " does not match the intrinsics");
    }
    ds.depth[i] = std::move(map.values);
  }
  return ds;
}

void write_dataset(const fs::path& dir, const SyntheticScene& scene) {
  std::error_code ec;
  fs::create_directories(dir / "images", ec);
  fs::create_directories(dir / "depth", ec);
  if (ec) throw_error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  write_intrinsics(dir / "intrinsics.txt", scene.camera);
  std::vector<odometry::StampedPose> poses;
  for (std::size_t i = 0; i < scene.views.size(); ++i) {
    const auto& v = scene.views[i];
    save_png(dir / "images" / frame_name(static_cast<int>(i), "png"), v.color);
    FloatMap depth{v.color.width(), v.color.height(), std::vector<float>(v.depth.begin(), v.depth.end())};
    save_pfm(dir / "depth" / frame_name(static_cast<int>(i), "pfm"), depth);
    poses.push_back({static_cast<double>(i), v.pose});
  }
  odometry::write_tum(dir / "groundtruth.txt", poses);
}

Dataset dataset_from_scene(const SyntheticScene& scene) {
  Dataset ds;
  ds.camera = scene.camera;
  std::vector<Se3Pose> poses;
  for (std::size_t i = 0; i < scene.views.size(); ++i) {
    const auto& v = scene.views[i];
    ds.color.push_back(v.color);
    ds.gray.push_back(to_grayscale(v.color));
    poses.push_back(v.pose);
    ds.depth[static_cast<int>(i)] = std::vector<float>(v.depth.begin(), v.depth.end());
  }
  ds.trajectory = std::move(poses);
  return ds;
}

}  // namespace photosplat::harness
