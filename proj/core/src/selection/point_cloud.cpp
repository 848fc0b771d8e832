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

#include "photosplat/selection/point_cloud.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "photosplat/core/error.hpp"

namespace photosplat::selection {
namespace fs = std::filesystem;

std::vector<ColoredPoint> export_point_cloud(std::span<const odometry::TrackedPoint> cloud,
                                             const PinholeCamera& camera,
                                             const std::map<int, Se3Pose>& host_poses) {
  std::vector<ColoredPoint> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) {
    auto it = host_poses.find(p.host_frame);
    if (it == host_poses.end()) {
      throw_error(ErrorCode::kInvalidState,
                  "no pose for host frame " + std::to_string(p.host_frame));
    }
    if (!p.depth_valid || !(p.inverse_depth > 0.0)) continue;
    ColoredPoint c;
    c.position = backproject(p.u, p.v, p.inverse_depth, camera, it->second);
    c.color = p.color;
    c.status = p.status;
    out.push_back(c);
  }
  return out;
}

void write_point_cloud_ply(const fs::path& path, std::span<const ColoredPoint> points) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << "ply\nformat ascii 1.0\nelement vertex " << points.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "property uchar status\nend_header\n";
  char line[160];
  for (const auto& p : points) {
    auto byte = [](double c) { return static_cast<int>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); };
    std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %d %d %d %d\n", p.position.x(),
                  p.position.y(), p.position.z(), byte(p.color.x()), byte(p.color.y()),
                  byte(p.color.z()), static_cast<int>(p.status));
    out << line;
  }
  if (!out) throw_error(ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<ColoredPoint> read_point_cloud_ply(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "cannot open " + path.string());
  auto fail = [&](const std::string& what) {
    throw_error(ErrorCode::kIo, path.string() + ": " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "ply") fail("missing 'ply' magic");
  std::size_t count = 0;
  std::vector<std::string> props;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "format") {
      std::string fmt;
      ss >> fmt;
      ascii = fmt == "ascii";
    } else if (word == "element") {
      std::string name;
      ss >> name >> count;
      if (name != "vertex") fail("unexpected element '" + name + "'");
    } else if (word == "property") {
      std::string type, name;
      ss >> type >> name;
      props.push_back(name);
    } else if (word == "end_header") {
      break;
    }
  }
  if (!ascii) fail("only ASCII point clouds are supported");
  auto column = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int ix = column("x"), iy = column("y"), iz = column("z");
  const int ir = column("red"), ig = column("green"), ib = column("blue");
  const int is = column("status");
  if (ix < 0 || iy < 0 || iz < 0) fail("missing x/y/z properties");

  std::vector<ColoredPoint> points;
  points.reserve(count);
  std::vector<double> values(props.size());
  for (std::size_t n = 0; n < count; ++n) {
    if (!std::getline(in, line)) fail("expected " + std::to_string(count) + " vertices");
    std::istringstream ss(line);
    for (auto& v : values) {
      if (!(ss >> v)) fail("malformed vertex line " + std::to_string(n));
    }
    ColoredPoint p;
    p.position = {values[ix], values[iy], values[iz]};
    if (ir >= 0 && ig >= 0 && ib >= 0) {
      p.color = Eigen::Vector3d(values[ir], values[ig], values[ib]) / 255.0;
    }
    if (is >= 0) {
      const int s = static_cast<int>(values[is]);
      if (s < 0 || s > 2) fail("invalid status " + std::to_string(s));
      p.status = static_cast<odometry::PointStatus>(s);
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace photosplat::selection
