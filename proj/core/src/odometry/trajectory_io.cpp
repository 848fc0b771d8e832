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

#include "photosplat/odometry/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "photosplat/core/error.hpp"

namespace photosplat::odometry {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

}  // namespace

void write_tum(const fs::path& path, std::span<const StampedPose> poses) {
  auto out = open_out(path);
  char buf[256];
  for (const auto& p : poses) {
    const Vec3& t = p.pose.translation();
    const Quat& q = p.pose.rotation();
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n", p.timestamp,
                  t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
    out << buf;
  }
  if (!out) throw_error(ErrorCode::kIo, "write failed for " + path.string());
}

std::vector<StampedPose> read_tum(const fs::path& path) {
  auto in = open_in(path);
  std::vector<StampedPose> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    double v[8];
    for (double& x : v) {
      if (!(ss >> x) || !std::isfinite(x)) {
        throw_error(ErrorCode::kIo, path.string() + ":" + std::to_string(line_no) +
                                        ": expected 8 numbers");
      }
    }
    try {
      poses.push_back({v[0], Se3Pose(Quat(v[7], v[4], v[5], v[6]), Vec3(v[1], v[2], v[3]))});
    } catch (const Error&) {
      throw_error(ErrorCode::kIo,
                  path.string() + ":" + std::to_string(line_no) + ": invalid quaternion");
    }
  }
  return poses;
}

std::map<int, double> read_exposures(const fs::path& path) {
  auto in = open_in(path);
  std::map<int, double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream ss(line);
    int index = 0;
    double exposure = 0.0;
    if (!(ss >> index >> exposure) || !(exposure > 0.0) || !std::isfinite(exposure)) {
      throw_error(ErrorCode::kIo, path.string() + ":" + std::to_string(line_no) +
                                      ": expected `frame_index exposure` with exposure > 0");
    }
    out[index] = exposure;
  }
  return out;
}

void write_exposures(const fs::path& path, const std::map<int, double>& exposures) {
  auto out = open_out(path);
  char buf[64];
  for (const auto& [index, exposure] : exposures) {
    std::snprintf(buf, sizeof(buf), "%d %.9g\n", index, exposure);
    out << buf;
  }
}

}  // namespace photosplat::odometry
