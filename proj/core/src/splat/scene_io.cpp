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

#include "photosplat/splat/scene_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "photosplat/core/error.hpp"

namespace photosplat::splat {
namespace {

constexpr double kSh0 = 0.28209479177387814;

constexpr std::array<const char*, 17> kNames{
    "x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2", "opacity",
    "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"};

[[noreturn]] void io_error(const std::filesystem::path& path, const std::string& what) {
  throw_error(ErrorCode::kIo, path.string() + ": " + what);
}

std::array<double, 17> to_row(const Gaussian3d& g) {
  return {g.position.x(), g.position.y(), g.position.z(), 0.0, 0.0, 0.0,
          (g.color.x() - 0.5) / kSh0, (g.color.y() - 0.5) / kSh0, (g.color.z() - 0.5) / kSh0,
          g.opacity_logit, g.log_scale.x(), g.log_scale.y(), g.log_scale.z(),
          g.rotation[0], g.rotation[1], g.rotation[2], g.rotation[3]};
}

}  // namespace

void write_scene_ply(const std::filesystem::path& path, const SplatScene& scene) {
  static_assert(std::endian::native == std::endian::little, "PLY writer assumes little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  char bg[128];
  std::snprintf(bg, sizeof bg, "%.9g %.9g %.9g", scene.background.x(), scene.background.y(),
                scene.background.z());
  out << "ply\nformat binary_little_endian 1.0\ncomment background " << bg << "\nelement vertex "
      << scene.gaussians.size() << "\n";
  for (const char* n : kNames) out << "property float " << n << "\n";
  out << "end_header\n";
  for (const auto& g : scene.gaussians) {
    for (double v : to_row(g)) {
      const float f = static_cast<float>(v);
      out.write(reinterpret_cast<const char*>(&f), sizeof f);
    }
  }
  if (!out) io_error(path, "write failed");
}

SplatScene read_scene_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != "ply") io_error(path, "not a PLY file");
  bool binary = false;
  std::size_t count = 0;
  bool in_vertex = false;
  std::vector<std::pair<std::string, bool>> props;  // name, is_double
  SplatScene scene;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt == "binary_little_endian") {
        binary = true;
      } else if (fmt != "ascii") {
        io_error(path, "unsupported format " + fmt);
      }
    } else if (word == "comment") {
      std::string key;
      ss >> key;
      if (key == "background") ss >> scene.background.x() >> scene.background.y() >> scene.background.z();
    } else if (word == "element") {
      std::string name;
      ss >> name;
      in_vertex = name == "vertex";
      if (in_vertex) ss >> count;
    } else if (word == "property" && in_vertex) {
      std::string type, name;
      ss >> type >> name;
      if (type == "float" || type == "float32") {
        props.emplace_back(name, false);
      } else if (type == "double" || type == "float64") {
        props.emplace_back(name, true);
      } else {
        io_error(path, "unsupported property type " + type);
      }
    } else if (word == "end_header") {
      break;
    }
  }
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < props.size(); ++i) column[props[i].first] = i;
  for (const char* n : kNames) {
    if (std::string(n).rfind('n', 0) == 0 && std::strlen(n) == 2) continue;  // normals optional
    if (!column.count(n)) io_error(path, std::string("missing property ") + n);
  }

  std::vector<double> row(props.size());
  scene.gaussians.reserve(count);
  for (std::size_t v = 0; v < count; ++v) {
    for (std::size_t p = 0; p < props.size(); ++p) {
      if (!binary) {
        if (!(in >> row[p])) io_error(path, "truncated vertex " + std::to_string(v));
      } else if (props[p].second) {
        double d;
        if (!in.read(reinterpret_cast<char*>(&d), sizeof d)) io_error(path, "truncated vertex " + std::to_string(v));
        row[p] = d;
      } else {
        float f;
        if (!in.read(reinterpret_cast<char*>(&f), sizeof f)) io_error(path, "truncated vertex " + std::to_string(v));
        row[p] = f;
      }
    }
    auto at = [&](const char* n) { return row[column.at(n)]; };
    Gaussian3d g;
    g.position = {at("x"), at("y"), at("z")};
    g.color = {0.5 + kSh0 * at("f_dc_0"), 0.5 + kSh0 * at("f_dc_1"), 0.5 + kSh0 * at("f_dc_2")};
    g.opacity_logit = at("opacity");
    g.log_scale = {at("scale_0"), at("scale_1"), at("scale_2")};
    g.rotation = {at("rot_0"), at("rot_1"), at("rot_2"), at("rot_3")};
    scene.gaussians.push_back(g);
  }
  return scene;
}

}  // namespace photosplat::splat
