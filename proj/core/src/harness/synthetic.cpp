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

#include "photosplat/harness/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "photosplat/core/error.hpp"

namespace photosplat::harness {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0, std::uint64_t d = 0) {
  return splitmix(splitmix(splitmix(splitmix(a) ^ b) ^ c) ^ d);
}

double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

double luma(const Eigen::Vector3d& c) { return 0.299 * c.x() + 0.587 * c.y() + 0.114 * c.z(); }

double quintic(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

enum Salt : std::uint64_t { kColor = 1, kTiles = 2, kNoise = 3, kOrbit = 4 };

// Smoothstep from 0 at d <= 0 to 1 at d >= width; a hard step for width 0.
double smooth_ramp(double d, double width) {
  if (width <= 0.0) return d > 0.0 ? 1.0 : 0.0;
  const double x = std::clamp(d / width, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace

void SyntheticConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw_error(ErrorCode::kInvalidArgument, "synthetic scene: " + what);
  };
  if (width < 64 || height < 64) fail("resolution must be at least 64x64");
  if (frames < 2) fail("frame count must be at least 2");
  if (!(horizontal_fov_deg > 1.0 && horizontal_fov_deg < 150.0)) fail("fov out of range");
  if (!(room_size.minCoeff() > 0.0)) fail("room size must be positive");
  if (texture_octaves < 1 || texture_octaves > 12) fail("texture_octaves must be in [1, 12]");
  if (!(texture_frequency > 0.0)) fail("texture_frequency must be positive");
  if (!(tile_size > 0.0)) fail("tile_size must be positive");
  if (!(textureless_fraction >= 0.0 && textureless_fraction <= 1.0)) {
    fail("textureless fraction must be in [0, 1]");
  }
  if (!(orbit_radius >= 0.0) || !(step_length >= 0.0)) fail("orbit must be non-negative");
  const double margin = 0.1;
  if (orbit_radius + margin >= 0.5 * std::min(room_size.x(), room_size.z()) ||
      std::abs(camera_height) + margin >= 0.5 * room_size.y()) {
    fail("camera path leaves the room");
  }
  if (supersample < 1 || supersample > 16) fail("supersample must be in [1, 16]");
  if (!(edge_softness >= 0.0 && edge_softness < 0.5 * tile_size)) {
    fail("edge_softness must be in [0, tile_size / 2)");
  }
  if (!(trim_width >= 0.0)) fail("trim_width must be non-negative");
  if (!(pixel_footprint > 0.0 && pixel_footprint <= 4.0)) fail("pixel_footprint must be in (0, 4]");
}

SyntheticRoom::SyntheticRoom(const SyntheticConfig& config)
    : config_(config),
      camera_([&] {
        config.validate();
        const double fx =
            0.5 * config.width / std::tan(0.5 * config.horizontal_fov_deg * std::numbers::pi / 180.0);
        return PinholeCamera(fx, fx, 0.5 * (config.width - 1), 0.5 * (config.height - 1),
                             config.width, config.height);
      }()) {
  const std::uint64_t seed = config_.seed;
  for (int f = 0; f < 5; ++f) {
    std::uint64_t counter = 0;
    auto draw = [&] {
      Eigen::Vector3d c;
      for (int k = 0; k < 3; ++k) c[k] = 0.1 + 0.75 * to_unit(hash(seed, kColor, f, counter++));
      return c;
    };
    color_a_[f] = draw();
    color_b_[f] = draw();
    while (std::abs(luma(color_a_[f]) - luma(color_b_[f])) < 0.3) color_b_[f] = draw();
    trim_color_ += 0.2 * (color_a_[f] + color_b_[f]) * 0.5;

    const Vec2 extent = face_coords(static_cast<RoomFace>(f), 0.5 * config_.room_size);
    tiles_u_[f] = std::max(1, static_cast<int>(std::ceil(extent.x() / config_.tile_size - 1e-9)));
    tiles_v_[f] = std::max(1, static_cast<int>(std::ceil(extent.y() / config_.tile_size - 1e-9)));
    const int total = tiles_u_[f] * tiles_v_[f];
    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint64_t> keys(total);
    for (int i = 0; i < total; ++i) keys[i] = hash(seed, kTiles, f, i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    const int flat = static_cast<int>(std::lround(config_.textureless_fraction * total));
    flat_tiles_[f].assign(total, false);
    for (int i = 0; i < flat; ++i) flat_tiles_[f][order[i]] = true;
  }
}

// Face-local coordinates in meters, measured from the face corner.
Vec2 SyntheticRoom::face_coords(RoomFace face, const Vec3& p) const {
  const Vec3 h = 0.5 * config_.room_size;
  switch (face) {
    case RoomFace::kLeft:
    case RoomFace::kRight: return {p.z() + h.z(), p.y() + h.y()};
    case RoomFace::kBack:
    case RoomFace::kFront: return {p.x() + h.x(), p.y() + h.y()};
    case RoomFace::kFloor: return {p.x() + h.x(), p.z() + h.z()};
  }
  return {0.0, 0.0};
}

double SyntheticRoom::noise(int face, const Vec2& uv) const {
  double sum = 0.0;
  double norm = 0.0;
  double amplitude = 1.0;
  double freq = config_.texture_frequency;
  for (int o = 0; o < config_.texture_octaves; ++o) {
    const double x = uv.x() * freq;
    const double y = uv.y() * freq;
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    auto lattice = [&](std::int64_t i, std::int64_t j) {
      return to_unit(hash(config_.seed, kNoise, static_cast<std::uint64_t>(face * 16 + o),
                          (static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint64_t>(j)));
    };
    const double sx = quintic(x - fx);
    const double sy = quintic(y - fy);
    const double top = lattice(ix, iy) + sx * (lattice(ix + 1, iy) - lattice(ix, iy));
    const double bot = lattice(ix, iy + 1) + sx * (lattice(ix + 1, iy + 1) - lattice(ix, iy + 1));
    sum += amplitude * (top + sy * (bot - top));
    norm += amplitude;
    amplitude *= 0.5;
    freq *= 2.0;
  }
  return sum / norm;
}

bool SyntheticRoom::is_flat(RoomFace face, const Vec3& point) const {
  return flat_weight(face, point) == 1.0;
}

// 1 near the face border, 0 at least trim_width + edge_softness inside it.
double SyntheticRoom::trim_weight(RoomFace face, const Vec3& point) const {
  if (!(config_.trim_width > 0.0)) return 0.0;
  const Vec2 uv = face_coords(face, point);
  const Vec2 extent = face_coords(face, 0.5 * config_.room_size);
  const double border = std::min({uv.x(), extent.x() - uv.x(), uv.y(), extent.y() - uv.y()});
  return 1.0 - smooth_ramp(border - config_.trim_width, config_.edge_softness);
}

// 1 inside a flat tile, 0 on textured tiles. Borders shared with a textured
// tile ramp over edge_softness so the renderer does not alias a hard step.
double SyntheticRoom::tile_weight(RoomFace face, const Vec3& point) const {
  const int f = static_cast<int>(face);
  const Vec2 uv = face_coords(face, point);
  const double ts = config_.tile_size;
  const int tu = std::clamp(static_cast<int>(std::floor(uv.x() / ts)), 0, tiles_u_[f] - 1);
  const int tv = std::clamp(static_cast<int>(std::floor(uv.y() / ts)), 0, tiles_v_[f] - 1);
  auto flat = [&](int u, int v) {
    if (u < 0 || v < 0 || u >= tiles_u_[f] || v >= tiles_v_[f]) return true;
    return static_cast<bool>(flat_tiles_[f][static_cast<std::size_t>(v) * tiles_u_[f] + u]);
  };
  if (!flat(tu, tv)) return 0.0;
  const double soft = config_.edge_softness;
  double w = 1.0;
  const double du0 = uv.x() - tu * ts, du1 = (tu + 1) * ts - uv.x();
  const double dv0 = uv.y() - tv * ts, dv1 = (tv + 1) * ts - uv.y();
  if (!flat(tu - 1, tv)) w = std::min(w, smooth_ramp(du0, soft));
  if (!flat(tu + 1, tv)) w = std::min(w, smooth_ramp(du1, soft));
  if (!flat(tu, tv - 1)) w = std::min(w, smooth_ramp(dv0, soft));
  if (!flat(tu, tv + 1)) w = std::min(w, smooth_ramp(dv1, soft));
  return w;
}

double SyntheticRoom::flat_weight(RoomFace face, const Vec3& point) const {
  return std::max(tile_weight(face, point), trim_weight(face, point));
}

Eigen::Vector3d SyntheticRoom::albedo(RoomFace face, const Vec3& point) const {
  const int f = static_cast<int>(face);
  const double w = tile_weight(face, point);
  // Contrast-stretched noise; octave sums concentrate around 0.5.
  double t = 0.5;
  if (w < 1.0) {
    const double n = std::clamp(0.5 + 1.6 * (noise(f, face_coords(face, point)) - 0.5), 0.0, 1.0);
    t = w * 0.5 + (1.0 - w) * n;
  }
  const Eigen::Vector3d surface = color_a_[f] + t * (color_b_[f] - color_a_[f]);
  // One trim color for every face, so creases show no edge at all.
  const double trim = trim_weight(face, point);
  return trim * trim_color_ + (1.0 - trim) * surface;
}

RayHit SyntheticRoom::cast(const Vec3& origin, const Vec3& direction) const {
  const Vec3 h = 0.5 * config_.room_size;
  double best = std::numeric_limits<double>::infinity();
  int best_plane = -1;
  // Planes: 0 x=-h, 1 x=+h, 2 z=-h, 3 z=+h, 4 y=+h (floor), 5 y=-h (ceiling).
  const std::array<std::pair<int, double>, 6> planes{{{0, -h.x()}, {0, h.x()}, {2, -h.z()},
                                                      {2, h.z()}, {1, h.y()}, {1, -h.y()}}};
  for (int i = 0; i < 6; ++i) {
    const auto [axis, offset] = planes[i];
    if (direction[axis] == 0.0) continue;
    const double s = (offset - origin[axis]) / direction[axis];
    if (s > 0.0 && s < best) {
      best = s;
      best_plane = i;
    }
  }
  if (best_plane < 0 || best_plane == 5) {
    throw_error(ErrorCode::kInvalidState, "ray leaves the room through the open ceiling");
  }
  return {best, static_cast<RoomFace>(best_plane), origin + best * direction};
}

Se3Pose SyntheticRoom::orbit_pose(double t) const {
  const double r = config_.orbit_radius;
  const double theta0 = 2.0 * std::numbers::pi * to_unit(hash(config_.seed, kOrbit, 0));
  const double yaw0 = 2.0 * std::numbers::pi * to_unit(hash(config_.seed, kOrbit, 1));
  const double theta = theta0 + (r > 0.0 ? t * config_.step_length / r : 0.0);
  const Vec3 position(r * std::cos(theta), config_.camera_height, r * std::sin(theta));
  const double yaw = yaw0 + config_.yaw_rate * t;
  const Quat q = Quat(Eigen::AngleAxisd(yaw, Vec3::UnitY())) *
                 Quat(Eigen::AngleAxisd(-config_.pitch, Vec3::UnitX()));
  return Se3Pose(q, position);
}

SyntheticView SyntheticRoom::render(const Se3Pose& pose) const {
  const int w = config_.width;
  const int h = config_.height;
  const int ss = config_.supersample;
  const Mat3 R = pose.rotation_matrix();
  const Vec3 o = pose.translation();
  SyntheticView view{ColorImage(w, h), std::vector<double>(static_cast<std::size_t>(w) * h), pose};
  // Box filter over the footprint, sampled on a regular ss x ss grid.
  std::vector<double> offsets(ss);
  for (int i = 0; i < ss; ++i) offsets[i] = ((i + 0.5) / ss - 0.5) * config_.pixel_footprint;
  const double weight = 1.0 / static_cast<double>(ss * ss);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Direction with unit camera-z, so the hit distance is the z-depth.
      view.depth[static_cast<std::size_t>(y) * w + x] = cast(o, R * camera_.ray(x, y)).distance;
      Eigen::Vector3d c = Eigen::Vector3d::Zero();
      for (int sy = 0; sy < ss; ++sy) {
        for (int sx = 0; sx < ss; ++sx) {
          const double u = x + offsets[sx];
          const double v = y + offsets[sy];
          const RayHit hit = cast(o, R * camera_.ray(u, v));
          c += weight * albedo(hit.face, hit.point);
        }
      }
      view.color.set(x, y, c);
    }
  }
  return view;
}

void quantize_8bit(ColorImage& image) {
  for (double& v : image.data()) v = std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
}

SyntheticScene generate_synthetic_scene(const SyntheticConfig& config) {
  const SyntheticRoom room(config);
  SyntheticScene scene{config, room.camera(), {}};
  scene.views.reserve(config.frames);
  for (int i = 0; i < config.frames; ++i) {
    scene.views.push_back(room.render(room.orbit_pose(i)));
    quantize_8bit(scene.views.back().color);
  }
  return scene;
}

}  // namespace photosplat::harness
