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

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "photosplat/core/camera.hpp"
#include "photosplat/core/image.hpp"

namespace photosplat::harness {

struct SyntheticConfig {
  std::uint64_t seed = 0;
  int width = 128;
  int height = 128;
  int frames = 20;
  double horizontal_fov_deg = 60.0;
  Vec3 room_size{4.0, 2.5, 3.0};  // x (width), y (height, down), z (depth)
  int texture_octaves = 4;
  double texture_frequency = 2.0;  // cycles per meter at the first octave
  double tile_size = 0.5;          // meters; flat tiles are whole tiles
  double edge_softness = 0.05;     // meters; ramp from flat to textured
  // Flat band along every face border in one shared color, like a painted
  // trim. Two surfaces meeting at a crease otherwise blend in proportions
  // that change with the viewpoint, which biases photometric tracking.
  double trim_width = 0.1;
  double textureless_fraction = 0.3;
  double orbit_radius = 0.5;   // meters around the room center
  double step_length = 0.05;   // meters per frame along the orbit
  double yaw_rate = 0.03;      // radians per frame
  double pitch = 0.25;         // radians, camera tilted toward the floor
  double camera_height = 0.0;  // y offset from the room center
  int supersample = 8;         // per axis, color only
  // Width of the box each pixel integrates over, in pixels. Values above 1
  // mimic lens blur and keep textures below the sampling limit.
  double pixel_footprint = 2.0;

  // Throws kInvalidArgument.
  void validate() const;
};

enum class RoomFace : int { kLeft = 0, kRight = 1, kBack = 2, kFront = 3, kFloor = 4 };

struct RayHit {
  double distance = 0.0;  // along the (unnormalized) ray direction
  RoomFace face = RoomFace::kFloor;
  Vec3 point = Vec3::Zero();
};

struct SyntheticView {
  ColorImage color;
  std::vector<double> depth;  // z-depth, row-major
  Se3Pose pose;               // camera-to-world
};

// Procedural room: cuboid with four walls and a floor, per-face value-noise
// textures and a seeded set of flat tiles. Rendering is a ray-caster and shares
// no code with the splatting renderer.
class SyntheticRoom {
 public:
  explicit SyntheticRoom(const SyntheticConfig& config);

  const SyntheticConfig& config() const { return config_; }
  const PinholeCamera& camera() const { return camera_; }

  Se3Pose orbit_pose(double t) const;
  // Nearest face along origin + s * direction, s > 0. Throws kInvalidState if
  // the ray leaves through the open ceiling.
  RayHit cast(const Vec3& origin, const Vec3& direction) const;
  Eigen::Vector3d albedo(RoomFace face, const Vec3& point) const;
  // True where the albedo is exactly constant.
  bool is_flat(RoomFace face, const Vec3& point) const;
  double flat_weight(RoomFace face, const Vec3& point) const;
  double tile_weight(RoomFace face, const Vec3& point) const;
  double trim_weight(RoomFace face, const Vec3& point) const;
  SyntheticView render(const Se3Pose& pose) const;

 private:
  Vec2 face_coords(RoomFace face, const Vec3& point) const;
  double noise(int face, const Vec2& uv) const;

  SyntheticConfig config_;
  PinholeCamera camera_;
  std::array<Eigen::Vector3d, 5> color_a_;
  std::array<Eigen::Vector3d, 5> color_b_;
  Eigen::Vector3d trim_color_ = Eigen::Vector3d::Zero();  // mean face midpoint
  std::array<std::vector<bool>, 5> flat_tiles_;
  std::array<int, 5> tiles_u_{};
  std::array<int, 5> tiles_v_{};
};

struct SyntheticScene {
  SyntheticConfig config;
  PinholeCamera camera;
  std::vector<SyntheticView> views;
};

// Views are quantized to 8 bits so a written dataset loads back exactly.
SyntheticScene generate_synthetic_scene(const SyntheticConfig& config);

// Rounds every channel to the nearest multiple of 1/255.
void quantize_8bit(ColorImage& image);

}  // namespace photosplat::harness
