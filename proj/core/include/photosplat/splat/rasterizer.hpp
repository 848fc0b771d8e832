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

#include <span>
#include <vector>

#include "photosplat/core/camera.hpp"
#include "photosplat/core/image.hpp"
#include "photosplat/splat/gaussian.hpp"
#include "photosplat/splat/projection.hpp"

namespace photosplat::splat {

inline constexpr int kTileSize = 16;
inline constexpr double kMaxAlpha = 0.99;
inline constexpr double kMinAlpha = 1.0 / 255.0;
inline constexpr double kMinTransmittance = 1e-4;

template <typename T>
struct RenderResult {
  int width = 0;
  int height = 0;
  std::vector<T> color;          // interleaved RGB, row-major
  std::vector<T> transmittance;  // final, per pixel

  // Forward state for render_backward.
  std::vector<ProjectedGaussian<T>> projected;  // visible Gaussians
  std::vector<int> source;                      // scene index of each projected entry
  int tiles_x = 0;
  int tiles_y = 0;
  std::vector<std::vector<int>> tiles;  // projected indices, front to back

  ColorImage image() const;
};

struct RenderGradients {
  std::vector<GaussianGradient> gaussians;  // one per scene Gaussian
  // |dL/d mean2d| in normalized device coordinates, for densification.
  std::vector<double> mean2d_norm;
  std::vector<char> visible;
};

// Depth-sorted front-to-back alpha blending over 16x16 tiles. Each Gaussian
// is binned over the box where its alpha can reach 1/255, so the tiling never
// drops a contribution the per-pixel rule would keep.
template <typename T>
RenderResult<T> render(const SplatScene& scene, const PinholeCamera& camera,
                       const Se3Pose& view_pose, int workers = 1);

// `upstream` is d loss / d color, laid out like RenderResult::color.
// Throws kInvalidArgument on a size mismatch.
template <typename T>
RenderGradients render_backward(const SplatScene& scene, const PinholeCamera& camera,
                                const Se3Pose& view_pose, const RenderResult<T>& forward,
                                std::span<const T> upstream, int workers = 1);

}  // namespace photosplat::splat
