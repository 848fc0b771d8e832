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

#include "photosplat/core/image.hpp"
#include "photosplat/odometry/frame.hpp"

namespace photosplat::selection {

struct SelectionConfig {
  int target_tracking_count = 800;
  int extra_cell_size = 8;       // pixels
  double gradient_floor = 0.004;  // intensity per pixel
  int fill_neighbor_count = 5;    // k
  int block_size = 32;            // pixels, adaptive-threshold blocks
  double threshold_offset = 0.01;  // added to each block's median gradient
  int min_candidates = 50;

  // Throws kInvalidArgument when a field is out of range.
  void validate() const;
};

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct SelectionResult {
  std::vector<Pixel> tracking;
  std::vector<Pixel> extra;
  std::vector<odometry::TrackedPoint> fill;
  // Row-major over extra_cell_size cells: true when a tracking or extra pixel
  // lies in the cell.
  std::vector<bool> occupancy;
  int cells_x = 0;
  int cells_y = 0;
};

// High-gradient pixels. Each block_size block gets threshold = median
// gradient + threshold_offset; candidates also need gradient >= floor and a
// 2-pixel border margin. The strongest candidate per cell of an adaptive
// (real-valued) cell size is kept, with the cell size bisected so the count
// lands near target_tracking_count. Throws kInsufficientTexture with fewer than
// min_candidates candidates.
std::vector<Pixel> select_tracking_pixels(const IntensityImage& image,
                                          const SelectionConfig& config);

// One pixel per extra_cell_size cell that holds no tracking pixel: the cell's
// highest-gradient pixel, if its gradient reaches gradient_floor.
std::vector<Pixel> select_extra_pixels(const IntensityImage& image,
                                       std::span<const Pixel> tracking,
                                       const SelectionConfig& config);

// For every cell whose max gradient is below gradient_floor, one point at the
// cell center with inverse depth equal to the mean over the k nearest
// (pixel distance, ties by list order) non-fill points of `cloud`.
// Color is sampled from `color` at the center. Throws kInvalidArgument when
// `cloud` has no non-fill point.
std::vector<odometry::TrackedPoint> fill_gradientless_regions(
    std::span<const odometry::TrackedPoint> cloud, const IntensityImage& image,
    const ColorImage& color, int host_frame, const SelectionConfig& config);

// Grid cells (extra_cell_size) with their row-major index, for callers and tests.
struct CellGrid {
  int cell_size;
  int cells_x;
  int cells_y;

  int index_of(int x, int y) const { return (y / cell_size) * cells_x + (x / cell_size); }
};

CellGrid make_cell_grid(const IntensityImage& image, int cell_size);

// tracking + extra, with the occupancy grid. Fill points need depths, so they
// are added later by the caller.
SelectionResult select_pixels(const IntensityImage& image, const SelectionConfig& config,
                              bool dense);

}  // namespace photosplat::selection
