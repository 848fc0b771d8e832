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

#include "photosplat/selection/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "photosplat/core/error.hpp"

namespace photosplat::selection {
namespace {

constexpr int kTrackingBorder = 2;

struct Candidate {
  int x;
  int y;
  double grad;
};

// Keeps the strongest candidate per cell of a real-valued cell size. Candidates
// arrive in row-major order; ties keep the first one.
std::vector<Pixel> strongest_per_cell(std::span<const Candidate> candidates, double cell,
                                      int width) {
  if (cell <= 1.0) {
    std::vector<Pixel> all;
    all.reserve(candidates.size());
    for (const auto& c : candidates) all.push_back({c.x, c.y});
    return all;
  }
  const long long cells_x = static_cast<long long>(std::floor((width - 1) / cell)) + 1;
  std::unordered_map<long long, std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const long long key = static_cast<long long>(std::floor(c.y / cell)) * cells_x +
                          static_cast<long long>(std::floor(c.x / cell));
    auto [it, inserted] = best.try_emplace(key, i);
    if (!inserted && c.grad > candidates[it->second].grad) {
      it->second = i;
    }
  }
  std::vector<std::size_t> chosen;
  chosen.reserve(best.size());
  for (const auto& [key, idx] : best) chosen.push_back(idx);
  std::sort(chosen.begin(), chosen.end());
  std::vector<Pixel> out;
  out.reserve(chosen.size());
  for (std::size_t idx : chosen) out.push_back({candidates[idx].x, candidates[idx].y});
  return out;
}

double median(std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

}  // namespace

void SelectionConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw_error(ErrorCode::kInvalidArgument, "selection config: " + what);
  };
  if (target_tracking_count <= 0) fail("target_tracking_count must be positive");
  if (extra_cell_size < 2) fail("extra_cell_size must be >= 2");
  if (fill_neighbor_count < 1) fail("fill_neighbor_count must be >= 1");
  if (block_size <= 0) fail("block_size must be positive");
  if (!(gradient_floor >= 0.0)) fail("gradient_floor must be non-negative");
  if (!(threshold_offset >= 0.0)) fail("threshold_offset must be non-negative");
  if (min_candidates < 1) fail("min_candidates must be positive");
}

CellGrid make_cell_grid(const IntensityImage& image, int cell_size) {
  return {cell_size, (image.width() + cell_size - 1) / cell_size,
          (image.height() + cell_size - 1) / cell_size};
}

std::vector<Pixel> select_tracking_pixels(const IntensityImage& image,
                                          const SelectionConfig& config) {
  config.validate();
  const int w = image.width();
  const int h = image.height();
  if (w < 2 * config.block_size || h < 2 * config.block_size) {
    throw_error(ErrorCode::kInvalidArgument,
                "image " + std::to_string(w) + "x" + std::to_string(h) +
                    " is smaller than two selection blocks of " +
                    std::to_string(config.block_size));
  }
  const std::vector<double> grad = gradient_magnitude_map(image);
  const int bs = config.block_size;
  const int blocks_x = (w + bs - 1) / bs;
  const int blocks_y = (h + bs - 1) / bs;
  std::vector<double> thresholds(static_cast<std::size_t>(blocks_x) * blocks_y);
  std::vector<double> scratch;
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      scratch.clear();
      for (int y = std::max(by * bs, 1); y < std::min((by + 1) * bs, h - 1); ++y) {
        for (int x = std::max(bx * bs, 1); x < std::min((bx + 1) * bs, w - 1); ++x) {
          scratch.push_back(grad[static_cast<std::size_t>(y) * w + x]);
        }
      }
      thresholds[static_cast<std::size_t>(by) * blocks_x + bx] =
          median(scratch) + config.threshold_offset;
    }
  }

  std::vector<Candidate> candidates;
  for (int y = kTrackingBorder; y < h - kTrackingBorder; ++y) {
    for (int x = kTrackingBorder; x < w - kTrackingBorder; ++x) {
      const double g = grad[static_cast<std::size_t>(y) * w + x];
      const double t = thresholds[static_cast<std::size_t>(y / bs) * blocks_x + x / bs];
      if (g >= t && g >= config.gradient_floor && g > 0.0) candidates.push_back({x, y, g});
    }
  }
  if (static_cast<int>(candidates.size()) < config.min_candidates) {
    throw_error(ErrorCode::kInsufficientTexture,
                std::to_string(candidates.size()) + " gradient candidates, need " +
                    std::to_string(config.min_candidates));
  }

  const int target = config.target_tracking_count;
  if (static_cast<int>(candidates.size()) <= target) {
    return strongest_per_cell(candidates, 1.0, w);
  }
  // Bisect the cell size in log space; count falls as cells grow.
  double lo = 0.0;  // log(1)
  double hi = std::log(static_cast<double>(std::max(w, h)));
  std::vector<Pixel> best;
  double best_error = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 10; ++step) {
    const double mid = 0.5 * (lo + hi);
    std::vector<Pixel> picked = strongest_per_cell(candidates, std::exp(mid), w);
    const int n = static_cast<int>(picked.size());
    const double error = std::abs(n - target);
    if (error < best_error) {
      best_error = error;
      best = std::move(picked);
    }
    if (n > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

std::vector<Pixel> select_extra_pixels(const IntensityImage& image,
                                       std::span<const Pixel> tracking,
                                       const SelectionConfig& config) {
  config.validate();
  const CellGrid grid = make_cell_grid(image, config.extra_cell_size);
  const int w = image.width();
  const int h = image.height();
  std::vector<bool> covered(static_cast<std::size_t>(grid.cells_x) * grid.cells_y, false);
  for (const auto& p : tracking) {
    if (p.x >= 0 && p.y >= 0 && p.x < w && p.y < h) covered[grid.index_of(p.x, p.y)] = true;
  }
  const std::vector<double> grad = gradient_magnitude_map(image);
  std::vector<Pixel> out;
  const int cs = config.extra_cell_size;
  for (int cy = 0; cy < grid.cells_y; ++cy) {
    for (int cx = 0; cx < grid.cells_x; ++cx) {
      if (covered[static_cast<std::size_t>(cy) * grid.cells_x + cx]) continue;
      double best = -1.0;
      Pixel best_px;
      for (int y = std::max(cy * cs, 1); y < std::min((cy + 1) * cs, h - 1); ++y) {
        for (int x = std::max(cx * cs, 1); x < std::min((cx + 1) * cs, w - 1); ++x) {
          const double g = grad[static_cast<std::size_t>(y) * w + x];
          if (g > best) {
            best = g;
            best_px = {x, y};
          }
        }
      }
      if (best >= config.gradient_floor && best > 0.0) out.push_back(best_px);
    }
  }
  return out;
}

std::vector<odometry::TrackedPoint> fill_gradientless_regions(
    std::span<const odometry::TrackedPoint> cloud, const IntensityImage& image,
    const ColorImage& color, int host_frame, const SelectionConfig& config) {
  config.validate();
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud[i].status != odometry::PointStatus::kGradientFill) sources.push_back(i);
  }
  if (sources.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "gradient fill needs at least one tracked point");
  }
  for (std::size_t i : sources) {
    if (!(cloud[i].inverse_depth > 0.0)) {
      throw_error(ErrorCode::kInvalidArgument, "gradient fill source has invalid inverse depth");
    }
  }

  const int w = image.width();
  const int h = image.height();
  const int cs = config.extra_cell_size;
  const CellGrid grid = make_cell_grid(image, cs);
  const std::vector<double> grad = gradient_magnitude_map(image);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.fill_neighbor_count),
                                              sources.size());

  struct Near {
    double d2;
    std::size_t order;  // position in `sources`
  };
  std::vector<Near> nearest(sources.size());
  std::vector<odometry::TrackedPoint> out;
  for (int cy = 0; cy < grid.cells_y; ++cy) {
    for (int cx = 0; cx < grid.cells_x; ++cx) {
      const int x0 = cx * cs;
      const int y0 = cy * cs;
      const int x1 = std::min(x0 + cs, w);
      const int y1 = std::min(y0 + cs, h);
      double max_grad = -1.0;
      for (int y = std::max(y0, 1); y < std::min(y1, h - 1); ++y) {
        for (int x = std::max(x0, 1); x < std::min(x1, w - 1); ++x) {
          max_grad = std::max(max_grad, grad[static_cast<std::size_t>(y) * w + x]);
        }
      }
      // Cells without an interior pixel have no measurable gradient.
      if (max_grad < 0.0 || max_grad >= config.gradient_floor) continue;

      const double u = 0.5 * (x0 + x1 - 1);
      const double v = 0.5 * (y0 + y1 - 1);
      for (std::size_t s = 0; s < sources.size(); ++s) {
        const auto& p = cloud[sources[s]];
        const double du = p.u - u;
        const double dv = p.v - v;
        nearest[s] = {du * du + dv * dv, s};
      }
      std::partial_sort(nearest.begin(), nearest.begin() + static_cast<std::ptrdiff_t>(k),
                        nearest.end(), [](const Near& a, const Near& b) {
                          return a.d2 < b.d2 || (a.d2 == b.d2 && a.order < b.order);
                        });
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += cloud[sources[nearest[i].order]].inverse_depth;

      odometry::TrackedPoint fp;
      fp.host_frame = host_frame;
      fp.u = u;
      fp.v = v;
      fp.inverse_depth = sum / static_cast<double>(k);
      fp.status = odometry::PointStatus::kGradientFill;
      fp.color = bilinear_sample(color, u, v);
      out.push_back(fp);
    }
  }
  return out;
}

SelectionResult select_pixels(const IntensityImage& image, const SelectionConfig& config,
                              bool dense) {
  SelectionResult r;
  r.tracking = select_tracking_pixels(image, config);
  if (dense) r.extra = select_extra_pixels(image, r.tracking, config);
  const CellGrid grid = make_cell_grid(image, config.extra_cell_size);
  r.cells_x = grid.cells_x;
  r.cells_y = grid.cells_y;
  r.occupancy.assign(static_cast<std::size_t>(grid.cells_x) * grid.cells_y, false);
  for (const auto& p : r.tracking) r.occupancy[grid.index_of(p.x, p.y)] = true;
  for (const auto& p : r.extra) r.occupancy[grid.index_of(p.x, p.y)] = true;
  return r;
}

}  // namespace photosplat::selection
