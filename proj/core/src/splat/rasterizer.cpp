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

#include "photosplat/splat/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "photosplat/core/error.hpp"
#include "photosplat/core/parallel.hpp"

namespace photosplat::splat {
namespace {

struct Box {
  int x0, y0, x1, y1;  // inclusive pixel range
};

// Pixels where opacity * exp(-q/2) >= 1/255 satisfy q <= 2 ln(255 opacity);
// the ellipse's bounding box follows from the covariance diagonal.
template <typename T>
std::optional<Box> footprint(const ProjectedGaussian<T>& p, int width, int height) {
  const double o = static_cast<double>(p.opacity);
  if (!(o * 255.0 >= 1.0)) return std::nullopt;
  const double q = 2.0 * std::log(255.0 * o);
  const double rx = std::sqrt(static_cast<double>(p.cov2d(0, 0)) * q);
  const double ry = std::sqrt(static_cast<double>(p.cov2d(1, 1)) * q);
  const double u = static_cast<double>(p.mean2d.x()), v = static_cast<double>(p.mean2d.y());
  Box b{static_cast<int>(std::ceil(u - rx)), static_cast<int>(std::ceil(v - ry)),
        static_cast<int>(std::floor(u + rx)), static_cast<int>(std::floor(v + ry))};
  b.x0 = std::max(b.x0, 0);
  b.y0 = std::max(b.y0, 0);
  b.x1 = std::min(b.x1, width - 1);
  b.y1 = std::min(b.y1, height - 1);
  if (b.x0 > b.x1 || b.y0 > b.y1) return std::nullopt;
  return b;
}

template <typename T>
struct Alpha {
  T alpha;
  T gauss;
  T dx, dy;
  bool clamped;
};

template <typename T>
std::optional<Alpha<T>> alpha_at(const ProjectedGaussian<T>& p, int x, int y) {
  const T dx = T(x) - p.mean2d.x();
  const T dy = T(y) - p.mean2d.y();
  const T power = T(-0.5) * (p.conic[0] * dx * dx + T(2) * p.conic[1] * dx * dy + p.conic[2] * dy * dy);
  if (power > T(0) || power < p.min_power) return std::nullopt;
  const T gauss = std::exp(power);
  T alpha = p.opacity * gauss;
  const bool clamped = alpha > T(kMaxAlpha);
  if (clamped) alpha = T(kMaxAlpha);
  if (alpha < T(kMinAlpha)) return std::nullopt;
  return Alpha<T>{alpha, gauss, dx, dy, clamped};
}

template <typename T>
struct TileRange {
  int x0, y0, x1, y1;
};

template <typename T>
TileRange<T> tile_pixels(int tile, int tiles_x, int width, int height) {
  const int tx = tile % tiles_x, ty = tile / tiles_x;
  return {tx * kTileSize, ty * kTileSize, std::min((tx + 1) * kTileSize, width) - 1,
          std::min((ty + 1) * kTileSize, height) - 1};
}

}  // namespace

template <typename T>
ColorImage RenderResult<T>::image() const {
  ColorImage out(width, height);
  for (std::size_t i = 0; i < color.size(); ++i) out.data()[i] = static_cast<double>(color[i]);
  return out;
}

template <typename T>
RenderResult<T> render(const SplatScene& scene, const PinholeCamera& camera,
                       const Se3Pose& view_pose, int workers) {
  RenderResult<T> r;
  r.width = camera.width();
  r.height = camera.height();
  const std::size_t pixels = static_cast<std::size_t>(r.width) * r.height;
  r.color.assign(3 * pixels, T(0));
  r.transmittance.assign(pixels, T(1));
  r.tiles_x = (r.width + kTileSize - 1) / kTileSize;
  r.tiles_y = (r.height + kTileSize - 1) / kTileSize;
  r.tiles.assign(static_cast<std::size_t>(r.tiles_x) * r.tiles_y, {});

  std::vector<Box> boxes;
  for (std::size_t i = 0; i < scene.gaussians.size(); ++i) {
    auto p = project_gaussian<T>(scene.gaussians[i], camera, view_pose);
    if (!p) continue;
    auto box = footprint(*p, r.width, r.height);
    if (!box) continue;
    r.projected.push_back(*p);
    r.source.push_back(static_cast<int>(i));
    boxes.push_back(*box);
  }
  std::vector<int> order(r.projected.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return r.projected[a].depth < r.projected[b].depth; });
  for (int idx : order) {
    const Box& b = boxes[idx];
    for (int ty = b.y0 / kTileSize; ty <= b.y1 / kTileSize; ++ty) {
      for (int tx = b.x0 / kTileSize; tx <= b.x1 / kTileSize; ++tx) {
        r.tiles[static_cast<std::size_t>(ty) * r.tiles_x + tx].push_back(idx);
      }
    }
  }

  const Eigen::Matrix<T, 3, 1> bg = scene.background.cast<T>();
  parallel_for(r.tiles.size(), workers, [&](std::size_t tile) {
    const auto range = tile_pixels<T>(static_cast<int>(tile), r.tiles_x, r.width, r.height);
    const auto& list = r.tiles[tile];
    for (int y = range.y0; y <= range.y1; ++y) {
      for (int x = range.x0; x <= range.x1; ++x) {
        Eigen::Matrix<T, 3, 1> c = Eigen::Matrix<T, 3, 1>::Zero();
        T trans = T(1);
        for (int idx : list) {
          const auto& p = r.projected[idx];
          const auto a = alpha_at(p, x, y);
          if (!a) continue;
          c += p.color * (a->alpha * trans);
          trans *= T(1) - a->alpha;
          if (trans < T(kMinTransmittance)) break;
        }
        c += bg * trans;
        const std::size_t px = static_cast<std::size_t>(y) * r.width + x;
        for (int k = 0; k < 3; ++k) r.color[3 * px + k] = c[k];
        r.transmittance[px] = trans;
      }
    }
  });
  return r;
}

template <typename T>
RenderGradients render_backward(const SplatScene& scene, const PinholeCamera& camera,
                                const Se3Pose& view_pose, const RenderResult<T>& fwd,
                                std::span<const T> upstream, int workers) {
  if (upstream.size() != fwd.color.size()) {
    throw_error(ErrorCode::kInvalidArgument, "upstream gradient size does not match the render");
  }
  const std::size_t n = scene.gaussians.size();
  RenderGradients out;
  out.gaussians.assign(n, GaussianGradient{});
  out.mean2d_norm.assign(n, 0.0);
  out.visible.assign(n, 0);

  // Per-tile partial sums, aligned with the tile lists and merged in tile
  // order afterwards so the result does not depend on the worker count.
  struct Partial {
    Eigen::Matrix<T, 2, 1> mean = Eigen::Matrix<T, 2, 1>::Zero();
    Eigen::Matrix<T, 3, 1> conic = Eigen::Matrix<T, 3, 1>::Zero();
    Eigen::Matrix<T, 3, 1> color = Eigen::Matrix<T, 3, 1>::Zero();
    T opacity = T(0);
  };
  std::vector<std::vector<Partial>> partials(fwd.tiles.size());
  const Eigen::Matrix<T, 3, 1> bg = scene.background.cast<T>();

  parallel_for(fwd.tiles.size(), workers, [&](std::size_t tile) {
    const auto& list = fwd.tiles[tile];
    auto& acc = partials[tile];
    acc.assign(list.size(), Partial{});
    if (list.empty()) return;
    const auto range = tile_pixels<T>(static_cast<int>(tile), fwd.tiles_x, fwd.width, fwd.height);
    struct Hit {
      std::size_t slot;
      Alpha<T> a;
      T trans;  // before this Gaussian
    };
    std::vector<Hit> hits;
    for (int y = range.y0; y <= range.y1; ++y) {
      for (int x = range.x0; x <= range.x1; ++x) {
        const std::size_t px = static_cast<std::size_t>(y) * fwd.width + x;
        const Eigen::Matrix<T, 3, 1> up(upstream[3 * px], upstream[3 * px + 1], upstream[3 * px + 2]);
        if (up.isZero()) continue;
        hits.clear();
        T trans = T(1);
        for (std::size_t s = 0; s < list.size(); ++s) {
          const auto a = alpha_at(fwd.projected[list[s]], x, y);
          if (!a) continue;
          hits.push_back({s, *a, trans});
          trans *= T(1) - a->alpha;
          if (trans < T(kMinTransmittance)) break;
        }
        // Color blended behind the current Gaussian, background included.
        Eigen::Matrix<T, 3, 1> behind = bg * trans;
        for (auto it = hits.rbegin(); it != hits.rend(); ++it) {
          const auto& p = fwd.projected[list[it->slot]];
          Partial& g = acc[it->slot];
          const T w = it->a.alpha * it->trans;
          g.color += up * w;
          const T d_alpha = (up.dot(p.color) * it->trans) - up.dot(behind) / (T(1) - it->a.alpha);
          behind += p.color * w;
          if (it->a.clamped) continue;
          g.opacity += d_alpha * it->a.gauss;
          const T d_power = d_alpha * it->a.alpha;
          const T dx = it->a.dx, dy = it->a.dy;
          // power = -(a dx^2 + 2 b dx dy + c dy^2) / 2, dx = x - mean_x
          g.mean.x() += d_power * (p.conic[0] * dx + p.conic[1] * dy);
          g.mean.y() += d_power * (p.conic[1] * dx + p.conic[2] * dy);
          g.conic[0] += d_power * T(-0.5) * dx * dx;
          g.conic[1] += d_power * -dx * dy;
          g.conic[2] += d_power * T(-0.5) * dy * dy;
        }
      }
    }
  });

  const std::size_t m = fwd.projected.size();
  std::vector<Partial> total(m);
  for (std::size_t tile = 0; tile < fwd.tiles.size(); ++tile) {
    const auto& list = fwd.tiles[tile];
    for (std::size_t s = 0; s < list.size(); ++s) {
      Partial& t = total[list[s]];
      const Partial& p = partials[tile][s];
      t.mean += p.mean;
      t.conic += p.conic;
      t.color += p.color;
      t.opacity += p.opacity;
    }
  }
  const double half_w = 0.5 * fwd.width, half_h = 0.5 * fwd.height;
  for (std::size_t k = 0; k < m; ++k) {
    const int i = fwd.source[k];
    const Gaussian3d& g = scene.gaussians[i];
    GaussianGradient& gg = out.gaussians[i];
    out.visible[i] = 1;
    gg.color += total[k].color.template cast<double>();
    const double o = g.opacity();
    gg.opacity_logit += static_cast<double>(total[k].opacity) * o * (1.0 - o);
    project_gaussian_backward<T>(g, camera, view_pose, total[k].mean, total[k].conic, gg);
    out.mean2d_norm[i] = std::hypot(static_cast<double>(total[k].mean.x()) * half_w,
                                    static_cast<double>(total[k].mean.y()) * half_h);
  }
  return out;
}

template struct RenderResult<float>;
template struct RenderResult<double>;
template RenderResult<float> render<float>(const SplatScene&, const PinholeCamera&, const Se3Pose&, int);
template RenderResult<double> render<double>(const SplatScene&, const PinholeCamera&, const Se3Pose&, int);
template RenderGradients render_backward<float>(const SplatScene&, const PinholeCamera&,
                                                const Se3Pose&, const RenderResult<float>&,
                                                std::span<const float>, int);
template RenderGradients render_backward<double>(const SplatScene&, const PinholeCamera&,
                                                 const Se3Pose&, const RenderResult<double>&,
                                                 std::span<const double>, int);

}  // namespace photosplat::splat
