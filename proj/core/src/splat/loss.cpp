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

#include "photosplat/splat/loss.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "photosplat/core/error.hpp"

namespace photosplat::splat {
namespace {

constexpr int kRadius = 5;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, 2 * kRadius + 1> window() {
  std::array<double, 2 * kRadius + 1> w{};
  double sum = 0.0;
  for (int i = -kRadius; i <= kRadius; ++i) {
    w[i + kRadius] = std::exp(-0.5 * i * i / (kSigma * kSigma));
    sum += w[i + kRadius];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable "same" convolution with zero padding on one plane. The window is
// symmetric, so this is also its own adjoint.
std::vector<double> blur(const std::vector<double>& in, int width, int height) {
  static const auto w = window();
  std::vector<double> tmp(in.size(), 0.0), out(in.size(), 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int k = -kRadius; k <= kRadius; ++k) {
        const int xx = x + k;
        if (xx >= 0 && xx < width) s += w[k + kRadius] * in[static_cast<std::size_t>(y) * width + xx];
      }
      tmp[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int k = -kRadius; k <= kRadius; ++k) {
        const int yy = y + k;
        if (yy >= 0 && yy < height) s += w[k + kRadius] * tmp[static_cast<std::size_t>(yy) * width + x];
      }
      out[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  return out;
}

std::vector<double> plane(std::span<const double> rgb, int c) {
  std::vector<double> p(rgb.size() / 3);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = rgb[3 * i + c];
  return p;
}

// Mean SSIM of one channel; with `grad`, adds scale * d mean / d x.
double ssim_plane(const std::vector<double>& x, const std::vector<double>& y, int width, int height,
                  double scale, std::vector<double>* grad) {
  const std::size_t n = x.size();
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = blur(x, width, height), my = blur(y, width, height);
  const auto exx = blur(xx, width, height), eyy = blur(yy, width, height);
  const auto exy = blur(xy, width, height);

  double sum = 0.0;
  std::vector<double> g_mu(n), g_xx(n), g_xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double vx = exx[i] - mx[i] * mx[i];
    const double vy = eyy[i] - my[i] * my[i];
    const double cxy = exy[i] - mx[i] * my[i];
    const double a1 = 2.0 * mx[i] * my[i] + kC1;
    const double a2 = 2.0 * cxy + kC2;
    const double b1 = mx[i] * mx[i] + my[i] * my[i] + kC1;
    const double b2 = vx + vy + kC2;
    const double s = (a1 * a2) / (b1 * b2);
    sum += s;
    if (grad == nullptr) continue;
    // Written so identical inputs give exactly zero.
    const double g = scale / static_cast<double>(n);
    g_mu[i] = g * 2.0 * (my[i] * (a2 - a1) - mx[i] * s * (b2 - b1)) / (b1 * b2);
    g_xx[i] = -g * s / b2;
    g_xy[i] = g * 2.0 * s / a2;
  }
  if (grad != nullptr) {
    const auto c_mu = blur(g_mu, width, height);
    const auto c_xx = blur(g_xx, width, height);
    const auto c_xy = blur(g_xy, width, height);
    for (std::size_t i = 0; i < n; ++i) {
      (*grad)[i] += c_mu[i] + 2.0 * x[i] * c_xx[i] + y[i] * c_xy[i];
    }
  }
  return sum / static_cast<double>(n);
}

void check_sizes(std::size_t a, std::size_t b, int width, int height) {
  const std::size_t expect = 3 * static_cast<std::size_t>(width) * height;
  if (width <= 0 || height <= 0 || a != expect || b != expect) {
    throw_error(ErrorCode::kInvalidArgument, "image sizes do not match");
  }
}

}  // namespace

double ssim(std::span<const double> a, std::span<const double> b, int width, int height) {
  check_sizes(a.size(), b.size(), width, height);
  double total = 0.0;
  for (int c = 0; c < 3; ++c) total += ssim_plane(plane(a, c), plane(b, c), width, height, 0.0, nullptr);
  return total / 3.0;
}

double ssim(const ColorImage& a, const ColorImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw_error(ErrorCode::kInvalidArgument, "image sizes do not match");
  }
  return ssim(a.data(), b.data(), a.width(), a.height());
}

double photometric_loss(std::span<const double> rendered, std::span<const double> target, int width,
                        int height, const LossWeights& weights, std::vector<double>* grad) {
  check_sizes(rendered.size(), target.size(), width, height);
  const std::size_t n = rendered.size();
  if (grad != nullptr) grad->assign(n, 0.0);

  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = rendered[i] - target[i];
    l1 += std::abs(d);
    if (grad != nullptr && d != 0.0) (*grad)[i] = weights.l1 * (d > 0.0 ? 1.0 : -1.0) / static_cast<double>(n);
  }
  l1 /= static_cast<double>(n);

  double s = 0.0;
  const std::size_t np = n / 3;
  std::vector<double> gp;
  for (int c = 0; c < 3; ++c) {
    std::vector<double>* gptr = nullptr;
    if (grad != nullptr) {
      gp.assign(np, 0.0);
      gptr = &gp;
    }
    // d(1 - mean SSIM) = -d mean SSIM, averaged over the channels.
    s += ssim_plane(plane(rendered, c), plane(target, c), width, height, -weights.ssim / 3.0, gptr);
    if (grad != nullptr) {
      for (std::size_t i = 0; i < np; ++i) (*grad)[3 * i + c] += gp[i];
    }
  }
  s /= 3.0;
  return weights.l1 * l1 + weights.ssim * (1.0 - s);
}

double psnr(const ColorImage& rendered, const ColorImage& target) {
  if (rendered.width() != target.width() || rendered.height() != target.height()) {
    throw_error(ErrorCode::kInvalidArgument, "psnr: image dimensions differ");
  }
  const auto& a = rendered.data();
  const auto& b = target.data();
  if (a.empty()) throw_error(ErrorCode::kInvalidArgument, "psnr: empty images");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mse += (a[i] - b[i]) * (a[i] - b[i]);
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace photosplat::splat
