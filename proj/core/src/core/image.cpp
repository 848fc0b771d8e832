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

#include "photosplat/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "photosplat/core/error.hpp"

namespace photosplat {
namespace {

void check_size(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw_error(ErrorCode::kInvalidArgument, "image dimensions must be positive, got " +
                                                 std::to_string(width) + "x" +
                                                 std::to_string(height));
  }
}

bool in_bounds(const IntensityImage& image, double u, double v) {
  return u >= 0.0 && v >= 0.0 && u <= image.width() - 1 && v <= image.height() - 1;
}

[[noreturn]] void throw_out_of_bounds(double u, double v, int w, int h) {
  std::ostringstream msg;
  msg << "sample (" << u << ", " << v << ") outside " << w << "x" << h << " image";
  throw_error(ErrorCode::kOutOfBounds, msg.str());
}

// Cell origin and fractional offsets; the last row/column maps onto the cell
// to its left/top with fraction 1.
struct Cell {
  int x0, y0;
  double fx, fy;
};

Cell locate(double u, double v, int width, int height) {
  int x0 = static_cast<int>(std::floor(u));
  int y0 = static_cast<int>(std::floor(v));
  if (x0 >= width - 1) x0 = std::max(width - 2, 0);
  if (y0 >= height - 1) y0 = std::max(height - 2, 0);
  return {x0, y0, u - x0, v - y0};
}

}  // namespace

IntensityImage::IntensityImage(int width, int height, double fill)
    : width_(width), height_(height) {
  check_size(width, height);
  if (!(fill >= 0.0 && fill <= 1.0)) {
    throw_error(ErrorCode::kInvalidArgument, "intensity fill outside [0, 1]");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

IntensityImage::IntensityImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_size(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    throw_error(ErrorCode::kInvalidArgument, "pixel count " + std::to_string(pixels_.size()) +
                                                 " does not match " + std::to_string(width) +
                                                 "x" + std::to_string(height));
  }
  for (double p : pixels_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw_error(ErrorCode::kInvalidArgument, "intensity outside [0, 1]: " + std::to_string(p));
    }
  }
}

ColorImage::ColorImage(int width, int height, const Eigen::Vector3d& fill)
    : width_(width), height_(height) {
  check_size(width, height);
  data_.resize(3 * static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.x();
    data_[i + 1] = fill.y();
    data_[i + 2] = fill.z();
  }
}

IntensityImage to_grayscale(const ColorImage& color) {
  std::vector<double> gray(static_cast<std::size_t>(color.width()) * color.height());
  const auto& d = color.data();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const double luma = 0.299 * d[3 * i] + 0.587 * d[3 * i + 1] + 0.114 * d[3 * i + 2];
    gray[i] = std::clamp(luma, 0.0, 1.0);
  }
  return IntensityImage(color.width(), color.height(), std::move(gray));
}

ColorImage gray_to_color(const IntensityImage& gray) {
  ColorImage out(gray.width(), gray.height());
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      const double g = gray.at(x, y);
      out.set(x, y, {g, g, g});
    }
  }
  return out;
}

std::optional<double> try_bilinear_sample(const IntensityImage& image, double u, double v) {
  if (!in_bounds(image, u, v)) return std::nullopt;
  const int w = image.width();
  const int h = image.height();
  if (w == 1 || h == 1) {
    // Degenerate 1-pixel-wide images interpolate along the remaining axis only.
    const int x0 = w == 1 ? 0 : std::min(static_cast<int>(u), w - 2);
    const int y0 = h == 1 ? 0 : std::min(static_cast<int>(v), h - 2);
    const double t = w == 1 ? (h == 1 ? 0.0 : v - y0) : u - x0;
    const double a = image.at(x0, y0);
    const double b = w == 1 ? (h == 1 ? a : image.at(x0, y0 + 1)) : image.at(x0 + 1, y0);
    return a + t * (b - a);
  }
  const Cell c = locate(u, v, w, h);
  const double p00 = image.at(c.x0, c.y0);
  const double p10 = image.at(c.x0 + 1, c.y0);
  const double p01 = image.at(c.x0, c.y0 + 1);
  const double p11 = image.at(c.x0 + 1, c.y0 + 1);
  return (1.0 - c.fy) * ((1.0 - c.fx) * p00 + c.fx * p10) + c.fy * ((1.0 - c.fx) * p01 + c.fx * p11);
}

double bilinear_sample(const IntensityImage& image, double u, double v) {
  auto s = try_bilinear_sample(image, u, v);
  if (!s) throw_out_of_bounds(u, v, image.width(), image.height());
  return *s;
}

Eigen::Vector3d bilinear_sample(const ColorImage& image, double u, double v) {
  const int w = image.width();
  const int h = image.height();
  if (!(u >= 0.0 && v >= 0.0 && u <= w - 1 && v <= h - 1)) throw_out_of_bounds(u, v, w, h);
  if (w < 2 || h < 2) return image.at(static_cast<int>(u), static_cast<int>(v));
  const Cell c = locate(u, v, w, h);
  return (1.0 - c.fy) * ((1.0 - c.fx) * image.at(c.x0, c.y0) + c.fx * image.at(c.x0 + 1, c.y0)) +
         c.fy * ((1.0 - c.fx) * image.at(c.x0, c.y0 + 1) + c.fx * image.at(c.x0 + 1, c.y0 + 1));
}

std::optional<SampleWithGradient> try_sample_with_gradient(const IntensityImage& image, double u,
                                                           double v) {
  if (!in_bounds(image, u, v) || image.width() < 2 || image.height() < 2) return std::nullopt;
  const Cell c = locate(u, v, image.width(), image.height());
  const double p00 = image.at(c.x0, c.y0);
  const double p10 = image.at(c.x0 + 1, c.y0);
  const double p01 = image.at(c.x0, c.y0 + 1);
  const double p11 = image.at(c.x0 + 1, c.y0 + 1);
  const double top = (1.0 - c.fx) * p00 + c.fx * p10;
  const double bottom = (1.0 - c.fx) * p01 + c.fx * p11;
  SampleWithGradient s;
  s.value = (1.0 - c.fy) * top + c.fy * bottom;
  s.gx = (1.0 - c.fy) * (p10 - p00) + c.fy * (p11 - p01);
  s.gy = bottom - top;
  return s;
}

Eigen::Vector2d image_gradient(const IntensityImage& image, double u, double v) {
  if (!(u >= 1.0 && v >= 1.0 && u <= image.width() - 2 && v <= image.height() - 2)) {
    throw_out_of_bounds(u, v, image.width(), image.height());
  }
  const double gx =
      0.5 * (bilinear_sample(image, u + 1.0, v) - bilinear_sample(image, u - 1.0, v));
  const double gy =
      0.5 * (bilinear_sample(image, u, v + 1.0) - bilinear_sample(image, u, v - 1.0));
  return {gx, gy};
}

std::vector<double> gradient_magnitude_map(const IntensityImage& image) {
  const int w = image.width();
  const int h = image.height();
  std::vector<double> mag(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double gx = 0.5 * (image.at(x + 1, y) - image.at(x - 1, y));
      const double gy = 0.5 * (image.at(x, y + 1) - image.at(x, y - 1));
      mag[static_cast<std::size_t>(y) * w + x] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return mag;
}

ImagePyramid build_pyramid(const IntensityImage& image, int levels) {
  if (levels < 1 || levels > ImagePyramid::kMaxLevels) {
    throw_error(ErrorCode::kInvalidArgument,
                "pyramid levels must be in [1, 6], got " + std::to_string(levels));
  }
  const int min_side = 1 << (levels - 1);
  if (image.width() < min_side || image.height() < min_side) {
    throw_error(ErrorCode::kInvalidArgument,
                std::to_string(levels) + " pyramid levels need at least " +
                    std::to_string(min_side) + " pixels per side, image is " +
                    std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  std::vector<IntensityImage> out;
  out.reserve(static_cast<std::size_t>(levels));
  out.push_back(image);
  for (int l = 1; l < levels; ++l) {
    const IntensityImage& fine = out.back();
    const int w = fine.width() / 2;
    const int h = fine.height() / 2;
    std::vector<double> px(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        px[static_cast<std::size_t>(y) * w + x] =
            0.25 * (fine.at(2 * x, 2 * y) + fine.at(2 * x + 1, 2 * y) +
                    fine.at(2 * x, 2 * y + 1) + fine.at(2 * x + 1, 2 * y + 1));
      }
    }
    out.emplace_back(w, h, std::move(px));
  }
  return ImagePyramid(std::move(out));
}

}  // namespace photosplat
