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

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace photosplat {

// Row-major grayscale image with intensities in [0, 1].
class IntensityImage {
 public:
  IntensityImage() = default;
  IntensityImage(int width, int height, double fill = 0.0);
  // Validates size and value range; throws kInvalidArgument.
  IntensityImage(int width, int height, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  double at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  // Unchecked write; callers keep values in [0, 1].
  double& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  const std::vector<double>& pixels() const { return pixels_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

// Interleaved RGB, values in [0, 1].
class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(int width, int height, const Eigen::Vector3d& fill = Eigen::Vector3d::Zero());

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  Eigen::Vector3d at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, const Eigen::Vector3d& c) {
    const std::size_t i = index(x, y);
    data_[i] = c.x();
    data_[i + 1] = c.y();
    data_[i + 2] = c.z();
  }
  double channel(int x, int y, int c) const { return data_[index(x, y) + c]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t index(int x, int y) const {
    return 3 * (static_cast<std::size_t>(y) * width_ + x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// luma = 0.299 R + 0.587 G + 0.114 B
IntensityImage to_grayscale(const ColorImage& color);
ColorImage gray_to_color(const IntensityImage& gray);

// Level 0 is the finest; level l+1 has floor-halved dimensions.
class ImagePyramid {
 public:
  static constexpr int kMaxLevels = 6;

  ImagePyramid() = default;
  explicit ImagePyramid(std::vector<IntensityImage> levels) : levels_(std::move(levels)) {}

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const IntensityImage& level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }
  const IntensityImage& finest() const { return levels_.front(); }

 private:
  std::vector<IntensityImage> levels_;
};

// Bilinear interpolation. Requires 0 <= u <= width-1, 0 <= v <= height-1;
// throws kOutOfBounds otherwise.
double bilinear_sample(const IntensityImage& image, double u, double v);
std::optional<double> try_bilinear_sample(const IntensityImage& image, double u, double v);
Eigen::Vector3d bilinear_sample(const ColorImage& image, double u, double v);

struct SampleWithGradient {
  double value;
  double gx;
  double gy;
};

// Value plus the exact partial derivatives of the bilinear interpolant (the
// derivative the photometric Jacobians need). Same bounds as bilinear_sample.
std::optional<SampleWithGradient> try_sample_with_gradient(const IntensityImage& image, double u,
                                                           double v);

// Central differences of bilinearly sampled intensity: (I(u+1,v) - I(u-1,v)) / 2.
// Requires the point to be at least one pixel from every border.
Eigen::Vector2d image_gradient(const IntensityImage& image, double u, double v);

// Central-difference gradient magnitude at every pixel; zero on the 1-pixel border.
std::vector<double> gradient_magnitude_map(const IntensityImage& image);

// 2x2 box-filter pyramid, 1 <= levels <= 6.
ImagePyramid build_pyramid(const IntensityImage& image, int levels);

}  // namespace photosplat
