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

namespace photosplat::splat {

struct LossWeights {
  double l1 = 0.8;
  double ssim = 0.2;
};

// Mean SSIM over pixels and channels: 11x11 Gaussian window (sigma 1.5),
// zero padding, C1 = 0.01^2, C2 = 0.03^2. Images are interleaved RGB.
double ssim(std::span<const double> a, std::span<const double> b, int width, int height);
double ssim(const ColorImage& a, const ColorImage& b);

// l1 * mean|x - y| + ssim * (1 - SSIM(x, y)). When `grad` is given it
// receives d loss / d rendered, same layout. Throws kInvalidArgument on a
// size mismatch.
double photometric_loss(std::span<const double> rendered, std::span<const double> target, int width,
                        int height, const LossWeights& weights, std::vector<double>* grad = nullptr);

// 10 log10(1 / MSE) over all pixels and channels; +inf for identical images.
// Throws kInvalidArgument on a dimension mismatch.
double psnr(const ColorImage& rendered, const ColorImage& target);

}  // namespace photosplat::splat
