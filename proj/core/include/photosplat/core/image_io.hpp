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

#include <filesystem>

#include "photosplat/core/image.hpp"

namespace photosplat {

struct LoadedImage {
  ColorImage color;
  IntensityImage gray;
};

// Reads 8-bit PNG (gray, gray+alpha, RGB, RGBA), PGM (P2/P5) and PPM
// (P3/P6). 8-bit values are divided by 255. Grayscale uses
// luma = 0.299 R + 0.587 G + 0.114 B; color is kept for splatting.
// Throws kIo with the path in the message.
LoadedImage load_image(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const ColorImage& image);
void save_png(const std::filesystem::path& path, const IntensityImage& image);
void save_pgm(const std::filesystem::path& path, const IntensityImage& image, bool binary = true);

// Single-channel float map (PFM, "Pf"), used for depth maps.
struct FloatMap {
  int width = 0;
  int height = 0;
  std::vector<float> values;  // row-major, top row first

  float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

void save_pfm(const std::filesystem::path& path, const FloatMap& map);
FloatMap load_pfm(const std::filesystem::path& path);

}  // namespace photosplat
