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

#include "photosplat/splat/gaussian.hpp"

namespace photosplat::splat {

// Binary little-endian PLY in the layout common 3DGS viewers read: x y z,
// nx ny nz (zero), f_dc_0..2 (degree-0 SH, color = 0.5 + C0 * f_dc),
// opacity (logit), scale_0..2 (log), rot_0..3 (w x y z). The background goes
// in a header comment. Values are stored as float.
void write_scene_ply(const std::filesystem::path& path, const SplatScene& scene);

// Reads the layout above, ASCII or binary little-endian, float or double
// properties, in any property order. Throws kIo naming the path.
SplatScene read_scene_ply(const std::filesystem::path& path);

}  // namespace photosplat::splat
