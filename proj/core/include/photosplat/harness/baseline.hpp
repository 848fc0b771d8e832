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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "photosplat/selection/point_cloud.hpp"

namespace photosplat::harness {

enum class BaselineMode { kTrackingOnly, kRatio };

struct BaselineConfig {
  BaselineMode mode = BaselineMode::kTrackingOnly;
  double ratio = 1.0;  // kRatio: fraction of tracking points kept
  std::uint64_t seed = 0;
};

// "tracking-only" or "ratio"; throws kInvalidArgument otherwise.
BaselineMode parse_baseline_mode(const std::string& text);
std::string to_string(BaselineMode mode);

// Stand-in for a sparse structure-from-motion cloud. Tracking-only keeps the
// POSE_TRACKING points in order; ratio keeps exactly round(ratio * n) of them,
// chosen without replacement by a seeded shuffle and returned in input order.
// Throws kInvalidArgument for a ratio outside (0, 1] or an empty result.
std::vector<selection::ColoredPoint> make_sparse_baseline(
    std::span<const selection::ColoredPoint> cloud, const BaselineConfig& config);

}  // namespace photosplat::harness
