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

#include "photosplat/harness/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "photosplat/core/error.hpp"

namespace photosplat::harness {

BaselineMode parse_baseline_mode(const std::string& text) {
  if (text == "tracking-only") return BaselineMode::kTrackingOnly;
  if (text == "ratio") return BaselineMode::kRatio;
  throw_error(ErrorCode::kInvalidArgument,
              "baseline mode must be \"tracking-only\" or \"ratio\", got \"" + text + "\"");
}

std::string to_string(BaselineMode mode) {
  return mode == BaselineMode::kTrackingOnly ? "tracking-only" : "ratio";
}

std::vector<selection::ColoredPoint> make_sparse_baseline(
    std::span<const selection::ColoredPoint> cloud, const BaselineConfig& config) {
  std::vector<selection::ColoredPoint> tracking;
  for (const auto& p : cloud) {
    if (p.status == odometry::PointStatus::kPoseTracking) tracking.push_back(p);
  }
  if (config.mode == BaselineMode::kRatio) {
    if (!(config.ratio > 0.0 && config.ratio <= 1.0)) {
      throw_error(ErrorCode::kInvalidArgument, "baseline ratio must be in (0, 1]");
    }
    const std::size_t keep = static_cast<std::size_t>(std::llround(config.ratio * tracking.size()));
    std::vector<std::size_t> idx(tracking.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::uint64_t state = config.seed;
    auto next = [&] {
      std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    };
    // Partial Fisher-Yates: the first `keep` slots are the sample.
    for (std::size_t i = 0; i < keep; ++i) {
      const std::size_t j = i + next() % (idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    std::vector<selection::ColoredPoint> out;
    out.reserve(keep);
    for (std::size_t i : idx) out.push_back(tracking[i]);
    tracking = std::move(out);
  }
  if (tracking.empty()) throw_error(ErrorCode::kInvalidArgument, "sparse baseline is empty");
  return tracking;
}

}  // namespace photosplat::harness
