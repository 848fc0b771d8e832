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
#include <filesystem>
#include <string>
#include <vector>

#include "photosplat/harness/baseline.hpp"
#include "photosplat/harness/synthetic.hpp"
#include "photosplat/odometry/pipeline.hpp"
#include "photosplat/splat/trainer.hpp"

namespace photosplat::harness {

struct HarnessSettings {
  std::vector<int> checkpoints{10, 15, 20, 30, 40, 60, 80, 120, 160, 240, 320, 480, 640};
  // Frame i is held out for evaluation when i % holdout_period == holdout_offset.
  int holdout_period = 5;
  int holdout_offset = 2;
  BaselineConfig baseline;
  // Wall-clock columns; off makes the CSV reproducible byte for byte.
  bool timings = true;
  int workers = 1;
};

struct Settings {
  odometry::OdometryConfig odometry;  // its selection member is the [selection] section
  splat::TrainConfig train;
  HarnessSettings harness;
  SyntheticConfig synthetic;

  // Throws kInvalidArgument.
  void validate() const;
};

// Sections [odometry], [selection], [splat], [harness], [synthetic]; absent
// keys keep their defaults. Unknown sections or keys, wrong types and
// out-of-range values throw kInvalidArgument naming the origin.
Settings parse_settings(const std::string& text, const std::string& origin = "<string>");
// Throws kIo for an unreadable file.
Settings load_settings(const std::filesystem::path& path);

// Every setting, one key per line, in the format parse_settings reads.
std::string settings_to_toml(const Settings& settings);

// "3", "0..9" (inclusive) or "1,4,7". Throws kInvalidArgument.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
// "10,20,40". Throws kInvalidArgument.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace photosplat::harness
