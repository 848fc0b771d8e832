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

#include "photosplat/harness/settings.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "photosplat/core/config_file.hpp"
#include "photosplat/core/error.hpp"

namespace photosplat::harness {
namespace {

// Calls f(section, key, field) for every plain setting, in file order.
template <typename S, typename F>
void visit(S& s, F&& f) {
  auto& o = s.odometry;
  f("odometry", "keyframe_interval", o.keyframe_interval);
  f("odometry", "window_keyframes", o.window_keyframes);
  f("odometry", "pyramid_levels", o.pyramid_levels);
  f("odometry", "dense", o.dense);
  f("odometry", "initial_inverse_depth", o.initial_inverse_depth);
  f("odometry", "seed_neighbor_count", o.seed_neighbor_count);
  f("odometry", "outlier_energy", o.outlier_energy);
  f("odometry", "tracker_huber_threshold", o.tracker.huber_threshold);
  f("odometry", "tracker_max_iterations", o.tracker.max_iterations);
  f("odometry", "tracker_min_update_norm", o.tracker.min_update_norm);
  f("odometry", "tracker_initial_damping", o.tracker.initial_damping);
  f("odometry", "tracker_max_rejections", o.tracker.max_rejections);
  f("odometry", "tracker_min_points", o.tracker.min_points);
  f("odometry", "tracker_active_margin", o.tracker.active_margin);
  f("odometry", "tracker_log_a_prior", o.tracker.log_a_prior);
  f("odometry", "depth_huber_threshold", o.depth.huber_threshold);
  f("odometry", "depth_max_iterations", o.depth.max_iterations);
  f("odometry", "depth_initial_damping", o.depth.initial_damping);
  f("odometry", "depth_min_relative_update", o.depth.min_relative_update);
  f("odometry", "depth_use_pattern", o.depth.use_pattern);

  auto& sel = o.selection;
  f("selection", "target_tracking_count", sel.target_tracking_count);
  f("selection", "extra_cell_size", sel.extra_cell_size);
  f("selection", "gradient_floor", sel.gradient_floor);
  f("selection", "fill_neighbor_count", sel.fill_neighbor_count);
  f("selection", "block_size", sel.block_size);
  f("selection", "threshold_offset", sel.threshold_offset);
  f("selection", "min_candidates", sel.min_candidates);

  auto& t = s.train;
  f("splat", "iterations", t.iterations);
  f("splat", "lr_position", t.learning_rates.position);
  f("splat", "lr_log_scale", t.learning_rates.log_scale);
  f("splat", "lr_rotation", t.learning_rates.rotation);
  f("splat", "lr_opacity", t.learning_rates.opacity);
  f("splat", "lr_color", t.learning_rates.color);
  f("splat", "adam_beta1", t.adam.beta1);
  f("splat", "adam_beta2", t.adam.beta2);
  f("splat", "adam_epsilon", t.adam.epsilon);
  f("splat", "loss_l1", t.loss.l1);
  f("splat", "loss_ssim", t.loss.ssim);
  f("splat", "densify_interval", t.densify_interval);
  f("splat", "densify_until", t.densify_until);
  f("splat", "densify_grad_threshold", t.densify.grad_threshold);
  f("splat", "prune_opacity_threshold", t.densify.prune_opacity);
  f("splat", "prune_scale_threshold", t.densify.prune_scale);
  f("splat", "split_scale_threshold", t.densify.split_scale);
  f("splat", "split_shrink", t.densify.split_shrink);

  auto& h = s.harness;
  f("harness", "checkpoints", h.checkpoints);
  f("harness", "holdout_period", h.holdout_period);
  f("harness", "holdout_offset", h.holdout_offset);
  f("harness", "baseline_ratio", h.baseline.ratio);
  f("harness", "timings", h.timings);
  f("harness", "workers", h.workers);

  auto& y = s.synthetic;
  f("synthetic", "width", y.width);
  f("synthetic", "height", y.height);
  f("synthetic", "frames", y.frames);
  f("synthetic", "horizontal_fov_deg", y.horizontal_fov_deg);
  f("synthetic", "texture_octaves", y.texture_octaves);
  f("synthetic", "texture_frequency", y.texture_frequency);
  f("synthetic", "tile_size", y.tile_size);
  f("synthetic", "edge_softness", y.edge_softness);
  f("synthetic", "trim_width", y.trim_width);
  f("synthetic", "textureless_fraction", y.textureless_fraction);
  f("synthetic", "orbit_radius", y.orbit_radius);
  f("synthetic", "step_length", y.step_length);
  f("synthetic", "yaw_rate", y.yaw_rate);
  f("synthetic", "pitch", y.pitch);
  f("synthetic", "camera_height", y.camera_height);
  f("synthetic", "supersample", y.supersample);
  f("synthetic", "pixel_footprint", y.pixel_footprint);
}

std::string format(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  // Keep a decimal point so the value reads back as a float.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}
std::string format(int v) { return std::to_string(v); }
std::string format(bool v) { return v ? "true" : "false"; }
std::string format(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}
std::string format(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format(v[i]);
  return s + "]";
}

}  // namespace

void Settings::validate() const {
  odometry.validate();
  train.validate();
  synthetic.validate();
  auto fail = [](const std::string& what) {
    throw_error(ErrorCode::kInvalidArgument, "harness settings: " + what);
  };
  if (harness.checkpoints.empty()) fail("checkpoints must not be empty");
  for (std::size_t i = 0; i < harness.checkpoints.size(); ++i) {
    if (harness.checkpoints[i] < 1 || (i > 0 && harness.checkpoints[i] <= harness.checkpoints[i - 1])) {
      fail("checkpoints must be positive and strictly increasing");
    }
  }
  if (harness.holdout_period < 2) fail("holdout_period must be >= 2");
  if (harness.holdout_offset < 0 || harness.holdout_offset >= harness.holdout_period) {
    fail("holdout_offset must be in [0, holdout_period)");
  }
  if (!(harness.baseline.ratio > 0.0 && harness.baseline.ratio <= 1.0)) {
    fail("baseline_ratio must be in (0, 1]");
  }
  if (harness.workers < 1) fail("workers must be >= 1");
  if (harness.checkpoints.back() > train.iterations) fail("checkpoints must not exceed splat.iterations");
}

Settings parse_settings(const std::string& text, const std::string& origin) {
  const ConfigFile cfg = ConfigFile::parse(text, origin);
  Settings s;
  visit(s, [&](const char* section, const char* key, auto& field) { cfg.get(section, key, field); });
  std::string mode = to_string(s.harness.baseline.mode);
  cfg.get("harness", "baseline", mode);
  std::vector<double> room{s.synthetic.room_size.x(), s.synthetic.room_size.y(),
                           s.synthetic.room_size.z()};
  cfg.get("synthetic", "room_size", room);
  for (const auto& section : cfg.sections()) {
    if (section != "odometry" && section != "selection" && section != "splat" && section != "harness" &&
        section != "synthetic") {
      throw_error(ErrorCode::kInvalidArgument, origin + ": unknown section [" + section + "]");
    }
  }
  const auto unknown = cfg.unconsumed_keys();
  if (!unknown.empty()) {
    std::string list;
    for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
    throw_error(ErrorCode::kInvalidArgument, origin + ": unknown setting(s) " + list);
  }
  if (room.size() != 3) throw_error(ErrorCode::kInvalidArgument, origin + ": room_size needs 3 values");
  s.synthetic.room_size = Vec3(room[0], room[1], room[2]);
  s.harness.baseline.mode = parse_baseline_mode(mode);
  s.odometry.workers = s.harness.workers;
  s.train.workers = s.harness.workers;
  try {
    s.validate();
  } catch (const Error& e) {
    throw_error(ErrorCode::kInvalidArgument, origin + ": " + e.what());
  }
  return s;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str(), path.string());
}

std::string settings_to_toml(const Settings& settings) {
  std::map<std::string, std::vector<std::string>> lines;
  std::vector<std::string> order;
  auto emit = [&](const std::string& section, const std::string& line) {
    if (!lines.count(section)) order.push_back(section);
    lines[section].push_back(line);
  };
  visit(settings, [&](const char* section, const char* key, const auto& field) {
    emit(section, std::string(key) + " = " + format(field));
  });
  emit("harness", "baseline = \"" + to_string(settings.harness.baseline.mode) + "\"");
  const auto& r = settings.synthetic.room_size;
  emit("synthetic", "room_size = " + format(std::vector<double>{r.x(), r.y(), r.z()}));
  std::string out;
  for (const auto& section : order) {
    out += (out.empty() ? "" : "\n") + ("[" + section + "]\n");
    for (const auto& l : lines[section]) out += l + "\n";
  }
  return out;
}

namespace {

template <typename T>
T parse_number(std::string_view text, const std::string& whole) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "not a valid number list: '" + whole + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.push_back(text.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = parse_number<std::uint64_t>(std::string_view(text).substr(0, dots), text);
    const auto hi = parse_number<std::uint64_t>(std::string_view(text).substr(dots + 2), text);
    if (hi < lo) throw_error(ErrorCode::kInvalidArgument, "empty seed range: '" + text + "'");
    if (hi - lo >= 100000) throw_error(ErrorCode::kInvalidArgument, "seed range too large: '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  for (auto part : split_commas(text)) out.push_back(parse_number<std::uint64_t>(part, text));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (auto part : split_commas(text)) out.push_back(parse_number<int>(part, text));
  return out;
}

}  // namespace photosplat::harness
