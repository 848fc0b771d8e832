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
#include <span>
#include <string>
#include <vector>

namespace photosplat::harness {

struct TracePoint {
  int iteration = 0;
  double psnr = 0.0;  // may be +inf
  double loss = 0.0;
  int count = 0;      // Gaussians
  double ms = 0.0;    // wall clock since training started; 0 when not recorded

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct TrainingTrace {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<TracePoint> points;  // strictly increasing iterations

  friend bool operator==(const TrainingTrace&, const TrainingTrace&) = default;
};

struct SummaryRow {
  std::string label;  // a trace label, or "gap" for paired label differences
  int iteration = 0;
  int runs = 0;
  double psnr_mean = 0.0;
  double psnr_std = 0.0;  // sample standard deviation; 0 for one run
  double loss_mean = 0.0;
  double count_mean = 0.0;
};

// Per (label, checkpoint) mean and spread. With `gap_labels` = {a, b} it adds
// "gap" rows of psnr(a) - psnr(b) paired by seed.
std::vector<SummaryRow> summarize(std::span<const TrainingTrace> traces,
                                  const std::vector<std::string>& gap_labels = {});

// label,seed,iteration,psnr,loss,count,ms. Doubles use %.17g so a parse
// returns the same values; +inf PSNR is written "inf". Throws kIo.
void write_traces_csv(const std::filesystem::path& path, std::span<const TrainingTrace> traces);
std::vector<TrainingTrace> read_traces_csv(const std::filesystem::path& path);

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);

// Mean PSNR against iteration, one polyline per trace label.
void write_psnr_svg(const std::filesystem::path& path, std::span<const SummaryRow> rows);

std::string format_double(double v);

}  // namespace photosplat::harness
