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

#include "photosplat/harness/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "photosplat/core/error.hpp"

namespace photosplat::harness {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw_error(ErrorCode::kIo, "write failed: " + path.string());
}

double parse_number(const std::string& s, const std::filesystem::path& path, int line) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw_error(ErrorCode::kIo, path.string() + ":" + std::to_string(line) + ": bad number \"" + s + "\"");
}

const std::vector<std::string> kTraceHeader{"label", "seed", "iteration", "psnr", "loss", "count", "ms"};

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<SummaryRow> summarize(std::span<const TrainingTrace> traces,
                                  const std::vector<std::string>& gap_labels) {
  // label -> iteration -> per-seed points
  std::map<std::string, std::map<int, std::map<std::uint64_t, TracePoint>>> by;
  std::vector<std::string> order;
  for (const auto& t : traces) {
    if (!by.count(t.label)) order.push_back(t.label);
    for (const auto& p : t.points) by[t.label][p.iteration][t.seed] = p;
  }
  auto stats = [](const std::vector<double>& v, double& mean, double& sd) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    sd = 0.0;
    if (v.size() > 1) {
      for (double x : v) sd += (x - mean) * (x - mean);
      sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
    }
  };
  std::vector<SummaryRow> rows;
  for (const auto& label : order) {
    for (const auto& [it, seeds] : by[label]) {
      std::vector<double> psnr, loss, count;
      for (const auto& [s, p] : seeds) {
        psnr.push_back(p.psnr);
        loss.push_back(p.loss);
        count.push_back(p.count);
      }
      SummaryRow r;
      r.label = label;
      r.iteration = it;
      r.runs = static_cast<int>(psnr.size());
      double unused;
      stats(psnr, r.psnr_mean, r.psnr_std);
      stats(loss, r.loss_mean, unused);
      stats(count, r.count_mean, unused);
      rows.push_back(r);
    }
  }
  if (gap_labels.size() == 2 && by.count(gap_labels[0]) && by.count(gap_labels[1])) {
    const auto& a = by[gap_labels[0]];
    const auto& b = by[gap_labels[1]];
    for (const auto& [it, seeds] : a) {
      if (!b.count(it)) continue;
      std::vector<double> gap;
      for (const auto& [s, p] : seeds) {
        const auto q = b.at(it).find(s);
        if (q != b.at(it).end()) gap.push_back(p.psnr - q->second.psnr);
      }
      if (gap.empty()) continue;
      SummaryRow r;
      r.label = "gap";
      r.iteration = it;
      r.runs = static_cast<int>(gap.size());
      stats(gap, r.psnr_mean, r.psnr_std);
      rows.push_back(r);
    }
  }
  return rows;
}

void write_traces_csv(const std::filesystem::path& path, std::span<const TrainingTrace> traces) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < kTraceHeader.size(); ++i) out << (i ? "," : "") << kTraceHeader[i];
  out << "\n";
  for (const auto& t : traces) {
    for (const auto& p : t.points) {
      out << t.label << "," << t.seed << "," << p.iteration << "," << format_double(p.psnr) << ","
          << format_double(p.loss) << "," << p.count << "," << format_double(p.ms) << "\n";
    }
  }
  finish(out, path);
}

std::vector<TrainingTrace> read_traces_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw_error(ErrorCode::kIo, path.string() + ": empty file");
  std::vector<TrainingTrace> traces;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != kTraceHeader.size()) {
      throw_error(ErrorCode::kIo, path.string() + ":" + std::to_string(n) + ": expected 7 columns");
    }
    const std::uint64_t seed = std::stoull(f[1]);
    if (traces.empty() || traces.back().label != f[0] || traces.back().seed != seed) {
      traces.push_back({f[0], seed, {}});
    }
    TracePoint p;
    p.iteration = static_cast<int>(parse_number(f[2], path, n));
    p.psnr = parse_number(f[3], path, n);
    p.loss = parse_number(f[4], path, n);
    p.count = static_cast<int>(parse_number(f[5], path, n));
    p.ms = parse_number(f[6], path, n);
    traces.back().points.push_back(p);
  }
  return traces;
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  auto out = open_out(path);
  out << "label,iteration,runs,psnr_mean,psnr_std,loss_mean,count_mean\n";
  for (const auto& r : rows) {
    out << r.label << "," << r.iteration << "," << r.runs << "," << format_double(r.psnr_mean) << ","
        << format_double(r.psnr_std) << "," << format_double(r.loss_mean) << ","
        << format_double(r.count_mean) << "\n";
  }
  finish(out, path);
}

void write_psnr_svg(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  std::map<std::string, std::vector<std::pair<int, double>>> series;
  std::vector<std::string> order;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  int max_it = 1;
  for (const auto& r : rows) {
    if (r.label == "gap" || !std::isfinite(r.psnr_mean)) continue;
    if (!series.count(r.label)) order.push_back(r.label);
    series[r.label].emplace_back(r.iteration, r.psnr_mean);
    lo = std::min(lo, r.psnr_mean);
    hi = std::max(hi, r.psnr_mean);
    max_it = std::max(max_it, r.iteration);
  }
  if (order.empty()) {
    lo = 0.0;
    hi = 1.0;
  }
  lo = std::floor(lo) - 1.0;
  hi = std::ceil(hi) + 1.0;
  const double w = 640, h = 400, left = 60, right = 20, top = 30, bottom = 50;
  auto sx = [&](double it) { return left + (w - left - right) * it / max_it; };
  auto sy = [&](double v) { return top + (h - top - bottom) * (hi - v) / (hi - lo); };
  const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd"};

  auto out = open_out(path);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\">\n",
                w, h, w, h);
  out << buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                left, h - bottom, w - right, h - bottom, left, top, left, h - bottom);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-size=\"13\">Iterations</text>\n"
                "<text x=\"15\" y=\"%g\" font-size=\"13\" transform=\"rotate(-90 15 %g)\" "
                "text-anchor=\"middle\">PSNR (dB)</text>\n",
                left + (w - left - right) / 2, h - 12, top + (h - top - bottom) / 2,
                top + (h - top - bottom) / 2);
  out << buf;
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%.1f</text>\n",
                  left - 5, sy(v) + 4, v);
    out << buf;
    const double it = max_it * k / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">%.0f</text>\n",
                  sx(it), h - bottom + 16, it);
    out << buf;
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const char* color = colors[i % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [it, v] : series[order[i]]) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(it), sy(v));
      out << buf;
    }
    out << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">%s</text>\n", w - right - 120,
                  h - bottom - 12 - 16.0 * static_cast<double>(order.size() - 1 - i), color,
                  order[i].c_str());
    out << buf;
  }
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace photosplat::harness
