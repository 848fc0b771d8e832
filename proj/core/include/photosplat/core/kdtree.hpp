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

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace photosplat {

// Static k-d tree over a fixed point set. Neighbors are ordered by
// (squared distance, index), so ties resolve the same way as a brute-force
// scan sorted with that key.
template <int Dim>
class KdTree {
 public:
  using Point = Eigen::Matrix<double, Dim, 1>;

  struct Neighbor {
    std::size_t index;
    double squared_distance;
  };

  explicit KdTree(std::vector<Point> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (!points_.empty()) build(0, points_.size(), 0);
  }

  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }

  static double squared_distance(const Point& a, const Point& b) {
    double d = 0.0;
    for (int k = 0; k < Dim; ++k) {
      const double diff = a[k] - b[k];
      d += diff * diff;
    }
    return d;
  }

  // Up to k nearest points to `query`; `exclude` (if < size) is skipped.
  std::vector<Neighbor> nearest(const Point& query, std::size_t k,
                                std::size_t exclude = std::numeric_limits<std::size_t>::max()) const {
    std::vector<Neighbor> best;
    best.reserve(k + 1);
    if (k == 0 || points_.empty()) return best;
    search(0, points_.size(), 0, query, k, exclude, best);
    return best;
  }

 private:
  static bool closer(const Neighbor& a, const Neighbor& b) {
    return a.squared_distance < b.squared_distance ||
           (a.squared_distance == b.squared_distance && a.index < b.index);
  }

  void build(std::size_t begin, std::size_t end, int depth) {
    if (end - begin <= kLeafSize) return;
    const int axis = depth % Dim;
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                       return points_[a][axis] < points_[b][axis] ||
                              (points_[a][axis] == points_[b][axis] && a < b);
                     });
    build(begin, mid, depth + 1);
    build(mid + 1, end, depth + 1);
  }

  void offer(std::size_t idx, const Point& query, std::size_t k, std::vector<Neighbor>& best) const {
    const Neighbor cand{idx, squared_distance(points_[idx], query)};
    if (best.size() == k && !closer(cand, best.back())) return;
    auto pos = std::lower_bound(best.begin(), best.end(), cand, closer);
    best.insert(pos, cand);
    if (best.size() > k) best.pop_back();
  }

  void search(std::size_t begin, std::size_t end, int depth, const Point& query, std::size_t k,
              std::size_t exclude, std::vector<Neighbor>& best) const {
    if (end - begin <= kLeafSize) {
      for (std::size_t i = begin; i < end; ++i) {
        if (order_[i] != exclude) offer(order_[i], query, k, best);
      }
      return;
    }
    const int axis = depth % Dim;
    const std::size_t mid = begin + (end - begin) / 2;
    const std::size_t pivot = order_[mid];
    const double diff = query[axis] - points_[pivot][axis];
    const bool left_first = diff <= 0.0;
    if (left_first) {
      search(begin, mid, depth + 1, query, k, exclude, best);
    } else {
      search(mid + 1, end, depth + 1, query, k, exclude, best);
    }
    if (pivot != exclude) offer(pivot, query, k, best);
    // <= keeps equal-distance candidates on the far side reachable for tie-breaking.
    if (best.size() < k || diff * diff <= best.back().squared_distance) {
      if (left_first) {
        search(mid + 1, end, depth + 1, query, k, exclude, best);
      } else {
        search(begin, mid, depth + 1, query, k, exclude, best);
      }
    }
  }

  static constexpr std::size_t kLeafSize = 8;
  std::vector<Point> points_;
  std::vector<std::size_t> order_;
};

}  // namespace photosplat
