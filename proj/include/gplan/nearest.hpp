#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gplan/grid_map.hpp"

namespace gplan {

/// Reference nearest-neighbour query: smallest squared distance, lowest index
/// on ties. Returns -1 for an empty set.
inline int nearest_linear(std::span<const State> nodes, const State& q) {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d2 = distance_sq(nodes[i], q);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(i);
    }
  }
  return best;
}

/// Reference radius query: all indices with squared distance <= r^2, ascending.
inline std::vector<int> near_linear(std::span<const State> nodes, const State& q, double radius) {
  std::vector<int> out;
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (distance_sq(nodes[i], q) <= r2) out.push_back(static_cast<int>(i));
  }
  return out;
}

/// Uniform bucket grid over the map rectangle. Answers are identical to
/// nearest_linear / near_linear over the inserted points (same distance
/// expression, same tie rule), only faster.
class BucketIndex {
 public:
  BucketIndex(int width, int height, double bucket_size = 4.0)
      : bucket_(bucket_size),
        nx_(std::max(1, static_cast<int>(std::ceil(width / bucket_size)))),
        ny_(std::max(1, static_cast<int>(std::ceil(height / bucket_size)))),
        buckets_(static_cast<std::size_t>(nx_) * ny_) {}

  void insert(const State& s) {
    const int id = static_cast<int>(points_.size());
    points_.push_back(s);
    buckets_[bucket_of(s)].push_back(id);
  }

  std::size_t size() const { return points_.size(); }
  std::span<const State> points() const { return points_; }

  int nearest(const State& q) const {
    if (points_.empty()) return -1;
    const int bx = clamp_x(q.x);
    const int by = clamp_y(q.y);
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
      // Everything outside rings 0..ring-1 is at least (ring - 1) buckets away.
      if (ring >= 1) {
        const double bound = (ring - 1) * bucket_;
        if (bound * bound > best_d2) break;
      }
      visit_ring(bx, by, ring, [&](int id) {
        const double d2 = distance_sq(points_[static_cast<std::size_t>(id)], q);
        if (d2 < best_d2 || (d2 == best_d2 && id < best)) {
          best_d2 = d2;
          best = id;
        }
      });
    }
    return best;
  }

  std::vector<int> near(const State& q, double radius) const {
    std::vector<int> out;
    const double r2 = radius * radius;
    const int x0 = clamp_x(q.x - radius), x1 = clamp_x(q.x + radius);
    const int y0 = clamp_y(q.y - radius), y1 = clamp_y(q.y + radius);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        for (int id : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
          if (distance_sq(points_[static_cast<std::size_t>(id)], q) <= r2) out.push_back(id);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int clamp_x(double x) const {
    return std::clamp(static_cast<int>(std::floor(x / bucket_)), 0, nx_ - 1);
  }
  int clamp_y(double y) const {
    return std::clamp(static_cast<int>(std::floor(y / bucket_)), 0, ny_ - 1);
  }
  std::size_t bucket_of(const State& s) const {
    return static_cast<std::size_t>(clamp_y(s.y)) * nx_ + clamp_x(s.x);
  }

  template <typename F>
  void visit_ring(int bx, int by, int ring, F&& f) const {
    auto visit_bucket = [&](int x, int y) {
      if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return;
      for (int id : buckets_[static_cast<std::size_t>(y) * nx_ + x]) f(id);
    };
    if (ring == 0) {
      visit_bucket(bx, by);
      return;
    }
    for (int x = bx - ring; x <= bx + ring; ++x) {
      visit_bucket(x, by - ring);
      visit_bucket(x, by + ring);
    }
    for (int y = by - ring + 1; y <= by + ring - 1; ++y) {
      visit_bucket(bx - ring, y);
      visit_bucket(bx + ring, y);
    }
  }

  double bucket_;
  int nx_;
  int ny_;
  std::vector<std::vector<int>> buckets_;
  std::vector<State> points_;
};

}  // namespace gplan
