#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gplan {

/// Continuous position in cell units. Cell (i, j) covers [i, i+1) x [j, j+1).
struct State {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

inline double distance_sq(const State& a, const State& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const State& a, const State& b) {
  return std::sqrt(distance_sq(a, b));
}

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

inline Cell cell_of(const State& s) {
  return {static_cast<int>(std::floor(s.x)), static_cast<int>(std::floor(s.y))};
}

inline State cell_center(Cell c) { return {c.x + 0.5, c.y + 0.5}; }

/// Binary occupancy raster, row-major, true = obstacle. Immutable once built.
class GridMap {
 public:
  static constexpr int kMinSide = 8;

  GridMap(int width, int height, std::vector<std::uint8_t> occupancy)
      : width_(width), height_(height), occ_(std::move(occupancy)) {
    if (width < kMinSide || height < kMinSide) {
      throw std::invalid_argument("GridMap: sides must be at least " +
                                  std::to_string(kMinSide) + " cells, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
    }
    if (occ_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw std::invalid_argument("GridMap: occupancy size does not match dimensions");
    }
    for (auto& v : occ_) v = v ? 1 : 0;
  }

  static GridMap empty(int width, int height) {
    return GridMap(width, height,
                   std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 0));
  }

  static GridMap full(int width, int height) {
    return GridMap(width, height,
                   std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 1));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return occ_.size(); }

  bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool contains(const State& s) const {
    return s.x >= 0.0 && s.y >= 0.0 && s.x < width_ && s.y < height_;
  }

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  bool obstacle(Cell c) const { return occ_[index(c)] != 0; }
  bool obstacle(int x, int y) const { return obstacle(Cell{x, y}); }
  bool free(Cell c) const { return !obstacle(c); }

  /// A state collides iff the cell containing it is an obstacle.
  bool in_collision(const State& s) const { return obstacle(cell_of(s)); }

  const std::vector<std::uint8_t>& occupancy() const { return occ_; }

  std::size_t obstacle_count() const {
    return static_cast<std::size_t>(std::count(occ_.begin(), occ_.end(), std::uint8_t{1}));
  }
  std::size_t free_count() const { return occ_.size() - obstacle_count(); }

  double diagonal() const { return std::hypot(static_cast<double>(width_), height_); }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> occ_;
};

struct PlanningTask {
  State start;
  State goal;
  double goal_radius = 2.0;

  friend bool operator==(const PlanningTask&, const PlanningTask&) = default;
};

/// Throws std::invalid_argument unless the task is valid on the map.
inline void validate_task(const GridMap& map, const PlanningTask& task) {
  if (!map.contains(task.start) || !map.contains(task.goal)) {
    throw std::invalid_argument("task endpoints lie outside the map");
  }
  if (!(task.goal_radius > 0.0)) {
    throw std::invalid_argument("goal radius must be positive");
  }
}

/// Visits every cell the closed segment a-b passes through, in order from a to
/// b (grid traversal in the style of Amanatides & Woo). When the segment crosses
/// a cell corner exactly, both side cells are visited as well. The visitor
/// returns false to stop early; the function returns false iff stopped.
template <typename Visitor>
bool traverse_segment(const State& a, const State& b, Visitor&& visit) {
  Cell cur = cell_of(a);
  const Cell end = cell_of(b);
  if (!visit(cur)) return false;
  if (cur == end) return true;

  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  // Boundary crossing parameters are recomputed from the boundary coordinate
  // on every step instead of accumulated, which keeps near-corner ordering
  // exact to one rounding.
  double next_bx = step_x > 0 ? cur.x + 1.0 : cur.x;
  double next_by = step_y > 0 ? cur.y + 1.0 : cur.y;
  auto crossing_x = [&] { return step_x != 0 ? (next_bx - a.x) / dx : inf; };
  auto crossing_y = [&] { return step_y != 0 ? (next_by - a.y) / dy : inf; };
  double t_max_x = crossing_x();
  double t_max_y = crossing_y();

  // Steps never move past the end cell on either axis, so rounding near the
  // end cannot walk the traversal off the segment.
  while (!(cur == end)) {
    const bool x_open = cur.x != end.x;
    const bool y_open = cur.y != end.y;
    if (x_open && (!y_open || t_max_x < t_max_y)) {
      cur.x += step_x;
      next_bx += step_x;
      t_max_x = crossing_x();
    } else if (y_open && (!x_open || t_max_y < t_max_x)) {
      cur.y += step_y;
      next_by += step_y;
      t_max_y = crossing_y();
    } else {
      // Exact corner crossing.
      if (!visit(Cell{cur.x + step_x, cur.y})) return false;
      if (!visit(Cell{cur.x, cur.y + step_y})) return false;
      cur.x += step_x;
      cur.y += step_y;
      next_bx += step_x;
      next_by += step_y;
      t_max_x = crossing_x();
      t_max_y = crossing_y();
    }
    if (!visit(cur)) return false;
  }
  return true;
}

/// lo + t (hi - lo), kept inside [min(lo, hi), max(lo, hi)] so rounding can
/// never push a point of the segment past its endpoints.
inline double lerp_clamped(double lo, double hi, double t) {
  return std::clamp(lo + t * (hi - lo), std::min(lo, hi), std::max(lo, hi));
}

/// Spacing of the sample lattice used by segment_free.
inline constexpr double kSegmentSampleInterval = 0.01;

/// Collision check for the segment a-b by sampling.
///
/// The segment is split into n = ceil(|b - a| / 0.01) equal steps and the
/// n + 1 points a + (i / n)(b - a) (clamped to the segment's bounding box
/// against rounding) must all lie in free, in-bounds cells. A
/// degenerate segment checks its single cell. Only blocked cells on or beside
/// the exact grid traversal are examined, and within each such cell only the
/// lattice indices whose parameter falls inside the cell, so the cost is
/// linear in the number of cells crossed rather than in the number of samples.
inline bool segment_free(const GridMap& map, const State& a, const State& b) {
  assert(map.contains(a) && map.contains(b));
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  const auto n = static_cast<long>(std::ceil(len / kSegmentSampleInterval));
  auto sample_blocked = [&](long i) {
    const double t = n == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(n);
    const Cell c{static_cast<int>(std::floor(lerp_clamped(a.x, b.x, t))),
                 static_cast<int>(std::floor(lerp_clamped(a.y, b.y, t)))};
    return !map.contains(c) || map.obstacle(c);
  };
  if (n == 0) return !sample_blocked(0);

  const double nd = static_cast<double>(n);
  // Lattice points whose parameter falls in cell c's box, grown slightly so
  // that a point rounded onto a cell corner or edge is still caught.
  auto cell_blocks = [&](Cell c) {
    constexpr double kGrow = 1e-9;
    double t0 = 0.0, t1 = 1.0;
    if (dx != 0.0) {
      const double ta = (c.x - kGrow - a.x) / dx, tb = (c.x + 1.0 + kGrow - a.x) / dx;
      t0 = std::max(t0, std::min(ta, tb));
      t1 = std::min(t1, std::max(ta, tb));
    } else if (a.x < c.x - kGrow || a.x > c.x + 1.0 + kGrow) {
      return false;
    }
    if (dy != 0.0) {
      const double ta = (c.y - kGrow - a.y) / dy, tb = (c.y + 1.0 + kGrow - a.y) / dy;
      t0 = std::max(t0, std::min(ta, tb));
      t1 = std::min(t1, std::max(ta, tb));
    } else if (a.y < c.y - kGrow || a.y > c.y + 1.0 + kGrow) {
      return false;
    }
    if (t0 > t1) return false;
    const long lo = std::max(0L, static_cast<long>(std::floor(t0 * nd)) - 1);
    const long hi = std::min(n, static_cast<long>(std::ceil(t1 * nd)) + 1);
    for (long i = lo; i <= hi; ++i) {
      if (sample_blocked(i)) return true;
    }
    return false;
  };
  auto blocked = [&](Cell c) { return !map.contains(c) || map.obstacle(c); };

  return traverse_segment(a, b, [&](Cell c) {
    for (int oy = -1; oy <= 1; ++oy) {
      for (int ox = -1; ox <= 1; ++ox) {
        const Cell nb{c.x + ox, c.y + oy};
        if (blocked(nb) && cell_blocks(nb)) return false;
      }
    }
    return true;
  });
}

}  // namespace gplan
