#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gplan/grid_map.hpp"
#include "gplan/rng.hpp"

namespace gplan {

enum class Family { Maze, Corridor, Rooms, Junction, Columns };

inline constexpr std::array<Family, 5> kAllFamilies{Family::Maze, Family::Corridor, Family::Rooms,
                                                    Family::Junction, Family::Columns};

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Maze: return "maze";
    case Family::Corridor: return "corridor";
    case Family::Rooms: return "rooms";
    case Family::Junction: return "junction";
    case Family::Columns: return "columns";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  for (Family f : kAllFamilies) {
    if (s == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown scene family '" + s + "'");
}

/// Knobs for the generators. Each family reads only the fields it needs.
struct FamilyParams {
  int wall_thickness = 2;     // maze, corridor, rooms: [1, 6]
  int door_width = 8;         // maze, corridor, rooms: [3, 32]
  int min_chamber = 16;       // maze: smallest region side that is still divided, [8, 64]
  int passages = 4;           // corridor: number of dividing walls, [1, 12]
  int rooms_x = 3;            // rooms: grid columns, [1, 8]
  int rooms_y = 3;            // rooms: grid rows, [1, 8]
  int extra_door_percent = 30;  // rooms: chance of a door beyond the spanning tree, [0, 100]
  int corridor_count = 4;     // junction: carved corridors, [2, 8]
  int corridor_min_width = 8;   // junction: [3, 32]
  int corridor_max_width = 16;  // junction: [corridor_min_width, 48]
  int column_count = 16;      // columns: [0, 128]
  int column_min_size = 4;    // columns: radius / half-extent, [2, 32]
  int column_max_size = 10;   // columns: [column_min_size, 48]
  int column_gap = 4;         // columns: minimum clearance between shapes, [1, 32]

  void validate() const {
    auto in = [](int v, int lo, int hi, const char* name) {
      if (v < lo || v > hi) {
        throw std::invalid_argument(std::string("family param ") + name + " = " +
                                    std::to_string(v) + " outside [" + std::to_string(lo) +
                                    ", " + std::to_string(hi) + "]");
      }
    };
    in(wall_thickness, 1, 6, "wall_thickness");
    in(door_width, 3, 32, "door_width");
    in(min_chamber, 8, 64, "min_chamber");
    in(passages, 1, 12, "passages");
    in(rooms_x, 1, 8, "rooms_x");
    in(rooms_y, 1, 8, "rooms_y");
    in(extra_door_percent, 0, 100, "extra_door_percent");
    in(corridor_count, 2, 8, "corridor_count");
    in(corridor_min_width, 3, 32, "corridor_min_width");
    in(corridor_max_width, corridor_min_width, 48, "corridor_max_width");
    in(column_count, 0, 128, "column_count");
    in(column_min_size, 2, 32, "column_min_size");
    in(column_max_size, column_min_size, 48, "column_max_size");
    in(column_gap, 1, 32, "column_gap");
  }
};

struct ScenarioSpec {
  Family family = Family::Maze;
  int resolution = 128;
  std::uint64_t rng_seed = 0;
  FamilyParams params;

  void validate() const {
    if (resolution < 32) throw std::invalid_argument("scenario resolution must be at least 32");
    params.validate();
  }
};

namespace detail {

/// Mutable occupancy canvas used while generating.
class Canvas {
 public:
  Canvas(int size, bool fill) : n_(size), occ_(static_cast<std::size_t>(size) * size, fill) {}

  int size() const { return n_; }

  void fill_rect(int x0, int y0, int w, int h, bool obstacle) {
    for (int y = std::max(0, y0); y < std::min(n_, y0 + h); ++y) {
      for (int x = std::max(0, x0); x < std::min(n_, x0 + w); ++x) {
        occ_[static_cast<std::size_t>(y) * n_ + x] = obstacle;
      }
    }
  }

  void set(int x, int y, bool obstacle) {
    if (x >= 0 && y >= 0 && x < n_ && y < n_) occ_[static_cast<std::size_t>(y) * n_ + x] = obstacle;
  }

  GridMap finish() const {
    std::vector<std::uint8_t> occ(occ_.size());
    for (std::size_t i = 0; i < occ_.size(); ++i) occ[i] = occ_[i] ? 1 : 0;
    return GridMap(n_, n_, std::move(occ));
  }

 private:
  int n_;
  std::vector<bool> occ_;
};

struct Rect {
  int x, y, w, h;

  bool overlaps(const Rect& o) const {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
  Rect grown(int m) const { return {x - m, y - m, w + 2 * m, h + 2 * m}; }
};

// Recursive division. Each wall gets one door; a wall position is rejected if
// it would touch an existing door opening, so doors are never sealed.
class MazeBuilder {
 public:
  MazeBuilder(Canvas& canvas, const FamilyParams& p, Rng& rng) : c_(canvas), p_(p), rng_(rng) {}

  void divide(int x0, int y0, int x1, int y1) {
    const int t = p_.wall_thickness;
    const int w = x1 - x0;
    const int h = y1 - y0;
    const bool can_v = w >= 2 * p_.min_chamber + t;
    const bool can_h = h >= 2 * p_.min_chamber + t;
    if (!can_v && !can_h) return;
    bool vertical = can_v && (!can_h || w > h || (w == h && rng_.coin()));
    for (int attempt = 0; attempt < 2; ++attempt, vertical = !vertical) {
      if (vertical ? !can_v : !can_h) continue;
      const int lo = (vertical ? x0 : y0) + p_.min_chamber;
      const int hi = (vertical ? x1 : y1) - p_.min_chamber - t;
      for (int tries = 0; tries < 24; ++tries) {
        const int pos = rng_.range(lo, hi);
        const Rect wall = vertical ? Rect{pos, y0, t, h} : Rect{x0, pos, w, t};
        if (touches_door(wall)) continue;
        c_.fill_rect(wall.x, wall.y, wall.w, wall.h, true);
        const int span = vertical ? h : w;
        const int dw = std::min(p_.door_width, span);
        const int at = rng_.range(0, span - dw);
        const Rect door = vertical ? Rect{pos, y0 + at, t, dw} : Rect{x0 + at, pos, dw, t};
        c_.fill_rect(door.x, door.y, door.w, door.h, false);
        doors_.push_back(door);
        if (vertical) {
          divide(x0, y0, pos, y1);
          divide(pos + t, y0, x1, y1);
        } else {
          divide(x0, y0, x1, pos);
          divide(x0, pos + t, x1, y1);
        }
        return;
      }
    }
  }

 private:
  bool touches_door(const Rect& wall) const {
    const Rect g = wall.grown(1);
    return std::any_of(doors_.begin(), doors_.end(), [&](const Rect& d) { return g.overlaps(d); });
  }

  Canvas& c_;
  const FamilyParams& p_;
  Rng& rng_;
  std::vector<Rect> doors_;
};

inline GridMap make_maze(const ScenarioSpec& s, Rng& rng) {
  const int n = s.resolution;
  const int t = s.params.wall_thickness;
  Canvas c(n, false);
  // Enclosing wall, then division of the interior.
  c.fill_rect(0, 0, n, t, true);
  c.fill_rect(0, n - t, n, t, true);
  c.fill_rect(0, 0, t, n, true);
  c.fill_rect(n - t, 0, t, n, true);
  MazeBuilder(c, s.params, rng).divide(t, t, n - t, n - t);
  return c.finish();
}

// Parallel full-span walls, each pierced by a doorway; doorways alternate ends
// so the free space snakes, with an occasional second doorway mid-wall.
inline GridMap make_corridor(const ScenarioSpec& s, Rng& rng) {
  const auto& p = s.params;
  const int n = s.resolution;
  Canvas c(n, false);
  const bool vertical = rng.coin();
  const int walls = std::min(p.passages, std::max(1, n / (2 * p.wall_thickness + 8)));
  const double pitch = static_cast<double>(n) / (walls + 1);
  const int dw = std::min(p.door_width, n / 2);
  const int margin = std::max(1, p.wall_thickness);
  bool near_end = rng.coin();
  for (int k = 1; k <= walls; ++k) {
    const int jitter = static_cast<int>(pitch / 6);
    const int pos = std::clamp(static_cast<int>(std::lround(k * pitch)) + rng.range(-jitter, jitter),
                               1, n - p.wall_thickness - 1);
    const int end_slot = rng.range(margin, margin + dw);
    const int door_at = near_end ? n - dw - end_slot : end_slot;
    near_end = !near_end;
    if (vertical) {
      c.fill_rect(pos, 0, p.wall_thickness, n, true);
      c.fill_rect(pos, door_at, p.wall_thickness, dw, false);
    } else {
      c.fill_rect(0, pos, n, p.wall_thickness, true);
      c.fill_rect(door_at, pos, dw, p.wall_thickness, false);
    }
    if (rng.below(3) == 0) {
      const int mid = rng.range(n / 3, 2 * n / 3 - dw);
      if (vertical) {
        c.fill_rect(pos, mid, p.wall_thickness, dw, false);
      } else {
        c.fill_rect(mid, pos, dw, p.wall_thickness, false);
      }
    }
  }
  return c.finish();
}

// Grid of chambers. Doors follow a random spanning tree over adjacent chambers
// plus extra doors at `extra_door_percent`.
inline GridMap make_rooms(const ScenarioSpec& s, Rng& rng) {
  const auto& p = s.params;
  const int n = s.resolution;
  const int t = p.wall_thickness;
  const int rx = std::clamp(p.rooms_x, 1, std::max(1, n / (p.door_width + 2 * t + 4)));
  const int ry = std::clamp(p.rooms_y, 1, std::max(1, n / (p.door_width + 2 * t + 4)));
  Canvas c(n, false);

  std::vector<int> xs(static_cast<std::size_t>(rx) + 1), ys(static_cast<std::size_t>(ry) + 1);
  auto cut = [&](std::vector<int>& v, int cells) {
    const double pitch = static_cast<double>(n) / cells;
    v.front() = 0;
    v.back() = n;
    for (int i = 1; i < cells; ++i) {
      const int j = static_cast<int>(pitch / 5);
      v[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(i * pitch)) + rng.range(-j, j);
    }
  };
  cut(xs, rx);
  cut(ys, ry);
  for (int i = 1; i < rx; ++i) c.fill_rect(xs[static_cast<std::size_t>(i)], 0, t, n, true);
  for (int j = 1; j < ry; ++j) c.fill_rect(0, ys[static_cast<std::size_t>(j)], n, t, true);

  auto room = [&](int i, int j) { return j * rx + i; };
  std::vector<int> comp(static_cast<std::size_t>(rx * ry));
  for (std::size_t k = 0; k < comp.size(); ++k) comp[k] = static_cast<int>(k);
  auto find = [&](int a) {
    while (comp[static_cast<std::size_t>(a)] != a) a = comp[static_cast<std::size_t>(a)];
    return a;
  };
  struct Edge { int i, j; bool vertical_wall; };
  std::vector<Edge> edges;
  for (int j = 0; j < ry; ++j) {
    for (int i = 0; i < rx; ++i) {
      if (i + 1 < rx) edges.push_back({i, j, true});
      if (j + 1 < ry) edges.push_back({i, j, false});
    }
  }
  for (std::size_t k = edges.size(); k > 1; --k) {
    std::swap(edges[k - 1], edges[rng.below(k)]);
  }
  auto open_door = [&](const Edge& e) {
    if (e.vertical_wall) {
      const int wx = xs[static_cast<std::size_t>(e.i) + 1];
      const int lo = ys[static_cast<std::size_t>(e.j)] + (e.j > 0 ? t : 0) + 1;
      const int hi = ys[static_cast<std::size_t>(e.j) + 1] - 1;
      const int dw = std::min(p.door_width, std::max(1, hi - lo));
      c.fill_rect(wx, rng.range(lo, std::max(lo, hi - dw)), t, dw, false);
    } else {
      const int wy = ys[static_cast<std::size_t>(e.j) + 1];
      const int lo = xs[static_cast<std::size_t>(e.i)] + (e.i > 0 ? t : 0) + 1;
      const int hi = xs[static_cast<std::size_t>(e.i) + 1] - 1;
      const int dw = std::min(p.door_width, std::max(1, hi - lo));
      c.fill_rect(rng.range(lo, std::max(lo, hi - dw)), wy, dw, t, false);
    }
  };
  for (const Edge& e : edges) {
    const int a = find(room(e.i, e.j));
    const int b = find(e.vertical_wall ? room(e.i + 1, e.j) : room(e.i, e.j + 1));
    if (a != b) {
      comp[static_cast<std::size_t>(a)] = b;
      open_door(e);
    } else if (static_cast<int>(rng.below(100)) < p.extra_door_percent) {
      open_door(e);
    }
  }
  return c.finish();
}

// Solid block with carved corridors: the first runs horizontally edge to edge,
// the second vertically edge to edge, later ones either orientation and may
// stop at a random crossing point.
inline GridMap make_junction(const ScenarioSpec& s, Rng& rng) {
  const auto& p = s.params;
  const int n = s.resolution;
  Canvas c(n, true);
  const int wmax = std::min(p.corridor_max_width, n / 3);
  const int wmin = std::min(p.corridor_min_width, wmax);
  for (int k = 0; k < p.corridor_count; ++k) {
    const bool horizontal = k == 0 ? true : (k == 1 ? false : rng.coin());
    const int w = rng.range(wmin, wmax);
    const int at = rng.range(2, n - w - 2);
    int from = 0, to = n;
    if (k >= 2 && rng.coin()) {
      if (rng.coin()) {
        to = rng.range(n / 3, n);
      } else {
        from = rng.range(0, 2 * n / 3);
      }
    }
    if (horizontal) {
      c.fill_rect(from, at, to - from, w, false);
    } else {
      c.fill_rect(at, from, w, to - from, false);
    }
  }
  return c.finish();
}

struct Shape {
  int kind;  // 0 circle, 1 square, 2 triangle
  double cx, cy, size, angle;

  double bounding_radius() const { return kind == 1 ? size * std::numbers::sqrt2 : size; }

  bool covers(double px, double py) const {
    const double dx = px - cx;
    const double dy = py - cy;
    if (kind == 0) return dx * dx + dy * dy <= size * size;
    const double ca = std::cos(angle), sa = std::sin(angle);
    const double u = ca * dx + sa * dy;
    const double v = -sa * dx + ca * dy;
    if (kind == 1) return std::abs(u) <= size && std::abs(v) <= size;
    // Equilateral triangle inscribed in the circle of radius `size`.
    for (int k = 0; k < 3; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 3.0 + std::numbers::pi / 3.0;
      if (std::cos(th) * u + std::sin(th) * v > size / 2.0) return false;
    }
    return true;
  }
};

inline GridMap make_columns(const ScenarioSpec& s, Rng& rng) {
  const auto& p = s.params;
  const int n = s.resolution;
  Canvas c(n, false);
  std::vector<Shape> placed;
  for (int k = 0; k < p.column_count; ++k) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Shape sh{static_cast<int>(rng.below(3)), 0, 0,
               static_cast<double>(rng.range(p.column_min_size, p.column_max_size)),
               rng.uniform(0.0, std::numbers::pi / 2.0)};
      const double r = sh.bounding_radius();
      if (2 * r + 2 >= n) continue;
      sh.cx = rng.uniform(r, n - r);
      sh.cy = rng.uniform(r, n - r);
      const bool clash = std::any_of(placed.begin(), placed.end(), [&](const Shape& o) {
        const double need = r + o.bounding_radius() + p.column_gap;
        return std::hypot(sh.cx - o.cx, sh.cy - o.cy) < need;
      });
      if (clash) continue;
      placed.push_back(sh);
      break;
    }
  }
  for (const Shape& sh : placed) {
    const int r = static_cast<int>(std::ceil(sh.bounding_radius())) + 1;
    for (int y = static_cast<int>(sh.cy) - r; y <= static_cast<int>(sh.cy) + r; ++y) {
      for (int x = static_cast<int>(sh.cx) - r; x <= static_cast<int>(sh.cx) + r; ++x) {
        if (sh.covers(x + 0.5, y + 0.5)) c.set(x, y, true);
      }
    }
  }
  return c.finish();
}

}  // namespace detail

/// Procedural map of the requested family. Deterministic in the spec.
inline GridMap generate_map(const ScenarioSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.rng_seed, 0x6d6170));
  switch (spec.family) {
    case Family::Maze: return detail::make_maze(spec, rng);
    case Family::Corridor: return detail::make_corridor(spec, rng);
    case Family::Rooms: return detail::make_rooms(spec, rng);
    case Family::Junction: return detail::make_junction(spec, rng);
    case Family::Columns: return detail::make_columns(spec, rng);
  }
  throw std::invalid_argument("unknown family");
}

/// 4-connected components of free space. Obstacle cells get label -1.
inline std::vector<int> label_free_components(const GridMap& map, int* count = nullptr) {
  std::vector<int> label(map.size(), -1);
  int next = 0;
  std::deque<Cell> open;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const Cell seed{x, y};
      if (map.obstacle(seed) || label[map.index(seed)] >= 0) continue;
      label[map.index(seed)] = next;
      open.push_back(seed);
      while (!open.empty()) {
        const Cell c = open.front();
        open.pop_front();
        const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell nb : nbrs) {
          if (!map.contains(nb) || map.obstacle(nb) || label[map.index(nb)] >= 0) continue;
          label[map.index(nb)] = next;
          open.push_back(nb);
        }
      }
      ++next;
    }
  }
  if (count) *count = next;
  return label;
}

class TaskSamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMinSeparationFraction = 0.25;
inline constexpr int kTaskAttempts = 256;

/// Random start/goal at free cell centers, 4-connected through free space and
/// at least a quarter of the map diagonal apart.
///
/// If no draw meets the separation within the retry budget, the goal falls back
/// to the farthest cell connected to a drawn start (so tiny maps still get a
/// task). Throws TaskSamplingError when no two free cells are connected.
inline PlanningTask sample_task(const GridMap& map, std::uint64_t rng_seed,
                                double goal_radius = 2.0) {
  int ncomp = 0;
  const std::vector<int> label = label_free_components(map, &ncomp);
  std::vector<int> comp_size(static_cast<std::size_t>(ncomp), 0);
  for (int l : label) {
    if (l >= 0) ++comp_size[static_cast<std::size_t>(l)];
  }
  // Candidate starts: free cells whose component has a partner cell.
  std::vector<Cell> starts;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const int l = label[map.index({x, y})];
      if (l >= 0 && comp_size[static_cast<std::size_t>(l)] >= 2) starts.push_back({x, y});
    }
  }
  if (starts.empty()) throw TaskSamplingError("no pair of connected free cells");

  Rng rng(rng_seed);
  const double min_sep = kMinSeparationFraction * map.diagonal();
  std::vector<Cell> goals;
  for (int attempt = 0; attempt < kTaskAttempts; ++attempt) {
    const Cell s = starts[rng.below(starts.size())];
    const int l = label[map.index(s)];
    goals.clear();
    for (const Cell g : starts) {
      if (label[map.index(g)] != l) continue;
      if (std::hypot(g.x - s.x, g.y - s.y) >= min_sep) goals.push_back(g);
    }
    if (!goals.empty()) {
      const Cell g = goals[rng.below(goals.size())];
      return {cell_center(s), cell_center(g), goal_radius};
    }
  }
  // Fallback: farthest connected partner of a drawn start.
  const Cell s = starts[rng.below(starts.size())];
  const int l = label[map.index(s)];
  Cell best = s;
  double best_d = -1;
  for (const Cell g : starts) {
    if (label[map.index(g)] != l || g == s) continue;
    const double d = std::hypot(g.x - s.x, g.y - s.y);
    if (d > best_d) {
      best_d = d;
      best = g;
    }
  }
  return {cell_center(s), cell_center(best), goal_radius};
}

}  // namespace gplan
