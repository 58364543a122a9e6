#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gplan/grid_map.hpp"
#include "gplan/image.hpp"

namespace gplan {

/// Radius of the start/goal discs drawn into task images.
inline constexpr int kTaskDiscRadius = 2;

/// Pixel classification for map images. A pixel is an obstacle iff it is dark
/// (Rec. 601 luma below 128) and achromatic (channel spread below 128). The
/// chroma test keeps pure blue/red/green overlay pixels in free space.
inline bool is_obstacle_pixel(Rgb p) {
  const int lo = std::min({p[0], p[1], p[2]});
  const int hi = std::max({p[0], p[1], p[2]});
  const int luma_x1000 = 299 * p[0] + 587 * p[1] + 114 * p[2];
  return luma_x1000 < 128 * 1000 && (hi - lo) < 128;
}

inline GridMap map_from_image(const RgbImage& img) {
  if (img.empty()) throw ImageError("zero-area map image");
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(img.width()) * img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      occ[static_cast<std::size_t>(y) * img.width() + x] = is_obstacle_pixel(img.at(x, y)) ? 1 : 0;
    }
  }
  return GridMap(img.width(), img.height(), std::move(occ));
}

/// Decodes a PNG map file. Throws ImageError on decode failure or zero area,
/// std::invalid_argument if the raster is below the minimum map size.
inline GridMap load_map(std::span<const std::uint8_t> png_bytes) {
  return map_from_image(decode_png(png_bytes));
}

/// White free space, black obstacles.
inline RgbImage render_map(const GridMap& map) {
  RgbImage img(map.width(), map.height(), kWhite);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.obstacle(x, y)) img.set(x, y, kBlack);
    }
  }
  return img;
}

inline std::vector<Cell> disc_cells(Cell center, int radius) {
  std::vector<Cell> out;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) out.push_back({center.x + dx, center.y + dy});
    }
  }
  return out;
}

/// Paints a filled disc, skipping pixels outside the map or over obstacles so
/// the image still decodes to the same occupancy.
inline void paint_disc(RgbImage& img, const GridMap& map, Cell center, int radius, Rgb color) {
  for (Cell c : disc_cells(center, radius)) {
    if (map.contains(c) && map.free(c)) img.set(c.x, c.y, color);
  }
}

inline RgbImage render_task(const GridMap& map, const PlanningTask& task) {
  validate_task(map, task);
  RgbImage img = render_map(map);
  paint_disc(img, map, cell_of(task.start), kTaskDiscRadius, kStartBlue);
  paint_disc(img, map, cell_of(task.goal), kTaskDiscRadius, kGoalRed);
  return img;
}

/// Map with the start drawn as a blue disc and the goal as a red disc.
/// Throws std::invalid_argument if the task is out of bounds.
inline std::vector<std::uint8_t> save_task_image(const GridMap& map, const PlanningTask& task) {
  return encode_png(render_task(map, task));
}

namespace detail {

// Center of a painted disc. A disc is clipped by obstacles and the image
// border when painted, so each colored pixel is tried as a center and scored
// by how far its own clipped disc is from the observed pixels (symmetric
// difference). An unclipped or clipped paint job scores 0 at its true center.
// Ties go to the candidate closest to the centroid, then scan order.
inline std::optional<Cell> locate_disc(const RgbImage& img, Rgb color) {
  std::vector<Cell> hits;
  double sx = 0, sy = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y) == color) {
        hits.push_back({x, y});
        sx += x;
        sy += y;
      }
    }
  }
  if (hits.empty()) return std::nullopt;
  const double cx = sx / hits.size();
  const double cy = sy / hits.size();
  const auto n_hits = static_cast<long>(hits.size());
  std::optional<Cell> best;
  long best_miss = 0;
  double best_off = 0;
  for (const Cell cand : hits) {
    long painted = 0, matched = 0;
    for (const Cell c : disc_cells(cand, kTaskDiscRadius)) {
      if (!img.contains(c.x, c.y) || is_obstacle_pixel(img.at(c.x, c.y))) continue;
      ++painted;
      matched += img.at(c.x, c.y) == color;
    }
    const long miss = (painted - matched) + (n_hits - matched);
    const double off = (cand.x - cx) * (cand.x - cx) + (cand.y - cy) * (cand.y - cy);
    if (!best || miss < best_miss || (miss == best_miss && off < best_off)) {
      best = cand;
      best_miss = miss;
      best_off = off;
    }
  }
  return best;
}

}  // namespace detail

/// Recovers a task from a task image: start and goal at the centers of the
/// blue and red disc cells. Throws ImageError if either disc is missing.
inline PlanningTask decode_task(const RgbImage& img, double goal_radius) {
  const auto start = detail::locate_disc(img, kStartBlue);
  const auto goal = detail::locate_disc(img, kGoalRed);
  if (!start || !goal) throw ImageError("task image lacks a start or goal disc");
  return {cell_center(*start), cell_center(*goal), goal_radius};
}

}  // namespace gplan
