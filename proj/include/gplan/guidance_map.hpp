#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gplan/grid_map.hpp"
#include "gplan/image.hpp"
#include "gplan/map_io.hpp"

namespace gplan {

/// Per-cell sampling weight in [0, 1], row-major, same layout as GridMap.
class GuidanceMap {
 public:
  GuidanceMap(int width, int height)
      : width_(width), height_(height),
        weight_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0) {}

  GuidanceMap(int width, int height, std::vector<double> weights)
      : width_(width), height_(height), weight_(std::move(weights)) {
    if (weight_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw std::invalid_argument("GuidanceMap: weight count does not match dimensions");
    }
    for (double w : weight_) {
      if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("GuidanceMap: weight outside [0,1]");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return weight_.size(); }

  double at(Cell c) const { return weight_[index(c)]; }
  double at(int x, int y) const { return at(Cell{x, y}); }
  void set(Cell c, double w) { weight_[index(c)] = std::clamp(w, 0.0, 1.0); }

  const std::vector<double>& weights() const { return weight_; }

  double total_weight() const {
    double s = 0;
    for (double w : weight_) s += w;
    return s;
  }
  std::size_t active_count() const {
    return static_cast<std::size_t>(
        std::count_if(weight_.begin(), weight_.end(), [](double w) { return w > 0.0; }));
  }
  bool usable() const { return active_count() > 0; }

  bool matches(const GridMap& map) const {
    return width_ == map.width() && height_ == map.height();
  }

  friend bool operator==(const GuidanceMap&, const GuidanceMap&) = default;

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  int width_;
  int height_;
  std::vector<double> weight_;
};

/// Green dominance of a pixel in [0, 1]: max(0, G - max(R, B)) / 255. White,
/// black, gray, blue and red all score zero.
inline double greenness(Rgb p) {
  const int g = static_cast<int>(p[1]) - std::max<int>(p[0], p[2]);
  return g > 0 ? g / 255.0 : 0.0;
}

inline GuidanceMap guidance_from_image(const RgbImage& img, const GridMap& map, double threshold) {
  if (img.width() != map.width() || img.height() != map.height()) {
    throw std::invalid_argument("guidance image is " + std::to_string(img.width()) + "x" +
                                std::to_string(img.height()) + " but the map is " +
                                std::to_string(map.width()) + "x" + std::to_string(map.height()));
  }
  GuidanceMap g(map.width(), map.height());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.obstacle(x, y)) continue;
      const double w = greenness(img.at(x, y));
      if (w > threshold) g.set({x, y}, w);
    }
  }
  return g;
}

/// Reads a guidance PNG against its map. Weight is the pixel's greenness where
/// it exceeds `threshold`, else 0; obstacle cells are always 0.
inline GuidanceMap load_guidance(std::span<const std::uint8_t> png_bytes, const GridMap& map,
                                 double threshold = 0.5) {
  return guidance_from_image(decode_png(png_bytes), map, threshold);
}

/// Map image with guidance tinted in: a free cell of weight w becomes
/// (255 - g, 255, 255 - g) with g = round(255 w), so its greenness is exactly
/// g / 255 and it still reads as free space.
inline RgbImage render_guidance(const GuidanceMap& guidance, const GridMap& map) {
  if (!guidance.matches(map)) throw std::invalid_argument("guidance/map dimension mismatch");
  RgbImage img = render_map(map);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.obstacle(x, y)) continue;
      const auto g = static_cast<std::uint8_t>(std::lround(guidance.at(x, y) * 255.0));
      if (g > 0) img.set(x, y, Rgb{static_cast<std::uint8_t>(255 - g), 255,
                                   static_cast<std::uint8_t>(255 - g)});
    }
  }
  return img;
}

inline std::vector<std::uint8_t> save_guidance(const GuidanceMap& guidance, const GridMap& map) {
  return encode_png(render_guidance(guidance, map));
}

/// Marks every cell touched by the polyline.
inline void rasterize_path(std::span<const State> path, std::vector<std::uint8_t>& mask,
                           int width) {
  auto mark = [&](Cell c) {
    mask[static_cast<std::size_t>(c.y) * width + c.x] = 1;
    return true;
  };
  if (path.size() == 1) mark(cell_of(path[0]));
  for (std::size_t i = 1; i < path.size(); ++i) traverse_segment(path[i - 1], path[i], mark);
}

/// Chebyshev dilation by `radius` cells.
inline std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask, int width,
                                        int height, int radius) {
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!mask[static_cast<std::size_t>(y) * width + x]) continue;
      for (int yy = std::max(0, y - radius); yy <= std::min(height - 1, y + radius); ++yy) {
        for (int xx = std::max(0, x - radius); xx <= std::min(width - 1, x + radius); ++xx) {
          out[static_cast<std::size_t>(yy) * width + xx] = 1;
        }
      }
    }
  }
  return out;
}

/// True iff the start and goal cells are both active and joined by a
/// 4-connected chain of active cells.
inline bool region_connects(const GuidanceMap& g, const PlanningTask& task) {
  const Cell s = cell_of(task.start);
  const Cell t = cell_of(task.goal);
  if (!(g.at(s) > 0.0) || !(g.at(t) > 0.0)) return false;
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::deque<Cell> open{s};
  seen[static_cast<std::size_t>(s.y) * g.width() + s.x] = 1;
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  while (!open.empty()) {
    const Cell c = open.front();
    open.pop_front();
    if (c == t) return true;
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + kDx[k], c.y + kDy[k]};
      if (n.x < 0 || n.y < 0 || n.x >= g.width() || n.y >= g.height()) continue;
      auto& flag = seen[static_cast<std::size_t>(n.y) * g.width() + n.x];
      if (flag || !(g.at(n) > 0.0)) continue;
      flag = 1;
      open.push_back(n);
    }
  }
  return false;
}

}  // namespace gplan
