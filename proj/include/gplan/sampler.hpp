#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gplan/grid_map.hpp"
#include "gplan/guidance_map.hpp"
#include "gplan/rng.hpp"

namespace gplan {

class UnusableGuidance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Hybrid sampler. With guidance present, a draw comes from the guidance
/// distribution with probability `bias_factor` (cell chosen proportionally to
/// weight, then uniform within the cell) and is uniform over the map rectangle
/// otherwise. Without guidance every draw is uniform.
class HybridSampler {
 public:
  HybridSampler(const GridMap& map, const GuidanceMap* guidance, double bias_factor)
      : width_(map.width()), height_(map.height()), bias_(bias_factor) {
    if (!(bias_factor >= 0.0 && bias_factor <= 1.0)) {
      throw std::invalid_argument("bias_factor must lie in [0, 1]");
    }
    if (!guidance) return;
    if (!guidance->matches(map)) {
      throw std::invalid_argument("guidance dimensions do not match the map");
    }
    double acc = 0.0;
    const auto& w = guidance->weights();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > 0.0) {
        acc += w[i];
        cumulative_.push_back(acc);
        cells_.push_back(static_cast<std::uint32_t>(i));
      }
    }
    if (cells_.empty() || !std::isfinite(acc)) {
      throw UnusableGuidance("guidance map has no positive weight");
    }
  }

  bool guided() const { return !cells_.empty(); }

  State operator()(Rng& rng) const {
    if (guided() && rng.uniform01() < bias_) return sample_guidance(rng);
    return sample_uniform(rng);
  }

  State sample_uniform(Rng& rng) const {
    return {rng.uniform(0.0, width_), rng.uniform(0.0, height_)};
  }

  State sample_guidance(Rng& rng) const {
    const double target = rng.uniform01() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;
    const std::uint32_t idx = cells_[static_cast<std::size_t>(it - cumulative_.begin())];
    const int cx = static_cast<int>(idx % static_cast<std::uint32_t>(width_));
    const int cy = static_cast<int>(idx / static_cast<std::uint32_t>(width_));
    return {rng.uniform(cx, cx + 1.0), rng.uniform(cy, cy + 1.0)};
  }

 private:
  int width_;
  int height_;
  double bias_;
  std::vector<double> cumulative_;
  std::vector<std::uint32_t> cells_;
};

/// One hybrid draw. Builds the sampling tables on every call; planners hold a
/// HybridSampler instead.
inline State hybrid_sample(const GridMap& map, const GuidanceMap* guidance, double bias_factor,
                           Rng& rng) {
  return HybridSampler(map, guidance, bias_factor)(rng);
}

}  // namespace gplan
