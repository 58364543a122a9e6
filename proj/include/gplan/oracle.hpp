#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gplan/grid_map.hpp"
#include "gplan/guidance_map.hpp"
#include "gplan/planner.hpp"
#include "gplan/rng.hpp"

namespace gplan {

inline constexpr int kOracleRuns = 50;
inline constexpr int kOracleDilation = 1;

/// Draws a fresh task for each oracle run; used when runs should not share
/// one start/goal pair.
using TaskSource = std::function<PlanningTask(int run, std::uint64_t seed)>;

/// Ground-truth guidance by stacking expert paths.
///
/// Runs unguided RRT `runs` times with seeds derive_seed(config.rng_seed, i),
/// rasterizes every found path, dilates the union by one cell and masks out
/// obstacles. Weights are binary. A result with no active cell means no run
/// succeeded.
inline GuidanceMap expert_stack_oracle(const GridMap& map, const PlanningTask& task, int runs,
                                       const PlannerConfig& config,
                                       const TaskSource& per_run_task = {}) {
  if (runs < 1) throw std::invalid_argument("oracle needs at least one run");
  std::vector<std::uint8_t> marked(map.size(), 0);
  for (int i = 0; i < runs; ++i) {
    PlannerConfig cfg = config;
    cfg.rng_seed = derive_seed(config.rng_seed, static_cast<std::uint64_t>(i));
    const PlanningTask run_task = per_run_task ? per_run_task(i, cfg.rng_seed) : task;
    const TrialRecord rec = plan_rrt(map, run_task, nullptr, cfg);
    if (rec.found) rasterize_path(rec.path, marked, map.width());
  }
  const auto region = dilate(marked, map.width(), map.height(), kOracleDilation);
  GuidanceMap g(map.width(), map.height());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const Cell c{x, y};
      if (region[map.index(c)] && map.free(c)) g.set(c, 1.0);
    }
  }
  return g;
}

}  // namespace gplan
