#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gplan/grid_map.hpp"
#include "gplan/guidance_map.hpp"
#include "gplan/image.hpp"
#include "gplan/map_io.hpp"
#include "gplan/oracle.hpp"
#include "gplan/parallel.hpp"
#include "gplan/planner.hpp"
#include "gplan/rng.hpp"
#include "gplan/scenario.hpp"

namespace gplan {

enum class Split { Train, Test };

inline const char* to_string(Split s) { return s == Split::Train ? "train" : "test"; }

inline Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw std::invalid_argument("unknown split '" + s + "'");
}

/// One manifest line. Paths are relative to the corpus root.
struct CorpusEntry {
  std::string id;
  Family family = Family::Maze;
  std::uint64_t seed = 0;
  Split split = Split::Train;
  std::string map_file;
  std::string task_file;
  std::string guidance_file;
  PlanningTask task;

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

struct CorpusManifest {
  std::vector<CorpusEntry> entries;

  std::size_t count(Split s) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.split == s ? 1 : 0;
    return n;
  }
};

inline constexpr const char* kManifestName = "manifest.jsonl";

inline nlohmann::ordered_json to_json(const CorpusEntry& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  j["family"] = to_string(e.family);
  j["seed"] = e.seed;
  j["split"] = to_string(e.split);
  j["map"] = e.map_file;
  j["task"] = e.task_file;
  j["guidance"] = e.guidance_file;
  j["start"] = {e.task.start.x, e.task.start.y};
  j["goal"] = {e.task.goal.x, e.task.goal.y};
  j["goal_radius"] = e.task.goal_radius;
  return j;
}

inline CorpusEntry entry_from_json(const nlohmann::json& j) {
  CorpusEntry e;
  e.id = j.at("id").get<std::string>();
  e.family = parse_family(j.at("family").get<std::string>());
  e.seed = j.at("seed").get<std::uint64_t>();
  e.split = parse_split(j.at("split").get<std::string>());
  e.map_file = j.at("map").get<std::string>();
  e.task_file = j.at("task").get<std::string>();
  e.guidance_file = j.at("guidance").get<std::string>();
  e.task.start = {j.at("start").at(0).get<double>(), j.at("start").at(1).get<double>()};
  e.task.goal = {j.at("goal").at(0).get<double>(), j.at("goal").at(1).get<double>()};
  e.task.goal_radius = j.at("goal_radius").get<double>();
  return e;
}

inline std::string manifest_text(const CorpusManifest& m) {
  std::string out;
  for (const auto& e : m.entries) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

inline CorpusManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  CorpusManifest m;
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      m.entries.push_back(entry_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& ex) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
    }
    if (!ids.insert(m.entries.back().id).second) {
      throw std::runtime_error(path.string() + ": duplicate id " + m.entries.back().id);
    }
  }
  return m;
}

struct CorpusOptions {
  int runs_per_map = kOracleRuns;
  double split_ratio = 0.85;
  std::uint64_t split_seed = 0;
  /// Oracle planner settings; the seed field is replaced per scenario.
  PlannerConfig oracle_config{};
  /// Draw a fresh task for every oracle run instead of reusing the map's task.
  bool distinct_tasks = false;
  unsigned workers = default_workers();
};

inline std::string scenario_id(std::size_t index, Family f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu_%s", index, to_string(f));
  return buf;
}

/// Number of train entries for n scenarios at the given ratio.
inline std::size_t train_count(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
}

/// Seeded split: a Fisher-Yates shuffle of the indices, the first
/// round(ratio * n) of which are train.
inline std::vector<Split> assign_splits(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw std::invalid_argument("split ratio must lie in [0, 1]");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0x73706c6974));
  for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
  std::vector<Split> out(n, Split::Test);
  const std::size_t n_train = train_count(n, ratio);
  for (std::size_t k = 0; k < n_train; ++k) out[order[k]] = Split::Train;
  return out;
}

struct ScenarioArtifacts {
  GridMap map;
  PlanningTask task;
  GuidanceMap guidance;
};

/// Map, task and oracle guidance for one spec.
inline ScenarioArtifacts build_scenario(const ScenarioSpec& spec, const CorpusOptions& opt) {
  GridMap map = generate_map(spec);
  const double goal_radius = opt.oracle_config.goal_radius;
  PlanningTask task = sample_task(map, derive_seed(spec.rng_seed, 1), goal_radius);
  PlannerConfig cfg = opt.oracle_config;
  cfg.rng_seed = derive_seed(spec.rng_seed, 2);
  TaskSource per_run;
  if (opt.distinct_tasks) {
    per_run = [&](int run, std::uint64_t) {
      return run == 0 ? task
                      : sample_task(map, derive_seed(spec.rng_seed, 1000 + run), goal_radius);
    };
  }
  GuidanceMap g = expert_stack_oracle(map, task, opt.runs_per_map, cfg, per_run);
  return {std::move(map), task, std::move(g)};
}

/// Generates every scenario and writes maps/, tasks/, guidance/ and the
/// manifest under `out_dir`. Output bytes depend only on specs and options.
inline CorpusManifest build_corpus(const std::vector<ScenarioSpec>& specs,
                                   const std::filesystem::path& out_dir,
                                   const CorpusOptions& opt = {}) {
  namespace fs = std::filesystem;
  if (opt.runs_per_map < 1) throw std::invalid_argument("runs_per_map must be at least 1");
  const auto splits = assign_splits(specs.size(), opt.split_ratio, opt.split_seed);
  fs::create_directories(out_dir / "maps");
  fs::create_directories(out_dir / "tasks");
  fs::create_directories(out_dir / "guidance");

  CorpusManifest manifest;
  manifest.entries.resize(specs.size());
  parallel_for(specs.size(), opt.workers, [&](std::size_t i) {
    const ScenarioSpec& spec = specs[i];
    CorpusEntry& e = manifest.entries[i];
    e.id = scenario_id(i, spec.family);
    try {
      const ScenarioArtifacts art = build_scenario(spec, opt);
      e.family = spec.family;
      e.seed = spec.rng_seed;
      e.split = splits[i];
      e.map_file = "maps/" + e.id + ".png";
      e.task_file = "tasks/" + e.id + ".png";
      e.guidance_file = "guidance/" + e.id + ".png";
      e.task = art.task;
      write_file(out_dir / e.map_file, encode_png(render_map(art.map)));
      write_file(out_dir / e.task_file, save_task_image(art.map, art.task));
      write_file(out_dir / e.guidance_file, save_guidance(art.guidance, art.map));
    } catch (const std::exception& ex) {
      throw std::runtime_error("scenario " + e.id + ": " + ex.what());
    }
  });
  write_file(out_dir / kManifestName, manifest_text(manifest));
  return manifest;
}

/// Specs cycling through `families`, seeds derived from `base_seed`.
inline std::vector<ScenarioSpec> make_specs(const std::vector<Family>& families, std::size_t count,
                                            std::uint64_t base_seed, int resolution = 128,
                                            const FamilyParams& params = {}) {
  if (families.empty()) throw std::invalid_argument("no scene families given");
  std::vector<ScenarioSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({families[i % families.size()], resolution, derive_seed(base_seed, i), params});
  }
  return out;
}

}  // namespace gplan
