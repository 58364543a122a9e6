#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gplan/corpus.hpp"
#include "gplan/guidance_map.hpp"
#include "gplan/hash.hpp"
#include "gplan/image.hpp"
#include "gplan/map_io.hpp"
#include "gplan/metrics.hpp"
#include "gplan/parallel.hpp"
#include "gplan/planner.hpp"
#include "gplan/scenario.hpp"

namespace gplan {

/// Bad command-line input, as opposed to a failure while running.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::filesystem::path out_dir;
  std::vector<Family> families{kAllFamilies.begin(), kAllFamilies.end()};
  std::size_t count = 500;
  std::uint64_t seed = 0;
  int resolution = 128;
  FamilyParams params{};
  CorpusOptions corpus{};
};

inline CorpusManifest cmd_generate_dataset(const GenerateOptions& opt) {
  if (opt.count == 0) throw UsageError("--count must be at least 1");
  if (opt.out_dir.empty()) throw UsageError("--out is required");
  if (opt.resolution < 32) throw UsageError("--resolution must be at least 32");
  CorpusOptions copt = opt.corpus;
  copt.split_seed = opt.seed;
  return build_corpus(make_specs(opt.families, opt.count, opt.seed, opt.resolution, opt.params),
                      opt.out_dir, copt);
}

// -------------------------------------------------------------------- plan

inline constexpr Rgb kTreeEdge{255, 170, 0};
inline constexpr Rgb kPathStroke{255, 0, 255};

/// Tree and path drawn over the map (and guidance, when given) with
/// one-pixel, non-antialiased strokes.
inline RgbImage render_overlay(const GridMap& map, const PlanningTask& task,
                               const GuidanceMap* guidance, const PlanOutcome& outcome) {
  RgbImage img = guidance ? render_guidance(*guidance, map) : render_map(map);
  auto stroke = [&](const State& a, const State& b, Rgb color) {
    traverse_segment(a, b, [&](Cell c) {
      if (img.contains(c.x, c.y)) img.set(c.x, c.y, color);
      return true;
    });
  };
  const SearchTree& tree = outcome.tree;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    stroke(tree.nodes[static_cast<std::size_t>(tree.parent[i])], tree.nodes[i], kTreeEdge);
  }
  const auto& path = outcome.record.path;
  for (std::size_t i = 1; i < path.size(); ++i) stroke(path[i - 1], path[i], kPathStroke);
  paint_disc(img, map, cell_of(task.start), kTaskDiscRadius, kStartBlue);
  paint_disc(img, map, cell_of(task.goal), kTaskDiscRadius, kGoalRed);
  return img;
}

inline nlohmann::ordered_json record_json(const TrialRecord& r, PlannerKind planner,
                                          const PlanningTask& task) {
  nlohmann::ordered_json j;
  j["planner"] = to_string(planner);
  j["found"] = r.found;
  j["path_length"] = r.path_length;
  j["sampled_nodes"] = r.sampled_nodes;
  j["tree_size"] = r.tree_size;
  j["iterations_used"] = r.iterations_used;
  j["seed"] = r.seed;
  j["start"] = {task.start.x, task.start.y};
  j["goal"] = {task.goal.x, task.goal.y};
  j["goal_radius"] = task.goal_radius;
  auto path = nlohmann::ordered_json::array();
  for (const State& s : r.path) path.push_back({s.x, s.y});
  j["path"] = std::move(path);
  return j;
}

struct PlanOptions {
  std::filesystem::path map_path;
  std::filesystem::path task_path;  // task overlay image; optional if start/goal given
  std::optional<State> start;
  std::optional<State> goal;
  std::filesystem::path guidance_path;
  double guidance_threshold = 0.5;
  PlannerKind planner = PlannerKind::Rrt;
  PlannerConfig config{};
  std::filesystem::path record_path;
  std::filesystem::path image_path;
};

struct PlanResult {
  TrialRecord record;
  std::string record_text;
  std::vector<std::uint8_t> overlay_png;
};

/// One seeded trial. A task without a path is a normal result (found = false).
inline PlanResult cmd_plan(const PlanOptions& opt) {
  if (opt.map_path.empty()) throw UsageError("--map is required");
  const GridMap map = load_map(read_file(opt.map_path));
  PlanningTask task;
  task.goal_radius = opt.config.goal_radius;
  if (!opt.task_path.empty()) {
    task = decode_task(decode_png(read_file(opt.task_path)), opt.config.goal_radius);
  } else if (!opt.start || !opt.goal) {
    throw UsageError("give --task or both --start and --goal");
  }
  if (opt.start) task.start = *opt.start;
  if (opt.goal) task.goal = *opt.goal;

  std::optional<GuidanceMap> guidance;
  if (!opt.guidance_path.empty()) {
    guidance = load_guidance(read_file(opt.guidance_path), map, opt.guidance_threshold);
  }
  const PlanOutcome outcome =
      run_planner(opt.planner, map, task, guidance ? &*guidance : nullptr, opt.config);

  PlanResult res;
  res.record = outcome.record;
  res.record_text = record_json(outcome.record, opt.planner, task).dump(2) + "\n";
  res.overlay_png = encode_png(render_overlay(map, task, guidance ? &*guidance : nullptr, outcome));
  if (!opt.record_path.empty()) write_file(opt.record_path, res.record_text);
  if (!opt.image_path.empty()) write_file(opt.image_path, res.overlay_png);
  return res;
}

// --------------------------------------------------------------- benchmark

enum class GuidanceSource { None, Oracle, File };

inline const char* to_string(GuidanceSource g) {
  switch (g) {
    case GuidanceSource::None: return "none";
    case GuidanceSource::Oracle: return "oracle";
    case GuidanceSource::File: return "file";
  }
  return "?";
}

inline GuidanceSource parse_guidance_source(const std::string& s) {
  if (s == "none") return GuidanceSource::None;
  if (s == "oracle") return GuidanceSource::Oracle;
  if (s == "file") return GuidanceSource::File;
  throw UsageError("unknown guidance source '" + s + "' (expected none, oracle or file)");
}

inline constexpr int kDefaultRrtBudget = 10000;
inline constexpr int kDefaultRrtStarBudget = 5000;

struct BenchmarkConfig {
  std::filesystem::path corpus_dir;
  std::vector<PlannerKind> planners{PlannerKind::Rrt};
  GuidanceSource guidance_source = GuidanceSource::Oracle;
  std::filesystem::path guidance_dir;  // for GuidanceSource::File: <dir>/<id>.png
  double guidance_threshold = 0.5;
  int seeds = 20;
  std::optional<Split> split;  // restrict instances; all when empty
  std::size_t limit = 0;       // 0 = no limit
  std::uint64_t base_seed = 0;
  PlannerConfig planner{};     // max_iterations <= 0 picks the per-planner default
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
  unsigned workers = default_workers();
};

/// One CSV row. `guidance_source` is "none" for the uniform sampler.
struct BenchmarkRow {
  std::string instance_id;
  Family family = Family::Maze;
  PlannerKind planner = PlannerKind::Rrt;
  GuidanceSource guidance_source = GuidanceSource::None;
  std::uint64_t seed = 0;
  TrialRecord record;
  std::string error;
};

inline constexpr const char* kBenchmarkCsvHeader =
    "instance_id,family,planner,guidance_source,seed,found,path_length,sampled_nodes,tree_size,"
    "error";

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = std::string(kBenchmarkCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += r.instance_id + "," + to_string(r.family) + "," + to_string(r.planner) + "," +
           to_string(r.guidance_source) + "," + std::to_string(r.seed) + "," +
           (r.record.found ? "1" : "0") + "," +
           (r.record.found ? format_double(r.record.path_length) : std::string()) + "," +
           std::to_string(r.record.sampled_nodes) + "," + std::to_string(r.record.tree_size) +
           "," + csv_escape(r.error) + "\n";
  }
  return out;
}

/// Summary key, e.g. "rrt/none" or "rrt_star/oracle".
inline std::string group_key(PlannerKind p, GuidanceSource g) {
  return std::string(to_string(p)) + "/" + to_string(g);
}

inline nlohmann::ordered_json summary_json(const TrialSummary& s) {
  auto q = [](const Quartiles& v) {
    nlohmann::ordered_json j;
    j["median"] = v.median;
    j["mean"] = v.mean;
    j["q1"] = v.q1;
    j["q3"] = v.q3;
    return j;
  };
  nlohmann::ordered_json j;
  j["n_trials"] = s.n_trials;
  j["success_rate"] = s.success_rate;
  j["path_length"] = q(s.path_length);
  j["sampled_nodes"] = q(s.sampled_nodes);
  return j;
}

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  std::map<std::string, TrialSummary> summaries;
  std::string csv;
  std::string summary_text;
};

inline std::map<std::string, TrialSummary> summarize_rows(const std::vector<BenchmarkRow>& rows) {
  std::map<std::string, std::vector<TrialRecord>> groups;
  for (const auto& r : rows) groups[group_key(r.planner, r.guidance_source)].push_back(r.record);
  std::map<std::string, TrialSummary> out;
  for (const auto& [k, v] : groups) out.emplace(k, summarize(v));
  return out;
}

/// Paired uniform/guided trials per instance, planner and seed. Row order is
/// (instance, planner, sampler, seed) regardless of scheduling. A failing
/// trial is recorded in its row and the sweep continues.
inline BenchmarkResult cmd_benchmark(const BenchmarkConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.seeds < 1) throw UsageError("--seeds must be at least 1");
  if (cfg.planners.empty()) throw UsageError("no planner selected");
  if (cfg.guidance_source == GuidanceSource::File && cfg.guidance_dir.empty()) {
    throw UsageError("--guidance-dir is required with --guidance file");
  }
  const CorpusManifest manifest = read_manifest(cfg.corpus_dir / kManifestName);
  std::vector<CorpusEntry> instances;
  for (const auto& e : manifest.entries) {
    if (cfg.split && e.split != *cfg.split) continue;
    instances.push_back(e);
    if (cfg.limit && instances.size() == cfg.limit) break;
  }

  std::vector<GuidanceSource> samplers{GuidanceSource::None};
  if (cfg.guidance_source != GuidanceSource::None) samplers.push_back(cfg.guidance_source);
  const std::size_t per_instance = cfg.planners.size() * samplers.size() * cfg.seeds;

  BenchmarkResult res;
  res.rows.resize(instances.size() * per_instance);
  parallel_for(instances.size(), cfg.workers, [&](std::size_t ii) {
    const CorpusEntry& e = instances[ii];
    BenchmarkRow* rows = res.rows.data() + ii * per_instance;
    std::optional<GridMap> map;
    std::optional<GuidanceMap> guidance;
    std::string map_error, guidance_error;
    try {
      map = load_map(read_file(cfg.corpus_dir / e.map_file));
    } catch (const std::exception& ex) {
      map_error = ex.what();
    }
    if (map && cfg.guidance_source != GuidanceSource::None) {
      const fs::path gpath = cfg.guidance_source == GuidanceSource::Oracle
                                 ? cfg.corpus_dir / e.guidance_file
                                 : cfg.guidance_dir / (e.id + ".png");
      try {
        guidance = load_guidance(read_file(gpath), *map, cfg.guidance_threshold);
      } catch (const std::exception& ex) {
        guidance_error = ex.what();
      }
    }
    const std::uint64_t instance_seed = derive_seed(cfg.base_seed, Fnv1a().update(e.id).digest());
    std::size_t k = 0;
    for (PlannerKind planner : cfg.planners) {
      for (GuidanceSource sampler : samplers) {
        for (int s = 0; s < cfg.seeds; ++s, ++k) {
          BenchmarkRow& row = rows[k];
          row.instance_id = e.id;
          row.family = e.family;
          row.planner = planner;
          row.guidance_source = sampler;
          row.seed = derive_seed(instance_seed, static_cast<std::uint64_t>(s));
          row.record.seed = row.seed;
          if (!map) {
            row.error = map_error;
            continue;
          }
          const bool guided = sampler != GuidanceSource::None;
          if (guided && !guidance) {
            row.error = guidance_error;
            continue;
          }
          PlannerConfig pc = cfg.planner;
          pc.rng_seed = row.seed;
          if (pc.max_iterations <= 0) {
            pc.max_iterations =
                planner == PlannerKind::Rrt ? kDefaultRrtBudget : kDefaultRrtStarBudget;
          }
          try {
            row.record = run_planner(planner, *map, e.task, guided ? &*guidance : nullptr, pc).record;
          } catch (const std::exception& ex) {
            row.error = ex.what();
          }
        }
      }
    }
  });

  res.summaries = summarize_rows(res.rows);
  nlohmann::ordered_json sj;
  for (const auto& [k, s] : res.summaries) sj[k] = summary_json(s);
  res.csv = benchmark_csv(res.rows);
  res.summary_text = sj.dump(2) + "\n";
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, res.csv);
  if (!cfg.summary_path.empty()) write_file(cfg.summary_path, res.summary_text);
  return res;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::filesystem::path manifest_path;
  std::filesystem::path predictions_dir;  // <dir>/<id>.png
  std::optional<Split> split = Split::Test;
  double threshold = 0.5;
  std::filesystem::path report_path;
};

struct EvaluatedEntry {
  std::string id;
  double iou = 0;
  double dice = 0;
};

struct EvaluationReport {
  std::vector<EvaluatedEntry> scored;
  std::vector<std::string> missing;
  double mean_iou = std::numeric_limits<double>::quiet_NaN();
  double mean_dice = std::numeric_limits<double>::quiet_NaN();
  std::string text;
};

/// Per-image foreground IoU and Dice of predictions against the corpus
/// guidance, averaged without weighting. Entries without a readable
/// prediction are listed as missing and left out of the means.
inline EvaluationReport cmd_evaluate(const EvaluateOptions& opt) {
  namespace fs = std::filesystem;
  if (opt.manifest_path.empty() || opt.predictions_dir.empty()) {
    throw UsageError("--manifest and --predictions are required");
  }
  const CorpusManifest manifest = read_manifest(opt.manifest_path);
  const fs::path root = opt.manifest_path.parent_path();
  EvaluationReport rep;
  double si = 0, sd = 0;
  for (const auto& e : manifest.entries) {
    if (opt.split && e.split != *opt.split) continue;
    const GridMap map = load_map(read_file(root / e.map_file));
    const BinaryMask truth =
        binarize(load_guidance(read_file(root / e.guidance_file), map, 0.0), opt.threshold);
    const fs::path pred_path = opt.predictions_dir / (e.id + ".png");
    std::optional<BinaryMask> pred;
    if (fs::exists(pred_path)) {
      try {
        pred = binarize(load_guidance(read_file(pred_path), map, 0.0), opt.threshold);
      } catch (const std::exception&) {
      }
    }
    if (!pred) {
      rep.missing.push_back(e.id);
      continue;
    }
    EvaluatedEntry s{e.id, iou(*pred, truth), dice(*pred, truth)};
    si += s.iou;
    sd += s.dice;
    rep.scored.push_back(s);
  }
  if (!rep.scored.empty()) {
    rep.mean_iou = si / static_cast<double>(rep.scored.size());
    rep.mean_dice = sd / static_cast<double>(rep.scored.size());
  }
  nlohmann::ordered_json j;
  j["scored"] = rep.scored.size();
  j["missing"] = rep.missing;
  j["mIoU"] = rep.mean_iou;
  j["mDice"] = rep.mean_dice;
  auto per = nlohmann::ordered_json::array();
  for (const auto& s : rep.scored) per.push_back({{"id", s.id}, {"iou", s.iou}, {"dice", s.dice}});
  j["entries"] = std::move(per);
  rep.text = j.dump(2) + "\n";
  if (!opt.report_path.empty()) write_file(opt.report_path, rep.text);
  return rep;
}

}  // namespace gplan
