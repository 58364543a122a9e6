// Command-line front end: generate-dataset, plan, benchmark, evaluate.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gplan/gplan.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

gplan::State parse_state(const std::string& text) {
  double x = 0, y = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> x >> comma >> y) || comma != ',') {
    throw gplan::UsageError("expected x,y but got '" + text + "'");
  }
  return {x, y};
}

std::vector<gplan::Family> parse_families(const std::string& csv) {
  std::vector<gplan::Family> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      out.insert(out.end(), gplan::kAllFamilies.begin(), gplan::kAllFamilies.end());
    } else {
      try {
        out.push_back(gplan::parse_family(item));
      } catch (const std::invalid_argument& e) {
        throw gplan::UsageError(e.what());
      }
    }
  }
  if (out.empty()) throw gplan::UsageError("--families selects nothing");
  return out;
}

struct PlannerFlags {
  double step = 2.0;
  double bias = 0.9;
  int max_iterations = 0;
  double goal_radius = 2.0;
  double rewire_scale = 1.5;

  void add_to(CLI::App* app) {
    app->add_option("--step", step, "Steer step size in cells")->capture_default_str();
    app->add_option("--bias", bias, "Probability of drawing from the guidance map")
        ->capture_default_str();
    app->add_option("--max-iters", max_iterations,
                    "Iteration budget (0: 10000 for rrt, 5000 for rrt_star)")
        ->capture_default_str();
    app->add_option("--goal-radius", goal_radius, "Goal region radius in cells")
        ->capture_default_str();
    app->add_option("--rewire-scale", rewire_scale, "RRT* neighbourhood radius scale")
        ->capture_default_str();
  }

  gplan::PlannerConfig config(std::uint64_t seed) const {
    gplan::PlannerConfig c;
    c.step_size = step;
    c.bias_factor = bias;
    c.max_iterations = max_iterations;
    c.goal_radius = goal_radius;
    c.rewire_radius_scale = rewire_scale;
    c.rng_seed = seed;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guided sampling-based planning on occupancy grids"};
  app.require_subcommand(1);
  unsigned workers = gplan::default_workers();
  app.add_option("--threads", workers, "Worker threads")->capture_default_str();

  // generate-dataset
  auto* gen = app.add_subcommand("generate-dataset", "Build a map/task/guidance corpus");
  std::string gen_out, gen_families = "all";
  std::size_t gen_count = 500;
  std::uint64_t gen_seed = 0;
  int gen_runs = gplan::kOracleRuns, gen_res = 128;
  double gen_split = 0.85;
  bool gen_distinct = false;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--families", gen_families, "Comma list of maze,corridor,rooms,junction,columns or all")
      ->capture_default_str();
  gen->add_option("--count", gen_count, "Number of scenarios")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Base seed")->capture_default_str();
  gen->add_option("--runs", gen_runs, "Oracle RRT runs per map")->capture_default_str();
  gen->add_option("--resolution", gen_res, "Map side in cells")->capture_default_str();
  gen->add_option("--split", gen_split, "Train fraction")->capture_default_str();
  gen->add_flag("--distinct-tasks", gen_distinct, "Fresh start/goal for every oracle run");

  // plan
  auto* plan = app.add_subcommand("plan", "Run one seeded planning trial");
  std::string plan_map, plan_task, plan_start, plan_goal, plan_guidance, plan_record, plan_image;
  std::string plan_planner = "rrt";
  std::uint64_t plan_seed = 0;
  double plan_threshold = 0.5;
  PlannerFlags plan_flags;
  plan->add_option("--map", plan_map, "Map PNG")->required();
  plan->add_option("--task", plan_task, "Task overlay PNG (blue start, red goal)");
  plan->add_option("--start", plan_start, "Start as x,y (overrides the task image)");
  plan->add_option("--goal", plan_goal, "Goal as x,y (overrides the task image)");
  plan->add_option("--guidance", plan_guidance, "Guidance PNG");
  plan->add_option("--guidance-threshold", plan_threshold, "Greenness threshold")
      ->capture_default_str();
  plan->add_option("--planner", plan_planner, "rrt or rrt_star")->capture_default_str();
  plan->add_option("--seed", plan_seed, "RNG seed")->capture_default_str();
  plan->add_option("--record", plan_record, "Write the trial record (JSON) here");
  plan->add_option("--image", plan_image, "Write the tree/path overlay PNG here");
  plan_flags.add_to(plan);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Paired uniform vs guided sweep over a corpus");
  std::string bench_corpus, bench_planner = "rrt", bench_source = "oracle", bench_gdir;
  std::string bench_split = "all", bench_csv, bench_summary;
  int bench_seeds = 20;
  std::size_t bench_limit = 0;
  std::uint64_t bench_seed = 0;
  double bench_threshold = 0.5;
  PlannerFlags bench_flags;
  bench->add_option("--corpus", bench_corpus, "Corpus directory")->required();
  bench->add_option("--planner", bench_planner, "rrt, rrt_star or both")->capture_default_str();
  bench->add_option("--guidance", bench_source, "none, oracle or file")->capture_default_str();
  bench->add_option("--guidance-dir", bench_gdir, "Prediction PNGs named <id>.png");
  bench->add_option("--guidance-threshold", bench_threshold, "Greenness threshold")
      ->capture_default_str();
  bench->add_option("--seeds", bench_seeds, "Seeds per instance")->capture_default_str();
  bench->add_option("--split", bench_split, "train, test or all")->capture_default_str();
  bench->add_option("--limit", bench_limit, "Max instances (0 = all)")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Base seed")->capture_default_str();
  bench->add_option("--out", bench_csv, "CSV output path")->required();
  bench->add_option("--summary", bench_summary, "Summary JSON path (default: <out>.summary.json)");
  bench_flags.add_to(bench);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "mIoU / mDice of predicted guidance maps");
  std::string eval_manifest, eval_pred, eval_split = "test", eval_report;
  double eval_threshold = 0.5;
  eval->add_option("--manifest", eval_manifest, "Corpus manifest.jsonl")->required();
  eval->add_option("--predictions", eval_pred, "Directory of <id>.png predictions")->required();
  eval->add_option("--split", eval_split, "train, test or all")->capture_default_str();
  eval->add_option("--threshold", eval_threshold, "Binarization threshold")->capture_default_str();
  eval->add_option("--report", eval_report, "Write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  auto split_filter = [](const std::string& s) -> std::optional<gplan::Split> {
    if (s == "all") return std::nullopt;
    try {
      return gplan::parse_split(s);
    } catch (const std::invalid_argument& e) {
      throw gplan::UsageError(e.what());
    }
  };

  try {
    if (*gen) {
      gplan::GenerateOptions opt;
      opt.out_dir = gen_out;
      opt.families = parse_families(gen_families);
      opt.count = gen_count;
      opt.seed = gen_seed;
      opt.resolution = gen_res;
      opt.corpus.runs_per_map = gen_runs;
      opt.corpus.split_ratio = gen_split;
      opt.corpus.distinct_tasks = gen_distinct;
      opt.corpus.workers = workers;
      if (gen_runs < 1) throw gplan::UsageError("--runs must be at least 1");
      if (!(gen_split >= 0.0 && gen_split <= 1.0)) throw gplan::UsageError("--split must lie in [0, 1]");
      const auto m = gplan::cmd_generate_dataset(opt);
      std::cout << "wrote " << m.entries.size() << " scenarios (" << m.count(gplan::Split::Train)
                << " train, " << m.count(gplan::Split::Test) << " test) to " << gen_out << "\n";
    } else if (*plan) {
      gplan::PlanOptions opt;
      opt.map_path = plan_map;
      opt.task_path = plan_task;
      if (!plan_start.empty()) opt.start = parse_state(plan_start);
      if (!plan_goal.empty()) opt.goal = parse_state(plan_goal);
      opt.guidance_path = plan_guidance;
      opt.guidance_threshold = plan_threshold;
      try {
        opt.planner = gplan::parse_planner(plan_planner);
      } catch (const std::invalid_argument& e) {
        throw gplan::UsageError(e.what());
      }
      opt.config = plan_flags.config(plan_seed);
      if (opt.config.max_iterations <= 0) {
        opt.config.max_iterations = opt.planner == gplan::PlannerKind::Rrt
                                        ? gplan::kDefaultRrtBudget
                                        : gplan::kDefaultRrtStarBudget;
      }
      opt.record_path = plan_record;
      opt.image_path = plan_image;
      const auto res = gplan::cmd_plan(opt);
      if (plan_record.empty()) std::cout << res.record_text;
    } else if (*bench) {
      gplan::BenchmarkConfig cfg;
      cfg.corpus_dir = bench_corpus;
      if (bench_planner == "both") {
        cfg.planners = {gplan::PlannerKind::Rrt, gplan::PlannerKind::RrtStar};
      } else {
        try {
          cfg.planners = {gplan::parse_planner(bench_planner)};
        } catch (const std::invalid_argument& e) {
          throw gplan::UsageError(e.what());
        }
      }
      cfg.guidance_source = gplan::parse_guidance_source(bench_source);
      cfg.guidance_dir = bench_gdir;
      cfg.guidance_threshold = bench_threshold;
      cfg.seeds = bench_seeds;
      cfg.split = split_filter(bench_split);
      cfg.limit = bench_limit;
      cfg.base_seed = bench_seed;
      cfg.planner = bench_flags.config(0);
      cfg.csv_path = bench_csv;
      cfg.summary_path = bench_summary.empty() ? bench_csv + ".summary.json" : bench_summary;
      cfg.workers = workers;
      const auto res = gplan::cmd_benchmark(cfg);
      std::cout << res.summary_text;
    } else if (*eval) {
      gplan::EvaluateOptions opt;
      opt.manifest_path = eval_manifest;
      opt.predictions_dir = eval_pred;
      opt.split = split_filter(eval_split);
      opt.threshold = eval_threshold;
      opt.report_path = eval_report;
      const auto rep = gplan::cmd_evaluate(opt);
      std::printf("scored %zu, missing %zu, mIoU %.6f, mDice %.6f\n", rep.scored.size(),
                  rep.missing.size(), rep.mean_iou, rep.mean_dice);
      for (const auto& id : rep.missing) std::printf("missing prediction: %s\n", id.c_str());
    }
  } catch (const gplan::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
