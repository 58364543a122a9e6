// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.
//
//   acceptance [--only name ...] [--expect-fail name ...] [--report file]
//
// Exit status is 0 when every criterion passes, other than those named with
// --expect-fail (which still print their real verdict).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gplan/gplan.hpp"
#include "test_support.hpp"

using namespace gplan;
namespace fs = std::filesystem;

namespace {

// ---- pinned parameters
constexpr int kCollisionPairs = 10000;
constexpr double kCollisionSeconds = 60.0;
constexpr int kMetricPairs = 10000;
constexpr double kMetricTol = 1e-12;
constexpr int kDeterminismConfigs = 20;
constexpr int kTreeTrials = 1000;
constexpr double kTreeCostRelTol = 1e-9;
constexpr int kAnytimeTrials = 100;
constexpr int kAnytimeInterval = 100;
constexpr std::size_t kEvalMaps = 50;
constexpr int kEvalSeeds = 20;
constexpr double kEvalBias = 0.9;
constexpr double kNodeRatio = 0.7;
constexpr double kEfficacySeconds = 600.0;
constexpr int kCompletenessTrials = 100;
constexpr int kCompletenessBudget = 50000;
constexpr double kCompletenessRate = 0.95;
constexpr int kDecoyRadius = 3;
constexpr std::size_t kCorpusMaps = 500;
constexpr double kCorpusConnectivity = 0.95;
constexpr std::uint64_t kSeed = 20240611;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- independent oracles

// 4-connected flood fill through active cells.
bool active_path(const GuidanceMap& g, Cell a, Cell b) {
  const int w = g.width(), h = g.height();
  auto on = [&](Cell c) { return c.x >= 0 && c.y >= 0 && c.x < w && c.y < h && g.at(c) > 0; };
  if (!on(a) || !on(b)) return false;
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  std::deque<Cell> q{a};
  seen[static_cast<std::size_t>(a.y) * w + a.x] = 1;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    if (c == b) return true;
    for (Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}}) {
      if (on(n) && !seen[static_cast<std::size_t>(n.y) * w + n.x]) {
        seen[static_cast<std::size_t>(n.y) * w + n.x] = 1;
        q.push_back(n);
      }
    }
  }
  return false;
}

// Tree checker written against the raw arrays.
std::optional<std::string> audit_tree(const GridMap& map, const State& start, const SearchTree& t) {
  const std::size_t n = t.nodes.size();
  if (n == 0 || t.parent.size() != n || t.cost_to_come.size() != n) return "array sizes";
  if (t.parent[0] != -1 || t.cost_to_come[0] != 0.0 || !(t.nodes[0] == start)) return "root";
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 reaches root
  state[0] = 2;
  for (std::size_t i = 1; i < n; ++i) {
    const int p = t.parent[i];
    if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == i) {
      return fmt("node %zu bad parent %d", i, p);
    }
    const double expect = t.cost_to_come[static_cast<std::size_t>(p)] +
                          std::hypot(t.nodes[i].x - t.nodes[static_cast<std::size_t>(p)].x,
                                     t.nodes[i].y - t.nodes[static_cast<std::size_t>(p)].y);
    if (std::abs(t.cost_to_come[i] - expect) > kTreeCostRelTol * std::max(1.0, expect)) {
      return fmt("node %zu cost %.17g expected %.17g", i, t.cost_to_come[i], expect);
    }
    if (!oracle_ref::supersampled_segment_free(map, t.nodes[static_cast<std::size_t>(p)], t.nodes[i])) {
      return fmt("node %zu edge in collision", i);
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> chain;
    std::size_t c = i;
    while (state[c] == 0) {
      state[c] = 1;
      chain.push_back(c);
      c = static_cast<std::size_t>(t.parent[c]);
    }
    if (state[c] == 1) return fmt("cycle through node %zu", c);
    for (std::size_t k : chain) state[k] = 2;
  }
  return std::nullopt;
}

// ---- shared corpus: built once, reused by the planning criteria

struct Instance {
  CorpusEntry entry;
  GridMap map;
  GuidanceMap guidance;
};

struct Corpus {
  fs::path dir;
  CorpusManifest manifest;
  double build_seconds = 0;
  std::vector<Instance> test;  // first kEvalMaps test-split entries
};

Corpus& corpus() {
  static std::optional<Corpus> c;
  if (c) return *c;
  c.emplace();
  c->dir = fs::temp_directory_path() / "gplan_acceptance_corpus";
  fs::remove_all(c->dir);
  GenerateOptions opt;
  opt.out_dir = c->dir;
  opt.count = kCorpusMaps;
  opt.seed = kSeed;
  const auto t0 = Clock::now();
  c->manifest = cmd_generate_dataset(opt);
  c->build_seconds = seconds_since(t0);
  for (const auto& e : c->manifest.entries) {
    if (e.split != Split::Test) continue;
    GridMap map = load_map(read_file(c->dir / e.map_file));
    GuidanceMap g = load_guidance(read_file(c->dir / e.guidance_file), map);
    c->test.push_back({e, std::move(map), std::move(g)});
    if (c->test.size() == kEvalMaps) break;
  }
  return *c;
}

// ---- criteria

Verdict collision_oracle() {
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int disagreements = 0, blocked = 0;
  double checked_seconds = 0;
  for (int i = 0; i < kCollisionPairs; ++i) {
    const int w = 8 + static_cast<int>(gen() % 57);
    const int h = 8 + static_cast<int>(gen() % 57);
    const GridMap m = oracle_ref::random_map(w, h, 0.01 + 0.2 * u(gen), gen);
    // A quarter of coordinates sit on cell corners or edges.
    auto snap = [&](double v) { return gen() % 4 == 0 ? std::floor(v) : v; };
    const State a{snap(u(gen) * w), snap(u(gen) * h)};
    // Segment lengths spread from sub-cell to map-spanning.
    const double len = std::pow(2.0, -3.0 + 9.0 * u(gen));
    const double ang = 2 * std::numbers::pi * u(gen);
    State b{std::clamp(a.x + len * std::cos(ang), 0.0, std::nextafter(w, 0.0)),
            std::clamp(a.y + len * std::sin(ang), 0.0, std::nextafter(h, 0.0))};
    b = {snap(b.x), snap(b.y)};
    if (gen() % 8 == 0) b.y = a.y;  // axis-aligned
    const auto t0 = Clock::now();
    const bool fast = segment_free(m, a, b);
    checked_seconds += seconds_since(t0);
    const bool ref = oracle_ref::supersampled_segment_free(m, a, b);
    disagreements += fast != ref;
    blocked += !ref;
  }
  return {disagreements == 0 && checked_seconds < kCollisionSeconds,
          fmt("%d pairs (%d blocked), %d disagreements, segment_free time %.2fs (limit %.0fs)",
              kCollisionPairs, blocked, disagreements, checked_seconds, kCollisionSeconds)};
}

Verdict metric_oracle() {
  std::mt19937_64 gen(kSeed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  int identity_breaks = 0;
  for (int i = 0; i < kMetricPairs; ++i) {
    const int w = 1 + static_cast<int>(gen() % 64), h = 1 + static_cast<int>(gen() % 64);
    BinaryMask a(w, h), b(w, h);
    const double da = u(gen) * u(gen), db = u(gen);
    long inter = 0, uni = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < a.active.size(); ++k) {
      a.active[k] = u(gen) < da;
      b.active[k] = u(gen) < db;
      na += a.active[k];
      nb += b.active[k];
      inter += a.active[k] && b.active[k];
      uni += a.active[k] || b.active[k];
    }
    const double ref_iou = uni ? static_cast<double>(inter) / uni : 1.0;
    const double ref_dice = na + nb ? 2.0 * inter / (na + nb) : 1.0;
    const double vi = iou(a, b), vd = dice(a, b);
    worst = std::max({worst, std::abs(vi - ref_iou), std::abs(vd - ref_dice)});
    // dice = 2 iou / (1 + iou) is exact as a rational identity iff
    // |a| + |b| = |a ∪ b| + |a ∩ b|; check it in integers.
    const OverlapCounts c = overlap(a, b);
    identity_breaks += c.a + c.b != c.union_ + c.intersection;
    if (uni) identity_breaks += std::abs(vd - 2 * vi / (1 + vi)) > 4 * std::numeric_limits<double>::epsilon();
  }
  return {worst <= kMetricTol && identity_breaks == 0,
          fmt("%d pairs, max |error| %.3g (tol %.0e), dice identity violations %d", kMetricPairs,
              worst, kMetricTol, identity_breaks)};
}

std::uint64_t hash_tree(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  Fnv1a h;
  for (const auto& f : files) {
    h.update(fs::relative(f, root).string());
    h.update(read_file(f));
  }
  return h.digest();
}

Verdict determinism() {
  std::mt19937_64 gen(kSeed + 2);
  const fs::path base = fs::temp_directory_path() / "gplan_acceptance_det";
  fs::remove_all(base);
  int mismatches = 0;
  std::map<std::string, int> kinds;
  for (int cfg = 0; cfg < kDeterminismConfigs; ++cfg) {
    const int kind = cfg % 3;
    const std::uint64_t seed = gen();
    const Family fam = kAllFamilies[gen() % kAllFamilies.size()];
    const bool star = gen() % 2;
    const bool guided = gen() % 2;
    std::uint64_t digest[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = base / fmt("%02d_%d", cfg, rep);
      GenerateOptions g;
      g.out_dir = dir / "corpus";
      g.families = {fam};
      g.count = kind == 1 ? 3 : 1;
      g.seed = seed;
      g.corpus.runs_per_map = 10;
      g.corpus.workers = rep + 1;  // scheduling must not matter
      const CorpusManifest m = cmd_generate_dataset(g);
      if (kind == 0) {
        PlanOptions p;
        p.map_path = g.out_dir / m.entries[0].map_file;
        p.task_path = g.out_dir / m.entries[0].task_file;
        if (guided) p.guidance_path = g.out_dir / m.entries[0].guidance_file;
        p.planner = star ? PlannerKind::RrtStar : PlannerKind::Rrt;
        p.config.max_iterations = star ? kDefaultRrtStarBudget : kDefaultRrtBudget;
        p.config.rng_seed = seed ^ 0x5eed;
        p.record_path = dir / "record.json";
        p.image_path = dir / "overlay.png";
        cmd_plan(p);
      } else if (kind == 2) {
        BenchmarkConfig b;
        b.corpus_dir = g.out_dir;
        b.planners = {star ? PlannerKind::RrtStar : PlannerKind::Rrt};
        b.seeds = 3;
        b.base_seed = seed;
        b.planner.max_iterations = 2000;
        b.workers = rep + 1;
        b.csv_path = dir / "bench.csv";
        b.summary_path = dir / "bench.summary.json";
        cmd_benchmark(b);
      }
      digest[rep] = hash_tree(dir);
    }
    ++kinds[kind == 0 ? "plan" : kind == 1 ? "generate" : "benchmark"];
    mismatches += digest[0] != digest[1];
  }
  fs::remove_all(base);
  return {mismatches == 0, fmt("%d configs (plan %d, generate %d, benchmark %d), %d hash mismatches",
                               kDeterminismConfigs, kinds["plan"], kinds["generate"],
                               kinds["benchmark"], mismatches)};
}

Verdict tree_invariants() {
  const Corpus& c = corpus();
  std::map<Family, int> per_family;
  int bad = 0, trials = 0;
  std::string first_problem;
  for (int i = 0; i < kTreeTrials; ++i) {
    const Instance& inst = c.test[static_cast<std::size_t>(i) % c.test.size()];
    const bool star = (i / static_cast<int>(c.test.size())) % 2;
    const bool guided = (i / (2 * static_cast<int>(c.test.size()))) % 2;
    PlannerConfig cfg;
    cfg.rng_seed = derive_seed(kSeed + 3, static_cast<std::uint64_t>(i));
    cfg.max_iterations = star ? kDefaultRrtStarBudget : kDefaultRrtBudget;
    const GuidanceMap* g = guided && inst.guidance.usable() ? &inst.guidance : nullptr;
    const PlanOutcome out = star ? run_rrt_star(inst.map, inst.entry.task, g, cfg)
                                 : run_rrt(inst.map, inst.entry.task, g, cfg);
    if (auto problem = audit_tree(inst.map, inst.entry.task.start, out.tree)) {
      if (first_problem.empty()) first_problem = inst.entry.id + ": " + *problem;
      ++bad;
    }
    ++per_family[inst.entry.family];
    ++trials;
  }
  std::string fams;
  for (const auto& [f, n] : per_family) fams += fmt(" %s=%d", to_string(f), n);
  return {bad == 0 && per_family.size() == kAllFamilies.size(),
          fmt("%d trials (rrt/rrt*, uniform/guided;%s), %d violations%s", trials, fams.c_str(), bad,
              first_problem.empty() ? "" : (", first: " + first_problem).c_str())};
}

Verdict anytime() {
  const Corpus& c = corpus();
  int monotone = 0, solved = 0;
  for (int i = 0; i < kAnytimeTrials; ++i) {
    const Instance& inst = c.test[static_cast<std::size_t>(i) % c.test.size()];
    PlannerConfig cfg;
    cfg.rng_seed = derive_seed(kSeed + 4, static_cast<std::uint64_t>(i));
    cfg.max_iterations = kDefaultRrtStarBudget;
    const PlanOutcome out = run_rrt_star(inst.map, inst.entry.task, nullptr, cfg, kAnytimeInterval);
    const auto& h = out.best_cost_history;
    bool ok = h.size() == static_cast<std::size_t>(kDefaultRrtStarBudget / kAnytimeInterval);
    for (std::size_t k = 1; ok && k < h.size(); ++k) ok = h[k] <= h[k - 1];
    if (ok && out.record.found) ok = h.back() == out.record.path_length;
    monotone += ok;
    solved += out.record.found;
  }
  return {monotone == kAnytimeTrials,
          fmt("%d/%d trials non-increasing (%d solved, cost sampled every %d iterations)", monotone,
              kAnytimeTrials, solved, kAnytimeInterval)};
}

struct PairedRun {
  BenchmarkResult result;
  double seconds = 0;
};

PairedRun benchmark(PlannerKind planner) {
  static std::map<PlannerKind, PairedRun> cache;
  if (auto it = cache.find(planner); it != cache.end()) return it->second;
  const Corpus& c = corpus();
  BenchmarkConfig cfg;
  cfg.corpus_dir = c.dir;
  cfg.planners = {planner};
  cfg.guidance_source = GuidanceSource::Oracle;
  cfg.seeds = kEvalSeeds;
  cfg.split = Split::Test;
  cfg.limit = kEvalMaps;
  cfg.base_seed = kSeed + 5;
  cfg.planner.bias_factor = kEvalBias;
  cfg.planner.max_iterations =
      planner == PlannerKind::Rrt ? kDefaultRrtBudget : kDefaultRrtStarBudget;
  const auto t0 = Clock::now();
  PairedRun r{cmd_benchmark(cfg), 0};
  r.seconds = seconds_since(t0);
  return cache[planner] = r;
}

// Medians straight from the rows, independent of summarize(). A row that
// could not run (e.g. an instance whose oracle found no path, leaving nothing
// to guide with) counts as an unsuccessful trial.
struct Side {
  double success = 0, median_nodes = 0, median_length = 0;
  int errors = 0;
};

Side side_of(const BenchmarkResult& r, GuidanceSource src) {
  std::vector<double> nodes, lengths;
  int n = 0, errors = 0;
  for (const auto& row : r.rows) {
    if (row.guidance_source != src) continue;
    ++n;
    errors += !row.error.empty();
    if (!row.record.found) continue;
    nodes.push_back(static_cast<double>(row.record.sampled_nodes));
    lengths.push_back(row.record.path_length);
  }
  Side s;
  s.success = static_cast<double>(nodes.size()) / n;
  s.errors = errors;
  s.median_nodes = nodes.empty() ? NAN : oracle_ref::reference_quantile(nodes, 0.5);
  s.median_length = lengths.empty() ? NAN : oracle_ref::reference_quantile(lengths, 0.5);
  return s;
}

Verdict efficacy() {
  const Corpus& c = corpus();
  const PairedRun run = benchmark(PlannerKind::Rrt);
  const Side plain = side_of(run.result, GuidanceSource::None);
  const Side guided = side_of(run.result, GuidanceSource::Oracle);
  const double ratio = guided.median_nodes / plain.median_nodes;
  const double seconds = run.seconds + c.build_seconds * kEvalMaps / kCorpusMaps;
  return {ratio <= kNodeRatio && guided.success >= plain.success && seconds < kEfficacySeconds,
          fmt("%zu test maps x %d seeds, budget %d: median sampled nodes guided %.1f vs plain %.1f "
              "(ratio %.3f, limit %.1f); success guided %.3f vs plain %.3f (%d guided rows without "
              "usable guidance); %.0fs (limit %.0fs)",
              c.test.size(), kEvalSeeds, kDefaultRrtBudget, guided.median_nodes, plain.median_nodes,
              ratio, kNodeRatio, guided.success, plain.success, guided.errors, seconds,
              kEfficacySeconds)};
}

// Path lengths over (instance, seed) pairs that both sides solved, so the two
// medians describe the same tasks.
struct Paired {
  std::vector<double> plain, guided;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_family;
};

Paired paired_lengths(const BenchmarkResult& r) {
  std::map<std::pair<std::string, std::uint64_t>, const BenchmarkRow*> none;
  for (const auto& row : r.rows) {
    if (row.guidance_source == GuidanceSource::None) none[{row.instance_id, row.seed}] = &row;
  }
  Paired p;
  for (const auto& row : r.rows) {
    if (row.guidance_source != GuidanceSource::Oracle || !row.record.found) continue;
    const BenchmarkRow* other = none.at({row.instance_id, row.seed});
    if (!other->record.found) continue;
    p.plain.push_back(other->record.path_length);
    p.guided.push_back(row.record.path_length);
    auto& f = p.by_family[to_string(row.family)];
    f.first.push_back(other->record.path_length);
    f.second.push_back(row.record.path_length);
  }
  return p;
}

Verdict optimality() {
  const Corpus& c = corpus();
  const PairedRun run = benchmark(PlannerKind::RrtStar);
  const Side plain = side_of(run.result, GuidanceSource::None);
  const Side guided = side_of(run.result, GuidanceSource::Oracle);
  const Paired paired = paired_lengths(run.result);
  std::string fam;
  for (const auto& [name, v] : paired.by_family) {
    fam += fmt(" %s %.1f/%.1f", name.c_str(), oracle_ref::reference_quantile(v.second, 0.5),
               oracle_ref::reference_quantile(v.first, 0.5));
  }
  const double guided_len = oracle_ref::reference_quantile(paired.guided, 0.5);
  const double plain_len = oracle_ref::reference_quantile(paired.plain, 0.5);
  return {guided_len <= plain_len && guided.median_nodes < plain.median_nodes,
          fmt("%zu test maps x %d seeds, budget %d: median length over %zu trials both solved guided "
              "%.3f vs plain %.3f (by family guided/plain:%s); median sampled nodes to first solution "
              "guided %.1f vs plain %.1f; success %.3f vs %.3f; unpaired median length %.3f vs %.3f "
              "(%d guided rows without usable guidance)",
              c.test.size(), kEvalSeeds, kDefaultRrtStarBudget, paired.plain.size(), guided_len,
              plain_len, fam.c_str(), guided.median_nodes, plain.median_nodes, guided.success,
              plain.success, guided.median_length, plain.median_length, guided.errors)};
}

// All guidance weight on a disc around the free cell farthest from the oracle
// region (the true corridor).
GuidanceMap decoy_for(const Instance& inst) {
  const GridMap& m = inst.map;
  std::vector<Cell> truth;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (inst.guidance.at(x, y) > 0) truth.push_back({x, y});
  Cell far{0, 0};
  double best = -1;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.free({x, y})) continue;
      double d = std::numeric_limits<double>::infinity();
      for (const Cell& t : truth) d = std::min(d, static_cast<double>((t.x - x) * (t.x - x) + (t.y - y) * (t.y - y)));
      if (d > best) {
        best = d;
        far = {x, y};
      }
    }
  }
  GuidanceMap g(m.width(), m.height());
  for (Cell c : disc_cells(far, kDecoyRadius)) {
    if (m.contains(c) && m.free(c)) g.set(c, 1.0);
  }
  return g;
}

Verdict completeness() {
  const Corpus& c = corpus();
  std::vector<GuidanceMap> decoys;
  for (const auto& inst : c.test) decoys.push_back(decoy_for(inst));
  int solved = 0;
  std::map<Family, std::pair<int, int>> per_family;
  for (int i = 0; i < kCompletenessTrials; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) % c.test.size();
    const Instance& inst = c.test[k];
    PlannerConfig cfg;
    cfg.bias_factor = kEvalBias;
    cfg.max_iterations = kCompletenessBudget;
    cfg.rng_seed = derive_seed(kSeed + 6, static_cast<std::uint64_t>(i));
    const bool ok = plan_rrt(inst.map, inst.entry.task, &decoys[k], cfg).found;
    solved += ok;
    per_family[inst.entry.family].first += ok;
    per_family[inst.entry.family].second += 1;
  }
  std::string fams;
  for (const auto& [f, p] : per_family) fams += fmt(" %s %d/%d", to_string(f), p.first, p.second);
  const double rate = static_cast<double>(solved) / kCompletenessTrials;
  return {rate >= kCompletenessRate,
          fmt("%d/%d solved within %d iterations at bias %.1f (need %.0f%%);%s", solved,
              kCompletenessTrials, kCompletenessBudget, kEvalBias, 100 * kCompletenessRate,
              fams.c_str())};
}

Verdict corpus_validity() {
  const Corpus& c = corpus();
  std::size_t clean = 0, connected = 0, train = 0;
  for (const auto& e : c.manifest.entries) {
    const GridMap map = load_map(read_file(c.dir / e.map_file));
    const RgbImage gimg = decode_png(read_file(c.dir / e.guidance_file));
    bool ok = gimg.width() == map.width() && gimg.height() == map.height();
    for (int y = 0; ok && y < map.height(); ++y)
      for (int x = 0; ok && x < map.width(); ++x)
        if (map.obstacle(x, y) && gimg.at(x, y) == kGuidanceGreen) ok = false;
    clean += ok;
    connected += active_path(load_guidance(read_file(c.dir / e.guidance_file), map),
                             cell_of(e.task.start), cell_of(e.task.goal));
    train += e.split == Split::Train;
  }
  const std::size_t n = c.manifest.entries.size();
  const std::size_t want_train = kCorpusMaps * 85 / 100;
  const double conn = static_cast<double>(connected) / n;
  return {n == kCorpusMaps && clean == n && conn >= kCorpusConnectivity && train == want_train &&
              n - train == kCorpusMaps - want_train,
          fmt("%zu maps built in %.0fs: %zu/%zu guidance files obstacle-free, connectivity %.3f "
              "(need %.2f), split %zu/%zu (want %zu/%zu)",
              n, c.build_seconds, clean, n, conn, kCorpusConnectivity, train, n - train, want_train,
              kCorpusMaps - want_train)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"collision_oracle", collision_oracle},
      {"metric_oracle", metric_oracle},
      {"determinism", determinism},
      {"corpus_validity", corpus_validity},
      {"tree_invariants", tree_invariants},
      {"rrt_star_anytime", anytime},
      {"guidance_efficacy", efficacy},
      {"optimality_effect", optimality},
      {"completeness_under_bias", completeness},
  };
  std::set<std::string> names;
  for (const auto& c : criteria) names.insert(c.first);

  CLI::App app{"Acceptance criteria"};
  std::vector<std::string> only, expect_fail;
  std::string report;
  app.add_option("--only", only, "Run just these criteria")->check(CLI::IsMember(names));
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; reported but not fatal")
      ->check(CLI::IsMember(names));
  app.add_option("--report", report, "Also write the verdict lines here");
  CLI11_PARSE(app, argc, argv);

  std::string lines;
  int unexpected = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const bool expected_fail =
        std::find(expect_fail.begin(), expect_fail.end(), name) != expect_fail.end();
    std::string line = fmt("%s %s: %s [%.1fs]%s", v.pass ? "PASS" : "FAIL", name.c_str(),
                           v.detail.c_str(), seconds_since(t0),
                           !v.pass && expected_fail ? " (known failure)" : "");
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    lines += line + "\n";
    if (!v.pass && !expected_fail) ++unexpected;
  }
  if (!report.empty()) write_file(report, lines);
  fs::remove_all(fs::temp_directory_path() / "gplan_acceptance_corpus");
  return unexpected == 0 ? 0 : 1;
}
