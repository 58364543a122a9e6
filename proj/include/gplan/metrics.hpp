#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gplan/guidance_map.hpp"
#include "gplan/planner.hpp"

namespace gplan {

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> active;

  BinaryMask() = default;
  BinaryMask(int w, int h) : width(w), height(h), active(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t count() const {
    return static_cast<std::size_t>(std::count_if(active.begin(), active.end(),
                                                  [](std::uint8_t v) { return v != 0; }));
  }
};

/// Cell counts behind iou and dice. a + b == union + intersection always.
struct OverlapCounts {
  std::uint64_t intersection = 0;
  std::uint64_t union_ = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

inline OverlapCounts overlap(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height || a.active.size() != b.active.size()) {
    throw std::invalid_argument("mask dimensions differ");
  }
  OverlapCounts c;
  for (std::size_t i = 0; i < a.active.size(); ++i) {
    const bool x = a.active[i] != 0;
    const bool y = b.active[i] != 0;
    c.a += x;
    c.b += y;
    c.intersection += x && y;
    c.union_ += x || y;
  }
  return c;
}

/// |a ∩ b| / |a ∪ b|; 1 when both masks are empty.
inline double iou(const BinaryMask& a, const BinaryMask& b) {
  const OverlapCounts c = overlap(a, b);
  if (c.union_ == 0) return 1.0;
  return static_cast<double>(c.intersection) / static_cast<double>(c.union_);
}

/// 2|a ∩ b| / (|a| + |b|); 1 when both masks are empty.
inline double dice(const BinaryMask& a, const BinaryMask& b) {
  const OverlapCounts c = overlap(a, b);
  if (c.a + c.b == 0) return 1.0;
  return 2.0 * static_cast<double>(c.intersection) / static_cast<double>(c.a + c.b);
}

/// Active iff weight > threshold.
inline BinaryMask binarize(const GuidanceMap& g, double threshold = 0.5) {
  BinaryMask m(g.width(), g.height());
  const auto& w = g.weights();
  for (std::size_t i = 0; i < w.size(); ++i) m.active[i] = w[i] > threshold ? 1 : 0;
  return m;
}

struct Quartiles {
  double q1 = 0, median = 0, q3 = 0, mean = 0;
};

/// Linear-interpolation quantile on a sorted sample: position p * (n - 1).
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

inline Quartiles describe(std::vector<double> values) {
  Quartiles q;
  if (values.empty()) {
    q.q1 = q.median = q.q3 = q.mean = std::numeric_limits<double>::quiet_NaN();
    return q;
  }
  std::sort(values.begin(), values.end());
  q.q1 = quantile_sorted(values, 0.25);
  q.median = quantile_sorted(values, 0.5);
  q.q3 = quantile_sorted(values, 0.75);
  double s = 0;
  for (double v : values) s += v;
  q.mean = s / static_cast<double>(values.size());
  return q;
}

struct TrialSummary {
  std::size_t n_trials = 0;
  double success_rate = 0.0;
  Quartiles path_length;
  Quartiles sampled_nodes;
};

/// Success rate over all trials; length and node statistics over the
/// successful ones (NaN when none succeeded). Throws on empty input.
inline TrialSummary summarize(std::span<const TrialRecord> trials) {
  if (trials.empty()) throw std::invalid_argument("summarize needs at least one trial");
  std::vector<double> lengths, nodes;
  for (const auto& t : trials) {
    if (!t.found) continue;
    lengths.push_back(t.path_length);
    nodes.push_back(static_cast<double>(t.sampled_nodes));
  }
  TrialSummary s;
  s.n_trials = trials.size();
  s.success_rate = static_cast<double>(lengths.size()) / static_cast<double>(trials.size());
  s.path_length = describe(std::move(lengths));
  s.sampled_nodes = describe(std::move(nodes));
  return s;
}

}  // namespace gplan
