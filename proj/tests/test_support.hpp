#pragma once

// Test-only generators and independent oracles. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/rng.hpp"

namespace spotdag::testing {

struct RandomDag {
  std::vector<chainify::TaskSpec> tasks;
  std::vector<std::pair<int, int>> edges;  // ids, pred -> succ
};

/// Random DAG over ids 1..l with edges only from lower to higher id; sizes are
/// small rationals-ish so breakpoints coincide now and then.
inline RandomDag random_dag(rng::Engine& g, int max_tasks, double edge_prob = 0.4) {
  RandomDag d;
  const int l = static_cast<int>(rng::uniform_int(g, 1, max_tasks));
  for (int i = 1; i <= l; ++i) {
    const int delta = static_cast<int>(rng::uniform_int(g, 1, 6));
    // e in {0.25, 0.5, ..., 3} half the time, continuous otherwise
    const double e = rng::coin(g) ? 0.25 * static_cast<double>(rng::uniform_int(g, 1, 12)) : rng::uniform(g, 0.1, 3.0);
    d.tasks.push_back(chainify::TaskSpec{i, e * delta, delta});
  }
  for (int a = 1; a <= l; ++a) {
    for (int b = a + 1; b <= l; ++b) {
      if (rng::coin(g, edge_prob)) d.edges.emplace_back(a, b);
    }
  }
  return d;
}

/// Longest path by explicit enumeration of every source-to-sink path (DFS).
inline double enumerate_longest_path(const std::vector<chainify::TaskSpec>& tasks,
                                     const std::vector<std::pair<int, int>>& edges) {
  const auto n = tasks.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<int> indeg(n, 0);
  auto pos = [&](int id) {
    for (std::size_t i = 0; i < n; ++i) {
      if (tasks[i].id == id) return i;
    }
    return n;
  };
  for (auto [a, b] : edges) {
    succ[pos(a)].push_back(pos(b));
    ++indeg[pos(b)];
  }
  double best = 0.0;
  std::function<void(std::size_t, double)> walk = [&](std::size_t v, double acc) {
    acc += tasks[v].size / tasks[v].parallelism;
    if (succ[v].empty()) best = std::max(best, acc);
    for (auto w : succ[v]) walk(w, acc);
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (indeg[v] == 0) walk(v, 0.0);
  }
  return best;
}

/// Expected spot workload of a task with slack x at availability b, written from
/// the linear-then-flat form: min(z, b / (1 - b) * delta * x); z when b = 1.
inline double spot_share_oracle(double z, int delta, double x, double b) {
  if (b >= 1.0) return z;
  return std::min(z, b / (1.0 - b) * delta * x);
}

/// Best objective over every split of `steps` grid units of slack among the
/// tasks (exhaustive over the grid, organised as a max-plus convolution).
inline double grid_search_spot_optimum(const std::vector<chainify::TaskSpec>& tasks, double slack, double rate,
                                       int steps = 200) {
  const double unit = slack / steps;
  const double none = -std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<std::size_t>(steps) + 1, none);  // best[u]: u units handed out
  best[0] = 0.0;
  for (const auto& t : tasks) {
    std::vector<double> next(best.size(), none);
    for (int used = 0; used <= steps; ++used) {
      if (best[static_cast<std::size_t>(used)] == none) continue;
      for (int mine = 0; used + mine <= steps; ++mine) {
        const double v = best[static_cast<std::size_t>(used)] + spot_share_oracle(t.size, t.parallelism, mine * unit, rate);
        auto& cell = next[static_cast<std::size_t>(used + mine)];
        cell = std::max(cell, v);
      }
    }
    best = std::move(next);
  }
  return *std::max_element(best.begin(), best.end());
}

/// Mean of an exponential(mean m) conditioned on [lo, hi], by Simpson's rule.
inline double truncated_exponential_mean(double m, double lo, double hi, int intervals = 20000) {
  auto pdf = [&](double x) { return std::exp(-x / m) / m; };
  const double h = (hi - lo) / intervals;
  double mass = 0.0;
  double moment = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    mass += w * pdf(x);
    moment += w * x * pdf(x);
  }
  return moment / mass;
}

/// CDF of the same conditioned law.
inline double truncated_exponential_cdf(double x, double m, double lo, double hi) {
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (std::exp(-lo / m) - std::exp(-x / m)) / (std::exp(-lo / m) - std::exp(-hi / m));
}

}  // namespace spotdag::testing
