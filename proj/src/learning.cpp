#include "spotdag/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "spotdag/errors.hpp"

namespace spotdag::learning {

void PolicyTuple::validate() const {
  if (!(beta0 > 0.0 && beta0 <= 1.0)) throw std::invalid_argument("beta0 must be in (0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0, 1]");
  if (bid && !(*bid >= 0.0)) throw std::invalid_argument("bid must be non-negative");
}

std::string PolicyTuple::label() const {
  char buf[96];
  if (bid) {
    std::snprintf(buf, sizeof buf, "beta0=%.4g;beta=%.4g;bid=%.4g", beta0, beta, *bid);
  } else {
    std::snprintf(buf, sizeof buf, "beta0=%.4g;beta=%.4g;bid=null", beta0, beta);
  }
  return buf;
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("policy set must be non-empty");
  return WeightVector{std::vector<double>(n, 1.0 / static_cast<double>(n)), 1};
}

bool WeightVector::is_valid(double tol) const {
  if (weights.empty()) return false;
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tol;
}

std::size_t pick_policy(const WeightVector& weights, rng::Engine& g) {
  const double u = rng::uniform01(g);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights.weights[k] > 0.0) last_positive = k;
    acc += weights.weights[k];
    if (u < acc) return k;
  }
  return last_positive;  // rounding left u above the accumulated mass
}

double learning_rate(std::size_t n, double d, double t) {
  if (!(t > d)) throw SequencingError("weight update requires t > d");
  return std::sqrt(2.0 * std::log(static_cast<double>(n)) / (d * (t - d)));
}

WeightVector update_weights(const WeightVector& weights, std::span<const double> costs, double t, double d) {
  if (costs.size() != weights.size()) throw std::invalid_argument("one cost per policy is required");
  const double eta = learning_rate(weights.size(), d, t);
  WeightVector next;
  next.kappa = weights.kappa + 1;
  next.weights.resize(weights.size());
  const double floor_cost = *std::min_element(costs.begin(), costs.end());
  // shifting by the minimum cost cancels on renormalization and avoids underflow
  for (std::size_t k = 0; k < weights.size(); ++k) {
    next.weights[k] = weights.weights[k] * std::exp(-eta * (costs[k] - floor_cost));
  }
  const double sum = std::accumulate(next.weights.begin(), next.weights.end(), 0.0);
  for (double& w : next.weights) w /= sum;
  return next;
}

double regret_bound(std::size_t n, double d, std::size_t jobs, double confidence) {
  if (jobs == 0) throw std::invalid_argument("regret bound needs at least one job");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0, 1)");
  return 9.0 * std::sqrt(2.0 * d * std::log(static_cast<double>(n) / confidence) / static_cast<double>(jobs));
}

double counterfactual_cost(const chainify::ChainJob& job, const harness::PolicySpec& policy,
                           const market::SpotMarket& market, int owned_capacity) {
  if (owned_capacity <= 0) return harness::run_job(job, policy, market, nullptr).cost();
  market::OwnedPool pool(owned_capacity);
  return harness::run_job(job, policy, market, &pool).cost();
}

TolaRun run_tola(std::span<const double> arrivals, const std::vector<std::vector<double>>& normalized_costs,
                 double d, rng::Engine& g, bool keep_log) {
  if (normalized_costs.size() != arrivals.size()) throw std::invalid_argument("one cost row per job is required");
  if (arrivals.empty()) throw std::invalid_argument("no jobs to learn from");
  const std::size_t n = normalized_costs.front().size();
  for (const auto& row : normalized_costs) {
    if (row.size() != n) throw std::invalid_argument("cost rows differ in length");
  }
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");

  std::vector<std::size_t> order(arrivals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return arrivals[a] < arrivals[b]; });

  TolaRun run;
  run.picks.assign(arrivals.size(), 0);
  WeightVector w = WeightVector::uniform(n);
  auto log_weights = [&](double t) {
    if (!keep_log) return;
    for (std::size_t k = 0; k < n; ++k) run.log.push_back(WeightLogRow{w.kappa, t, k, w.weights[k]});
  };
  log_weights(0.0);

  // Picks walk `order`; updates walk the same order shifted by d.
  std::size_t next_pick = 0;
  std::size_t next_update = 0;
  while (next_pick < order.size() || next_update < order.size()) {
    const bool pick_first =
        next_pick < order.size() &&
        (next_update >= order.size() || arrivals[order[next_pick]] <= arrivals[order[next_update]] + d);
    if (pick_first) {
      run.picks[order[next_pick]] = pick_policy(w, g);
      ++next_pick;
      continue;
    }
    const std::size_t j = order[next_update++];
    const double t = arrivals[j] + d;
    if (!(t > d)) continue;  // arrivals at time zero never trigger an update
    w = update_weights(w, normalized_costs[j], t, d);
    log_weights(t);
  }
  run.final_weights = std::move(w);
  return run;
}

}  // namespace spotdag::learning
