#pragma once

// Online policy selection by exponential weights over a finite policy set.

#include <cstddef>
#include <span>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/harness/simulation.hpp"
#include "spotdag/market.hpp"
#include "spotdag/policy_tuple.hpp"
#include "spotdag/rng.hpp"

namespace spotdag::learning {

struct WeightVector {
  std::vector<double> weights;
  long kappa = 1;  // 1 + updates applied so far

  static WeightVector uniform(std::size_t n);

  std::size_t size() const { return weights.size(); }
  /// Non-negative entries summing to 1 within `tol`.
  bool is_valid(double tol = 1e-12) const;
};

/// Categorical draw from the weights.
std::size_t pick_policy(const WeightVector& weights, rng::Engine& g);

/// sqrt(2 ln n / (d (t - d))). Throws SequencingError unless t > d.
double learning_rate(std::size_t n, double d, double t);

/// w'_k = w_k exp(-eta_t c_k), renormalized; kappa + 1. Costs are expected in [0, 1].
/// Throws SequencingError unless t > d, std::invalid_argument on a size mismatch.
WeightVector update_weights(const WeightVector& weights, std::span<const double> costs, double t, double d);

/// 9 sqrt(2 d ln(n / confidence) / jobs).
double regret_bound(std::size_t n, double d, std::size_t jobs, double confidence);

/// Money spent on the job under the policy, replayed alone against a private
/// pool of `owned_capacity` instances. Throws HorizonError if the trace is short.
double counterfactual_cost(const chainify::ChainJob& job, const harness::PolicySpec& policy,
                           const market::SpotMarket& market, int owned_capacity);

struct WeightLogRow {
  long kappa = 0;
  double time = 0.0;
  std::size_t policy = 0;
  double weight = 0.0;
};

struct TolaRun {
  std::vector<std::size_t> picks;  // policy index per job, parallel to the job list
  WeightVector final_weights;
  std::vector<WeightLogRow> log;   // one row per (kappa, policy), starting with the uniform weights
};

/// Replays the learner over jobs with known arrivals. `normalized_costs[j][k]` is
/// the cost of job j under policy k divided by the all-on-demand cost. Job j's
/// costs become available at arrival_j + d; the update fires then (ties broken by
/// job order, after any picks at the same instant) and each arrival picks with the
/// weights in force.
TolaRun run_tola(std::span<const double> arrivals, const std::vector<std::vector<double>>& normalized_costs,
                 double d, rng::Engine& g, bool keep_log = true);

}  // namespace spotdag::learning
