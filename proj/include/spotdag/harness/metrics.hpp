#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spotdag/harness/simulation.hpp"

namespace spotdag::harness {

/// Money and workload by instance class over a set of jobs. Ledgers add, so
/// seeds can be pooled.
struct CostLedger {
  std::size_t jobs = 0;
  std::size_t missed_deadlines = 0;
  double workload = 0.0;
  double owned_work = 0.0;
  double spot_work = 0.0;
  double ondemand_work = 0.0;
  double spot_cost = 0.0;
  double ondemand_cost = 0.0;
  long owned_alloc_total = 0;

  static CostLedger of(std::span<const JobCost> jobs);

  CostLedger& operator+=(const CostLedger& other);

  double cost() const { return spot_cost + ondemand_cost; }
  /// Average unit cost: total money over total workload.
  double unit_cost() const;
  /// Class workloads add up to the total workload within `rel`.
  bool conserves(double rel = 1e-6) const;
};

/// 1 - alpha / alpha_benchmark.
double cost_improvement(double alpha, double alpha_benchmark);

/// Self-owned instance-time consumed, proposed over benchmark; empty when the
/// benchmark consumed none.
std::optional<double> utilization_ratio(const CostLedger& proposed, const CostLedger& benchmark);

/// Index of the smallest unit cost (first on ties).
std::size_t best_index(std::span<const CostLedger> ledgers);

}  // namespace spotdag::harness
