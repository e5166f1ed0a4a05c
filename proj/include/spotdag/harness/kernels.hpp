#pragma once

// Batch evaluation of many policies over one workload. Each policy run owns its
// pool and results, so the parallel variants distribute runs across threads and
// must agree exactly with the serial ones.

#include <cstdint>
#include <span>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/harness/generator.hpp"
#include "spotdag/harness/metrics.hpp"
#include "spotdag/harness/simulation.hpp"
#include "spotdag/market.hpp"

namespace spotdag::harness {

struct Workload {
  std::vector<chainify::ChainJob> jobs;
  market::SpotMarket market;

  /// Largest relative deadline in the set.
  double max_relative_deadline() const;
};

/// Generates and transforms the job set for `seed` and samples a price trace
/// covering it; job and price streams are independent.
Workload make_workload(GeneratorConfig config, std::uint64_t seed);

Workload make_workload(std::span<const chainify::DagJob> jobs, std::uint64_t market_seed);

/// One ledger per policy: every job of the workload under that policy.
std::vector<CostLedger> sweep_serial(const Workload& w, std::span<const PolicySpec> policies, int owned_capacity);
std::vector<CostLedger> sweep_parallel(const Workload& w, std::span<const PolicySpec> policies, int owned_capacity);

/// matrix[j][k]: cost of job j alone under policy k, divided by its all-on-demand cost.
std::vector<std::vector<double>> counterfactual_matrix_serial(const Workload& w, std::span<const PolicySpec> policies,
                                                              int owned_capacity);
std::vector<std::vector<double>> counterfactual_matrix_parallel(const Workload& w,
                                                                std::span<const PolicySpec> policies,
                                                                int owned_capacity);

}  // namespace spotdag::harness
