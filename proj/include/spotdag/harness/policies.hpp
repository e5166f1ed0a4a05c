#pragma once

// Benchmark policies.

#include <optional>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/harness/simulation.hpp"
#include "spotdag/market.hpp"
#include "spotdag/windows.hpp"

namespace spotdag::harness {

/// Greedy: bids for delta_i spot instances on the current task and switches the
/// rest of the job to on-demand once the remaining critical path (sum of
/// remaining/delta over unfinished tasks) reaches the time left to the deadline.
/// The switch is tracked continuously within a slot, so the job ends at the
/// deadline at the latest.
JobCost greedy_policy(const chainify::ChainJob& job, const market::SpotMarket& market,
                      std::optional<double> bid, std::vector<TraceRow>* trace = nullptr);

/// Windows e_i + slack / l. Throws InfeasibleWindow when the deadline is too short.
windows::WindowPlan even_policy(const chainify::ChainJob& job);

/// min{idle over the window, delta}, reserved in the pool.
int naive_self_owned(const chainify::TaskSpec& task, double window_start, double window_end,
                     market::OwnedPool& pool);

}  // namespace spotdag::harness
