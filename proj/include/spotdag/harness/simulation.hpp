#pragma once

// End-to-end execution of chain jobs against a price trace and a shared
// self-owned pool.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/instances.hpp"
#include "spotdag/market.hpp"
#include "spotdag/policy_tuple.hpp"
#include "spotdag/windows.hpp"

namespace spotdag::harness {

enum class WindowRule {
  Dealloc,  // optimal allocation at the planning rate
  Even,     // slack split evenly across tasks
  Greedy,   // no windows: spot until the critical path meets the deadline
};

enum class OwnedRule {
  None,         // self-owned instances unused
  Sufficiency,  // ceil of the beta0-sufficient count
  Naive,        // as many as possible
};

struct PolicySpec {
  WindowRule windows = WindowRule::Dealloc;
  OwnedRule owned = OwnedRule::Sufficiency;
  learning::PolicyTuple params;

  /// "proposed(beta0=0.5;beta=0.5;bid=0.24)" style; stable across runs.
  std::string label() const;

  static PolicySpec proposed(const learning::PolicyTuple& params);
  static PolicySpec greedy(std::optional<double> bid);
  static PolicySpec even(std::optional<double> bid, OwnedRule owned = OwnedRule::None);

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct TraceRow {
  int job_id = 0;
  instances::SlotRecord slot;
};

struct JobCost {
  int job_id = 0;
  double workload = 0.0;  // Z_j
  double owned_work = 0.0;
  double spot_work = 0.0;
  double ondemand_work = 0.0;
  double spot_cost = 0.0;
  double ondemand_cost = 0.0;
  double owned_instance_time = 0.0;  // r_i times window, summed
  long owned_alloc_total = 0;        // sum of r_i
  double completion = 0.0;
  bool met_deadline = true;

  double cost() const { return spot_cost + ondemand_cost; }
};

/// Windows the policy assigns to the job (Dealloc or Even; Greedy has none).
windows::WindowPlan job_windows(const chainify::ChainJob& job, const PolicySpec& policy, int owned_capacity);

/// Runs one job alone. `pool` may be null (no self-owned instances); otherwise
/// reservations are made in it task by task, which is only meaningful when no
/// other job shares the pool concurrently.
JobCost run_job(const chainify::ChainJob& job, const PolicySpec& policy, const market::SpotMarket& market,
                market::OwnedPool* pool, std::vector<TraceRow>* trace = nullptr);

/// Shared-pool simulation over a job set. Task starts are processed in
/// (time, job id, task index) order; `policy_of[j]` is the policy of jobs[j].
std::vector<JobCost> simulate(std::span<const chainify::ChainJob> jobs, std::span<const PolicySpec> policy_of,
                              const market::SpotMarket& market, int owned_capacity,
                              std::vector<TraceRow>* trace = nullptr);

/// One policy for every job.
std::vector<JobCost> simulate(std::span<const chainify::ChainJob> jobs, const PolicySpec& policy,
                              const market::SpotMarket& market, int owned_capacity,
                              std::vector<TraceRow>* trace = nullptr);

/// Price trace long enough for every job in the set.
market::SpotMarket market_for(std::span<const chainify::ChainJob> jobs, std::uint64_t seed,
                              const market::PriceModel& model = {});

}  // namespace spotdag::harness
