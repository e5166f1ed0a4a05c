#pragma once

// Deadline (window) allocation for a chain of tasks.

#include <cstddef>
#include <span>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/policy_tuple.hpp"

namespace spotdag::windows {

using chainify::TaskSpec;

/// Consecutive execution windows: task i runs in [boundaries[i], boundaries[i + 1]].
/// boundaries[0] is the job arrival; window_sizes[i] = min_exec_time + slack_used[i].
struct WindowPlan {
  std::vector<double> window_sizes;
  std::vector<double> boundaries;
  std::vector<double> slack_used;

  std::size_t size() const { return window_sizes.size(); }
  double start(std::size_t i) const { return boundaries[i]; }
  double end(std::size_t i) const { return boundaries[i + 1]; }

  /// Builds boundaries and slack from per-task window sizes.
  static WindowPlan from_sizes(std::span<const TaskSpec> tasks, double arrival,
                               std::vector<double> window_sizes);

  /// Checks every window covers its task's min_exec_time, boundaries increase
  /// and the last boundary is within the deadline (all at `tol`).
  bool is_valid(std::span<const TaskSpec> tasks, double deadline, double tol = 1e-9) const;
};

/// Expected workload processed by spot instances in a window of the given size when
/// spot is available a fraction `rate` of the time. Throws InfeasibleWindow when
/// window < min_exec_time, std::invalid_argument unless rate is in (0, 1].
double spot_capacity(const TaskSpec& task, double window, double rate);

/// Sum of spot_capacity over a plan.
double spot_objective(std::span<const TaskSpec> tasks, const WindowPlan& plan, double rate);

/// Greedy optimal allocation: every task starts at its min_exec_time and the slack
/// (deadline - arrival - sum of min_exec_time) is poured into tasks in non-increasing
/// parallelism order (stable by position), each capped at min_exec_time/rate - min_exec_time.
/// Slack that no task can use is left at the end of the job.
/// Throws InfeasibleWindow (carrying the deficit) when the tasks cannot fit.
WindowPlan dealloc(std::span<const TaskSpec> tasks, double arrival, double deadline, double rate);

/// The rate dealloc is called with: beta0 when self-owned instances exist and
/// beta0 <= beta, beta otherwise.
double planning_rate(const learning::PolicyTuple& policy, int owned_count);

WindowPlan plan_windows(const chainify::ChainJob& job, const learning::PolicyTuple& policy,
                        int owned_count);

}  // namespace spotdag::windows
