#include "spotdag/windows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spotdag/errors.hpp"

namespace spotdag::windows {

namespace {

constexpr double kFeasibilityTolerance = 1e-9;

void check_rate(double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("availability rate must be in (0, 1], got " + std::to_string(rate));
  }
}

// Slack beyond which a task's spot share stops growing.
double slack_cap(const TaskSpec& task, double rate) {
  const double e = task.min_exec_time();
  return std::max(0.0, e / rate - e);
}

}  // namespace

WindowPlan WindowPlan::from_sizes(std::span<const TaskSpec> tasks, double arrival,
                                  std::vector<double> window_sizes) {
  WindowPlan plan;
  plan.boundaries.reserve(window_sizes.size() + 1);
  plan.slack_used.reserve(window_sizes.size());
  plan.boundaries.push_back(arrival);
  for (std::size_t i = 0; i < window_sizes.size(); ++i) {
    plan.boundaries.push_back(plan.boundaries.back() + window_sizes[i]);
    plan.slack_used.push_back(window_sizes[i] - tasks[i].min_exec_time());
  }
  plan.window_sizes = std::move(window_sizes);
  return plan;
}

bool WindowPlan::is_valid(std::span<const TaskSpec> tasks, double deadline, double tol) const {
  if (window_sizes.size() != tasks.size() || boundaries.size() != tasks.size() + 1 ||
      slack_used.size() != tasks.size()) {
    return false;
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const double e = tasks[i].min_exec_time();
    if (window_sizes[i] < e - tol) return false;
    if (slack_used[i] < -tol) return false;
    if (std::abs(window_sizes[i] - (e + slack_used[i])) > tol) return false;
    if (std::abs(window_sizes[i] - (boundaries[i + 1] - boundaries[i])) > tol) return false;
    if (!(boundaries[i + 1] > boundaries[i])) return false;
  }
  return boundaries.back() <= deadline + tol;
}

double spot_capacity(const TaskSpec& task, double window, double rate) {
  check_rate(rate);
  const double e = task.min_exec_time();
  if (window < e - 1e-12) {
    throw InfeasibleWindow("window shorter than the task's minimum execution time", e - window);
  }
  if (rate >= 1.0 || window >= e / rate) return task.size;
  const double slack = std::max(0.0, window - e);
  return std::min(task.size, rate / (1.0 - rate) * task.parallelism * slack);
}

double spot_objective(std::span<const TaskSpec> tasks, const WindowPlan& plan, double rate) {
  double total = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    total += spot_capacity(tasks[i], plan.window_sizes[i], rate);
  }
  return total;
}

WindowPlan dealloc(std::span<const TaskSpec> tasks, double arrival, double deadline, double rate) {
  check_rate(rate);
  std::vector<double> sizes(tasks.size());
  double min_total = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    sizes[i] = tasks[i].min_exec_time();
    min_total += sizes[i];
  }
  double slack = (deadline - arrival) - min_total;
  if (slack < -kFeasibilityTolerance) {
    throw InfeasibleWindow("job window cannot hold the minimum execution times", -slack);
  }
  slack = std::max(0.0, slack);

  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tasks[a].parallelism > tasks[b].parallelism;
  });

  for (std::size_t i : order) {
    if (slack <= 0.0) break;
    const double given = std::min(slack, slack_cap(tasks[i], rate));
    sizes[i] += given;
    slack -= given;
  }
  return WindowPlan::from_sizes(tasks, arrival, std::move(sizes));
}

double planning_rate(const learning::PolicyTuple& policy, int owned_count) {
  if (owned_count > 0 && policy.beta0 <= policy.beta) return policy.beta0;
  return policy.beta;
}

WindowPlan plan_windows(const chainify::ChainJob& job, const learning::PolicyTuple& policy,
                        int owned_count) {
  return dealloc(job.tasks, job.arrival, job.deadline, planning_rate(policy, owned_count));
}

}  // namespace spotdag::windows
