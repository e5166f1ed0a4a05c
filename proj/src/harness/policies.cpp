#include "spotdag/harness/policies.hpp"

#include <algorithm>
#include <cmath>

#include "spotdag/errors.hpp"

namespace spotdag::harness {

JobCost greedy_policy(const chainify::ChainJob& job, const market::SpotMarket& market,
                      std::optional<double> bid, std::vector<TraceRow>* trace) {
  JobCost out;
  out.job_id = job.id;
  out.workload = job.total_workload();

  const std::size_t l = job.tasks.size();
  std::vector<double> left(l);
  double path = 0.0;  // remaining critical path
  for (std::size_t k = 0; k < l; ++k) {
    left[k] = job.tasks[k].size;
    path += job.tasks[k].min_exec_time();
  }
  const double eps = 1e-12 * std::max(1.0, job.deadline);

  std::size_t cur = 0;
  double t = job.arrival;
  bool switched = false;
  while (cur < l) {
    const double gap = (job.deadline - t) - path;
    if (gap <= eps) {
      switched = true;
      break;
    }
    const std::size_t slot = market.slot_of(t);
    const double t1 = std::min(market.slot_start(slot + 1), job.deadline);
    const double price = market.price(slot);
    const int delta_cur = job.tasks[cur].parallelism;
    const bool granted = market::grant_spot(market, slot, bid, delta_cur) == delta_cur;

    if (granted) {
      // Every task of the chain runs at full parallelism while granted, so the
      // gap stays constant; walk across task boundaries inside the slot.
      double dt = t1 - t;
      while (dt > 0.0 && cur < l) {
        const auto& task = job.tasks[cur];
        const double step = std::min(dt, left[cur] / task.parallelism);
        const double work = step * task.parallelism;
        out.spot_work += work;
        out.spot_cost += market::bill(market::InstanceClass::Spot, task.parallelism, step, price);
        left[cur] -= work;
        path -= step;
        dt -= step;
        t += step;
        if (left[cur] <= 1e-12 * std::max(1.0, task.size)) {
          left[cur] = 0.0;
          ++cur;
        }
      }
      if (cur < l) t = t1;
    } else if (gap < t1 - t) {
      t += gap;
      switched = true;
    } else {
      t = t1;
    }
    if (trace) {
      const std::size_t k = std::min(cur, l - 1);
      trace->push_back(TraceRow{job.id, {t, job.tasks[k].id, 0, granted ? delta_cur : 0, 0, left[k]}});
    }
    if (switched) break;
  }

  out.completion = t;
  if (switched) {
    for (std::size_t k = cur; k < l; ++k) {
      const auto& task = job.tasks[k];
      const double duration = left[k] / task.parallelism;
      out.ondemand_work += left[k];
      out.ondemand_cost += market::bill(market::InstanceClass::OnDemand, task.parallelism, duration);
      t += duration;
      if (trace) trace->push_back(TraceRow{job.id, {t, task.id, 0, 0, task.parallelism, 0.0}});
    }
    out.completion = t;
  }
  out.met_deadline = out.completion <= job.deadline + 1e-9 * std::max(1.0, job.deadline);
  return out;
}

windows::WindowPlan even_policy(const chainify::ChainJob& job) {
  const double slack = job.deadline - job.arrival - job.total_min_exec_time();
  if (slack < -1e-9) throw InfeasibleWindow("job window cannot hold the minimum execution times", -slack);
  const double share = job.tasks.empty() ? 0.0 : std::max(slack, 0.0) / static_cast<double>(job.tasks.size());
  std::vector<double> sizes;
  sizes.reserve(job.tasks.size());
  for (const auto& task : job.tasks) sizes.push_back(task.min_exec_time() + share);
  return windows::WindowPlan::from_sizes(job.tasks, job.arrival, std::move(sizes));
}

int naive_self_owned(const chainify::TaskSpec& task, double window_start, double window_end,
                     market::OwnedPool& pool) {
  const int r = std::min(pool.idle_over(window_start, window_end), task.parallelism);
  if (r <= 0) return 0;
  if (!pool.reserve(window_start, window_end, r)) {
    throw InconsistentState("pool refused a reservation within its idle count");
  }
  return r;
}

}  // namespace spotdag::harness
