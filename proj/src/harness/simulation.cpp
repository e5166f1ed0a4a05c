#include "spotdag/harness/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "spotdag/errors.hpp"
#include "spotdag/harness/policies.hpp"

namespace spotdag::harness {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string bid_text(const std::optional<double>& bid) { return bid ? fmt(*bid) : std::string("null"); }

class JobRunner {
 public:
  JobRunner(const chainify::ChainJob& job, const PolicySpec& policy, const market::SpotMarket& market,
            int owned_capacity)
      : job_(job), policy_(policy), market_(market) {
    out_.job_id = job.id;
    out_.workload = job.total_workload();
    out_.completion = job.arrival;
    plan_ = job_windows(job, policy, owned_capacity);
  }

  std::size_t task_count() const { return job_.tasks.size(); }
  double task_start(std::size_t k) const { return plan_.start(k); }

  void run_task(std::size_t k, market::OwnedPool* pool, std::vector<TraceRow>* trace) {
    const auto& task = job_.tasks[k];
    const double ws = plan_.start(k);
    const double we = plan_.end(k);
    int r = 0;
    if (pool && pool->capacity() > 0) {
      switch (policy_.owned) {
        case OwnedRule::Sufficiency:
          r = instances::allocate_self_owned(task, ws, we, *pool, policy_.params.beta0);
          break;
        case OwnedRule::Naive:
          r = naive_self_owned(task, ws, we, *pool);
          break;
        case OwnedRule::None:
          break;
      }
    }
    records_.clear();
    const auto state = instances::start_task(task, ws, we, r);
    const auto outcome = instances::execute_task(state, market_, policy_.params.bid, trace ? &records_ : nullptr);
    if (trace) {
      if (r > 0 && records_.empty()) {
        records_.push_back(instances::SlotRecord{outcome.completion, task.id, r, 0, 0, 0.0});
      }
      for (const auto& rec : records_) trace->push_back(TraceRow{job_.id, rec});
    }

    out_.owned_work += outcome.owned_work;
    out_.spot_work += outcome.spot_work;
    out_.ondemand_work += outcome.ondemand_work;
    out_.spot_cost += outcome.spot_cost;
    out_.ondemand_cost += outcome.ondemand_cost;
    out_.owned_instance_time += r * (we - ws);
    out_.owned_alloc_total += r;
    out_.completion = std::max(out_.completion, outcome.completion);
    out_.met_deadline = out_.met_deadline && outcome.met_deadline;
  }

  JobCost finish() {
    out_.met_deadline = out_.met_deadline && out_.completion <= job_.deadline + 1e-9 * std::max(1.0, job_.deadline);
    return out_;
  }

 private:
  const chainify::ChainJob& job_;
  const PolicySpec& policy_;
  const market::SpotMarket& market_;
  windows::WindowPlan plan_;
  JobCost out_;
  std::vector<instances::SlotRecord> records_;
};

}  // namespace

std::string PolicySpec::label() const {
  const std::string bid = "bid=" + bid_text(params.bid);
  switch (windows) {
    case WindowRule::Greedy:
      return "greedy(" + bid + ")";
    case WindowRule::Even:
      return std::string(owned == OwnedRule::Naive ? "even+naive(" : "even(") + bid + ")";
    case WindowRule::Dealloc:
      break;
  }
  const std::string beta = "beta=" + fmt(params.beta);
  switch (owned) {
    case OwnedRule::Sufficiency:
      return "proposed(beta0=" + fmt(params.beta0) + ";" + beta + ";" + bid + ")";
    case OwnedRule::Naive:
      return "dealloc+naive(" + beta + ";" + bid + ")";
    case OwnedRule::None:
      break;
  }
  return "dealloc(" + beta + ";" + bid + ")";
}

PolicySpec PolicySpec::proposed(const learning::PolicyTuple& params) {
  params.validate();
  return PolicySpec{WindowRule::Dealloc, OwnedRule::Sufficiency, params};
}

PolicySpec PolicySpec::greedy(std::optional<double> bid) {
  learning::PolicyTuple p;
  p.bid = bid;
  return PolicySpec{WindowRule::Greedy, OwnedRule::None, p};
}

PolicySpec PolicySpec::even(std::optional<double> bid, OwnedRule owned) {
  learning::PolicyTuple p;
  p.bid = bid;
  return PolicySpec{WindowRule::Even, owned, p};
}

windows::WindowPlan job_windows(const chainify::ChainJob& job, const PolicySpec& policy, int owned_capacity) {
  switch (policy.windows) {
    case WindowRule::Dealloc:
      return windows::plan_windows(job, policy.params, owned_capacity);
    case WindowRule::Even:
      return even_policy(job);
    case WindowRule::Greedy:
      break;
  }
  throw std::invalid_argument("greedy policy has no window plan");
}

JobCost run_job(const chainify::ChainJob& job, const PolicySpec& policy, const market::SpotMarket& market,
                market::OwnedPool* pool, std::vector<TraceRow>* trace) {
  if (policy.windows == WindowRule::Greedy) return greedy_policy(job, market, policy.params.bid, trace);
  JobRunner runner(job, policy, market, pool ? pool->capacity() : 0);
  for (std::size_t k = 0; k < runner.task_count(); ++k) runner.run_task(k, pool, trace);
  return runner.finish();
}

std::vector<JobCost> simulate(std::span<const chainify::ChainJob> jobs, std::span<const PolicySpec> policy_of,
                              const market::SpotMarket& market, int owned_capacity,
                              std::vector<TraceRow>* trace) {
  if (policy_of.size() != jobs.size()) throw std::invalid_argument("one policy per job is required");
  if (owned_capacity < 0) throw std::invalid_argument("owned capacity must be non-negative");

  std::vector<JobCost> out(jobs.size());
  if (owned_capacity == 0) {
    for (std::size_t j = 0; j < jobs.size(); ++j) out[j] = run_job(jobs[j], policy_of[j], market, nullptr, trace);
    return out;
  }

  market::OwnedPool pool(owned_capacity);
  std::vector<std::optional<JobRunner>> runners(jobs.size());
  using Event = std::tuple<double, int, std::size_t, std::size_t>;  // time, job id, task, job index
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (policy_of[j].windows == WindowRule::Greedy) {
      events.emplace(jobs[j].arrival, jobs[j].id, 0, j);
      continue;
    }
    runners[j].emplace(jobs[j], policy_of[j], market, owned_capacity);
    if (runners[j]->task_count() == 0) {
      out[j] = runners[j]->finish();
      continue;
    }
    events.emplace(runners[j]->task_start(0), jobs[j].id, 0, j);
  }

  while (!events.empty()) {
    const auto [t, id, k, j] = events.top();
    events.pop();
    pool.release_before(t);
    if (!runners[j]) {
      out[j] = greedy_policy(jobs[j], market, policy_of[j].params.bid, trace);
      continue;
    }
    runners[j]->run_task(k, &pool, trace);
    if (k + 1 < runners[j]->task_count()) {
      events.emplace(runners[j]->task_start(k + 1), id, k + 1, j);
    } else {
      out[j] = runners[j]->finish();
    }
  }
  if (trace) {
    std::stable_sort(trace->begin(), trace->end(),
                     [](const TraceRow& a, const TraceRow& b) { return a.job_id < b.job_id; });
  }
  return out;
}

std::vector<JobCost> simulate(std::span<const chainify::ChainJob> jobs, const PolicySpec& policy,
                              const market::SpotMarket& market, int owned_capacity,
                              std::vector<TraceRow>* trace) {
  const std::vector<PolicySpec> all(jobs.size(), policy);
  return simulate(jobs, all, market, owned_capacity, trace);
}

market::SpotMarket market_for(std::span<const chainify::ChainJob> jobs, std::uint64_t seed,
                              const market::PriceModel& model) {
  double horizon = 1.0;
  for (const auto& job : jobs) horizon = std::max(horizon, job.deadline + 1.0);
  return market::SpotMarket::sample(seed, horizon, model);
}

}  // namespace spotdag::harness
