#include "spotdag/instances.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "spotdag/errors.hpp"

namespace spotdag::instances {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kClockTolerance = 1e-9;

// Work below this is treated as done: relative rounding of z, or what the full task
// processes within the clock tolerance (window ends are differences of absolute times).
double work_epsilon(const TaskSpec& task) {
  return std::max(1e-12 * std::max(1.0, task.size), task.parallelism * kClockTolerance);
}

// Moves `s` forward by `duration` at the given spot and on-demand rates.
void process(TaskRuntimeState& s, double duration, double spot_rate, double ondemand_rate, SlotUsage& usage) {
  const double spot = spot_rate * duration;
  const double ondemand = ondemand_rate * duration;
  s.spot_work += spot;
  s.ondemand_work += ondemand;
  usage.spot_instance_time += spot;
  usage.ondemand_instance_time += ondemand;
  s.remaining -= spot + ondemand;
  if (s.remaining <= work_epsilon(s.task)) {
    // the rounding leftover goes to the class doing the work, so the shares still add up to z
    (ondemand_rate > 0.0 ? s.ondemand_work : s.spot_work) += s.remaining;
    s.remaining = 0.0;
  }
}

void finish(TaskRuntimeState& s, double t) {
  s.phase = Phase::Done;
  s.remaining = 0.0;
  s.spot_request = 0;
  s.ondemand_request = 0;
  s.completion = t;
}

}  // namespace

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Spot:
      return "spot";
    case Phase::OnDemand:
      return "on-demand";
    case Phase::Done:
      return "done";
  }
  return "?";
}

TaskRuntimeState start_task(const TaskSpec& task, double window_start, double window_end,
                            int owned_alloc, int first_phase_ondemand) {
  if (owned_alloc < 0 || owned_alloc > task.parallelism) {
    throw std::invalid_argument("owned allocation outside [0, parallelism]");
  }
  TaskRuntimeState s;
  s.task = task;
  s.window_start = window_start;
  s.window_end = window_end;
  s.owned_alloc = owned_alloc;
  s.first_phase_ondemand = std::clamp(first_phase_ondemand, 0, task.parallelism - owned_alloc);
  s.clock = window_start;

  const double window = window_end - window_start;
  s.owned_work = std::min(task.size, owned_alloc * window);
  s.remaining = task.size - s.owned_work;
  if (owned_alloc > 0 && s.remaining <= work_epsilon(task)) {
    s.owned_work = task.size;
    finish(s, std::min(window_start + task.size / owned_alloc, window_end));
  }
  return s;
}

double required_self_owned(const TaskSpec& task, double window_size, double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("sufficiency argument must be in [0, 1), got " + std::to_string(x));
  }
  if (!(window_size > 0.0)) throw DomainError("window size must be positive");
  const double need = (task.size - task.parallelism * window_size * x) / (window_size * (1.0 - x));
  return std::max(need, 0.0);
}

int allocate_self_owned(const TaskSpec& task, double window_start, double window_end,
                        market::OwnedPool& pool, double beta0) {
  const double f = required_self_owned(task, window_end - window_start, beta0);
  const int wanted = static_cast<int>(std::ceil(f - 1e-9));
  const int r = std::min({wanted, pool.idle_over(window_start, window_end), task.parallelism});
  if (r <= 0) return 0;
  if (!pool.reserve(window_start, window_end, r)) {
    throw InconsistentState("pool refused a reservation within its idle count");
  }
  return r;
}

bool has_flexibility(const TaskRuntimeState& state, double t) {
  const int capacity = state.cloud_capacity();
  if (capacity <= 0) {
    if (state.remaining > 0.0) throw InconsistentState("work remains but no cloud capacity is left");
    return false;
  }
  return state.remaining / capacity < state.window_end - t;
}

TaskRuntimeState decide_requests(const TaskRuntimeState& state, double t) {
  TaskRuntimeState s = state;
  if (s.phase == Phase::Done) return s;
  if (s.remaining <= 0.0) {
    finish(s, t);
    return s;
  }
  const int capacity = s.cloud_capacity();
  if (s.phase == Phase::Spot) {
    if (has_flexibility(s, t)) {
      s.ondemand_request = s.first_phase_ondemand;
      s.spot_request = capacity - s.first_phase_ondemand;
      return s;
    }
    s.phase = Phase::OnDemand;
    s.turning_point = t;
  }
  s.spot_request = 0;
  s.ondemand_request = capacity;
  return s;
}

TaskRuntimeState advance_slot(const TaskRuntimeState& state, double slot_start, double slot_end,
                              SlotGrant grant, SlotUsage* usage) {
  if (slot_start < state.window_start - kClockTolerance || slot_end > state.window_end + kClockTolerance ||
      !(slot_end >= slot_start)) {
    throw SequencingError("slot [" + std::to_string(slot_start) + ", " + std::to_string(slot_end) +
                          "] outside task window");
  }
  if (std::abs(slot_start - state.clock) > kClockTolerance) {
    throw SequencingError("slot does not continue from the task clock");
  }

  SlotUsage local;
  SlotUsage& use = usage ? *usage : local;
  TaskRuntimeState s = decide_requests(state, slot_start);
  s.clock = slot_end;
  if (s.phase == Phase::Done) return s;
  if (grant.count < 0 || grant.count > s.spot_request) {
    throw std::invalid_argument("granted spot exceeds the request");
  }

  const double capacity = s.cloud_capacity();
  const double dt = slot_end - slot_start;
  double t = slot_start;

  if (s.phase == Phase::Spot) {
    const double spot_rate = grant.count * std::clamp(grant.availability, 0.0, 1.0);
    const double rate = spot_rate + s.ondemand_request;
    const double gap = std::max(0.0, (s.window_end - slot_start) * capacity - s.remaining);
    const double closing = capacity - rate;
    const double to_finish = rate > 0.0 ? s.remaining / rate : kInf;
    const double to_turn = closing > 0.0 ? gap / closing : kInf;

    if (to_finish <= std::min(to_turn, dt)) {
      process(s, to_finish, spot_rate, s.ondemand_request, use);
      finish(s, slot_start + to_finish);
      return s;
    }
    if (to_turn >= dt) {
      process(s, dt, spot_rate, s.ondemand_request, use);
      if (s.remaining == 0.0) finish(s, slot_end);
      return s;
    }
    process(s, to_turn, spot_rate, s.ondemand_request, use);
    t = slot_start + to_turn;
    s.phase = Phase::OnDemand;
    s.turning_point = t;
    s.spot_request = 0;
    s.ondemand_request = s.cloud_capacity();
  }

  // On-demand phase: full cloud capacity until the work is done.
  const double left = slot_end - t;
  const double to_finish = s.remaining / capacity;
  if (to_finish <= left) {
    process(s, to_finish, 0.0, capacity, use);
    finish(s, t + to_finish);
  } else {
    process(s, left, 0.0, capacity, use);
    if (s.remaining == 0.0) finish(s, slot_end);
  }
  return s;
}

TaskOutcome execute_task(const TaskRuntimeState& state, const market::SpotMarket& market,
                         std::optional<double> bid, std::vector<SlotRecord>* trace) {
  auto grant = [&](std::size_t slot, int requested) {
    const double price = market.price(slot);
    return SlotGrant{market::grant_spot(market, slot, bid, requested), 1.0, price};
  };
  auto sink = [&](const SlotRecord& r) { trace->push_back(r); };
  return run_task(state, market.slot_width(), grant, sink, trace != nullptr);
}

}  // namespace spotdag::instances
