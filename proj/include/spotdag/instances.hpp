#pragma once

// Per-task instance allocation: self-owned sizing, the flexibility test and the
// slot-by-slot engine that runs spot first and switches to on-demand at the
// turning point.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/market.hpp"

namespace spotdag::instances {

using chainify::TaskSpec;

enum class Phase { Spot, OnDemand, Done };

const char* to_string(Phase phase);

struct TaskRuntimeState {
  TaskSpec task;
  double window_start = 0.0;
  double window_end = 0.0;
  int owned_alloc = 0;
  double remaining = 0.0;  // workload left for spot and on-demand instances
  Phase phase = Phase::Spot;
  std::optional<double> turning_point;
  int spot_request = 0;
  int ondemand_request = 0;
  // On-demand instances held alongside spot before the turning point. Zero is the
  // spot-first composition; other values reproduce mixed first phases.
  int first_phase_ondemand = 0;

  double clock = 0.0;
  std::optional<double> completion;
  double owned_work = 0.0;
  double spot_work = 0.0;
  double ondemand_work = 0.0;

  int cloud_capacity() const { return task.parallelism - owned_alloc; }
};

/// State at the start of the window. The self-owned instances are committed to the
/// whole window, so their share min(z, r * window) is taken off up front.
TaskRuntimeState start_task(const TaskSpec& task, double window_start, double window_end,
                            int owned_alloc, int first_phase_ondemand = 0);

/// max{(z - delta * w * x) / (w * (1 - x)), 0}. Throws DomainError for x >= 1 or x < 0.
double required_self_owned(const TaskSpec& task, double window_size, double x);

/// min{ceil(required_self_owned(beta0)), idle over the window, parallelism}, reserved in the pool.
int allocate_self_owned(const TaskSpec& task, double window_start, double window_end,
                        market::OwnedPool& pool, double beta0);

/// remaining / (delta - r) < window_end - t. Throws InconsistentState when no
/// cloud capacity is left but work remains.
bool has_flexibility(const TaskRuntimeState& state, double t);

/// Sets the spot/on-demand requests for a slot starting at t, switching to the
/// on-demand phase (and recording the turning point) when flexibility is gone.
TaskRuntimeState decide_requests(const TaskRuntimeState& state, double t);

struct SlotGrant {
  int count = 0;              // spot instances granted for the slot
  double availability = 1.0;  // fraction of the slot they actually run
  double price = 0.0;         // spot price billed per instance-time
};

struct SlotUsage {
  double spot_instance_time = 0.0;
  double ondemand_instance_time = 0.0;
};

/// Runs the task over [slot_start, slot_end]. Requests are decided at slot_start;
/// within the slot the turning-point condition is tracked continuously, so the
/// switch to on-demand happens exactly when the remaining work equals what the
/// full cloud capacity can still process before the window closes.
/// Throws SequencingError when the slot is outside the window or not contiguous
/// with the previous one, std::invalid_argument when more spot is granted than requested.
TaskRuntimeState advance_slot(const TaskRuntimeState& state, double slot_start, double slot_end,
                              SlotGrant grant, SlotUsage* usage = nullptr);

struct SlotRecord {
  double time = 0.0;
  int task_id = 0;
  int owned = 0;
  int spot_granted = 0;
  int ondemand = 0;
  double remaining = 0.0;
};

struct TaskOutcome {
  double owned_work = 0.0;
  double spot_work = 0.0;
  double ondemand_work = 0.0;
  double spot_cost = 0.0;
  double ondemand_cost = 0.0;
  std::optional<double> turning_point;
  double completion = 0.0;
  bool met_deadline = true;
};

/// Drives a task through its window slot by slot. `grant(slot_index, requested)`
/// returns a SlotGrant; `on_slot(record)` receives one record per slot.
template <class GrantFn, class SlotFn>
TaskOutcome run_task(TaskRuntimeState state, double slot_width, GrantFn&& grant, SlotFn&& on_slot,
                     bool record_slots) {
  TaskOutcome out;
  double spot_cost = 0.0;
  double ondemand_time = 0.0;
  double t = state.window_start;
  while (state.phase != Phase::Done && t < state.window_end) {
    state = decide_requests(state, t);
    if (state.phase == Phase::Done) break;
    const auto slot = static_cast<std::size_t>(std::floor(t / slot_width + 1e-9));
    double t1 = std::min(static_cast<double>(slot + 1) * slot_width, state.window_end);
    if (!(t1 > t)) t1 = std::min(t + slot_width, state.window_end);

    SlotUsage usage;
    int granted_count = 0;
    if (state.phase == Phase::OnDemand && !record_slots) {
      // On-demand progress does not depend on the market; finish in one step.
      state = advance_slot(state, t, state.window_end, SlotGrant{}, &usage);
      t = state.window_end;
    } else {
      SlotGrant g{};
      if (state.spot_request > 0) {
        g = grant(slot, state.spot_request);
        granted_count = g.count;
      }
      state = advance_slot(state, t, t1, g, &usage);
      spot_cost += usage.spot_instance_time * g.price;
      t = t1;
    }
    ondemand_time += usage.ondemand_instance_time;
    if (record_slots) {
      on_slot(SlotRecord{t, state.task.id, state.owned_alloc, granted_count, state.ondemand_request,
                         state.remaining});
    }
  }

  out.owned_work = state.owned_work;
  out.spot_work = state.spot_work;
  out.ondemand_work = state.ondemand_work;
  out.spot_cost = spot_cost;
  out.ondemand_cost = market::bill(market::InstanceClass::OnDemand, 1.0, ondemand_time);
  out.turning_point = state.turning_point;
  out.completion = state.completion.value_or(state.window_end);
  out.met_deadline = state.phase == Phase::Done || state.remaining <= 1e-9 * std::max(1.0, state.task.size);
  return out;
}

/// run_task against a recorded price trace with the all-or-nothing bid rule.
TaskOutcome execute_task(const TaskRuntimeState& state, const market::SpotMarket& market,
                         std::optional<double> bid, std::vector<SlotRecord>* trace = nullptr);

}  // namespace spotdag::instances
