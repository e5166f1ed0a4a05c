#pragma once

// DAG job model and the DAG -> chain (pseudo-job) transformation.

#include <cstddef>
#include <utility>
#include <vector>

namespace spotdag::chainify {

inline constexpr double kTimeTolerance = 1e-9;

/// One task of a job: workload in instance-time units and a parallelism bound.
struct TaskSpec {
  int id = 0;
  double size = 0.0;
  int parallelism = 1;

  /// Fastest possible completion, running on `parallelism` instances throughout.
  double min_exec_time() const { return size / static_cast<double>(parallelism); }

  /// Validating constructor; throws std::invalid_argument on size <= 0 or parallelism < 1.
  static TaskSpec make(int id, double size, int parallelism);

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// Tasks plus precedence edges given as (predecessor, successor) positions into `tasks`.
/// No validation; used directly by the graph algorithms.
struct TaskGraph {
  std::vector<TaskSpec> tasks;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Longest path through the graph measured in min_exec_time.
/// Throws StructuralError on a cycle or an edge referencing a missing task.
double critical_path(const TaskGraph& graph);

/// Positions of `graph.tasks` in a topological order (Kahn, smallest position first).
std::vector<std::size_t> topological_order(const TaskGraph& graph);

class DagJob {
 public:
  /// Edges are (predecessor id, successor id) pairs referring to TaskSpec::id.
  /// Throws StructuralError for cycles or unknown ids, InfeasibleWindow when
  /// deadline - arrival is shorter than the critical path.
  static DagJob make(int id, double arrival, double deadline, std::vector<TaskSpec> tasks,
                     const std::vector<std::pair<int, int>>& edges);

  int id() const { return id_; }
  double arrival() const { return arrival_; }
  double deadline() const { return deadline_; }
  double relative_deadline() const { return deadline_ - arrival_; }
  const std::vector<TaskSpec>& tasks() const { return graph_.tasks; }
  const TaskGraph& graph() const { return graph_; }
  double critical_path_len() const { return critical_path_len_; }
  double total_workload() const;

  /// Edges as predecessor/successor ids, in insertion order.
  std::vector<std::pair<int, int>> edge_ids() const;

  /// True when the precedence relation forces a single total order of all tasks.
  bool is_chain() const;

 private:
  int id_ = 0;
  double arrival_ = 0.0;
  double deadline_ = 0.0;
  TaskGraph graph_;
  double critical_path_len_ = 0.0;
};

double critical_path(const DagJob& dag);

struct PseudoSchedule {
  std::vector<double> start_times;  // per task position, earliest start q_i
  double completion = 0.0;          // max(q_i + e_i)
  std::vector<double> breakpoints;  // sorted distinct {q_i} u {q_i + e_i}
};

PseudoSchedule pseudo_schedule(const DagJob& dag);

struct OriginShare {
  int task_id = 0;
  double workload = 0.0;

  friend bool operator==(const OriginShare&, const OriginShare&) = default;
};

/// Chain-structured job; task k may start only after task k-1 finishes.
struct ChainJob {
  int id = 0;
  double arrival = 0.0;
  double deadline = 0.0;
  std::vector<TaskSpec> tasks;
  std::vector<std::vector<OriginShare>> origin_map;  // parallel to `tasks`

  double total_workload() const;
  double total_min_exec_time() const;
};

/// One pseudo-task per breakpoint interval of the earliest-start schedule.
/// Chains pass through unchanged.
ChainJob transform(const DagJob& dag);

/// The chain viewed as a DAG with edges k -> k+1; tasks keep their ids.
DagJob as_dag(const ChainJob& chain);

}  // namespace spotdag::chainify
