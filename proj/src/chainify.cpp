#include "spotdag/chainify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>

#include "spotdag/errors.hpp"

namespace spotdag::chainify {

TaskSpec TaskSpec::make(int id, double size, int parallelism) {
  if (!(size > 0.0) || !std::isfinite(size)) {
    throw std::invalid_argument("task " + std::to_string(id) + ": size must be positive");
  }
  if (parallelism < 1) {
    throw std::invalid_argument("task " + std::to_string(id) + ": parallelism must be >= 1");
  }
  return TaskSpec{id, size, parallelism};
}

std::vector<std::size_t> topological_order(const TaskGraph& graph) {
  const std::size_t n = graph.tasks.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [from, to] : graph.edges) {
    if (from >= n || to >= n) {
      throw StructuralError("edge references a task outside the graph");
    }
    succ[from].push_back(to);
    ++indegree[to];
  }

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t j : succ[i]) {
      if (--indegree[j] == 0) ready.push(j);
    }
  }
  if (order.size() != n) {
    throw StructuralError("precedence graph contains a cycle");
  }
  return order;
}

namespace {

// Earliest start offsets (relative to time 0) under full parallelism.
std::vector<double> earliest_offsets(const TaskGraph& graph, const std::vector<std::size_t>& order) {
  const std::size_t n = graph.tasks.size();
  std::vector<std::vector<std::size_t>> pred(n);
  for (const auto& [from, to] : graph.edges) pred[to].push_back(from);

  std::vector<double> start(n, 0.0);
  for (std::size_t i : order) {
    double q = 0.0;
    for (std::size_t p : pred[i]) q = std::max(q, start[p] + graph.tasks[p].min_exec_time());
    start[i] = q;
  }
  return start;
}

}  // namespace

double critical_path(const TaskGraph& graph) {
  const auto order = topological_order(graph);
  const auto start = earliest_offsets(graph, order);
  double finish = 0.0;
  for (std::size_t i = 0; i < graph.tasks.size(); ++i) {
    finish = std::max(finish, start[i] + graph.tasks[i].min_exec_time());
  }
  return finish;
}

DagJob DagJob::make(int id, double arrival, double deadline, std::vector<TaskSpec> tasks,
                    const std::vector<std::pair<int, int>>& edges) {
  if (tasks.empty()) throw StructuralError("job " + std::to_string(id) + " has no tasks");

  std::unordered_map<int, std::size_t> position;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    TaskSpec::make(tasks[i].id, tasks[i].size, tasks[i].parallelism);
    if (!position.emplace(tasks[i].id, i).second) {
      throw StructuralError("duplicate task id " + std::to_string(tasks[i].id));
    }
  }

  DagJob job;
  job.id_ = id;
  job.arrival_ = arrival;
  job.deadline_ = deadline;
  job.graph_.tasks = std::move(tasks);
  job.graph_.edges.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    const auto f = position.find(from);
    const auto t = position.find(to);
    if (f == position.end() || t == position.end()) {
      throw StructuralError("edge (" + std::to_string(from) + "," + std::to_string(to) +
                            ") references an unknown task");
    }
    job.graph_.edges.emplace_back(f->second, t->second);
  }
  job.critical_path_len_ = critical_path(job.graph_);

  const double deficit = job.critical_path_len_ - (deadline - arrival);
  if (deficit > kTimeTolerance) {
    throw InfeasibleWindow("job " + std::to_string(id) + ": relative deadline shorter than critical path",
                           deficit);
  }
  return job;
}

double DagJob::total_workload() const {
  double total = 0.0;
  for (const auto& t : graph_.tasks) total += t.size;
  return total;
}

std::vector<std::pair<int, int>> DagJob::edge_ids() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(graph_.edges.size());
  for (const auto& [from, to] : graph_.edges) {
    out.emplace_back(graph_.tasks[from].id, graph_.tasks[to].id);
  }
  return out;
}

bool DagJob::is_chain() const {
  const auto order = topological_order(graph_);
  std::set<std::pair<std::size_t, std::size_t>> edge_set(graph_.edges.begin(), graph_.edges.end());
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!edge_set.contains({order[k - 1], order[k]})) return false;
  }
  return true;
}

double critical_path(const DagJob& dag) { return critical_path(dag.graph()); }

PseudoSchedule pseudo_schedule(const DagJob& dag) {
  const auto& graph = dag.graph();
  const auto order = topological_order(graph);
  auto start = earliest_offsets(graph, order);

  PseudoSchedule out;
  std::vector<double> times;
  times.reserve(2 * start.size());
  for (std::size_t i = 0; i < start.size(); ++i) {
    start[i] += dag.arrival();
    const double end = start[i] + graph.tasks[i].min_exec_time();
    out.completion = std::max(out.completion, end);
    times.push_back(start[i]);
    times.push_back(end);
  }
  std::sort(times.begin(), times.end());
  for (double t : times) {
    if (out.breakpoints.empty() || t - out.breakpoints.back() > kTimeTolerance) {
      out.breakpoints.push_back(t);
    }
  }
  out.start_times = std::move(start);
  return out;
}

double ChainJob::total_workload() const {
  double total = 0.0;
  for (const auto& t : tasks) total += t.size;
  return total;
}

double ChainJob::total_min_exec_time() const {
  double total = 0.0;
  for (const auto& t : tasks) total += t.min_exec_time();
  return total;
}

ChainJob transform(const DagJob& dag) {
  ChainJob chain;
  chain.id = dag.id();
  chain.arrival = dag.arrival();
  chain.deadline = dag.deadline();

  if (dag.is_chain()) {
    for (std::size_t i : topological_order(dag.graph())) {
      const auto& task = dag.tasks()[i];
      chain.tasks.push_back(task);
      chain.origin_map.push_back({OriginShare{task.id, task.size}});
    }
    return chain;
  }

  const auto schedule = pseudo_schedule(dag);
  const auto& tasks = dag.tasks();
  const auto& bp = schedule.breakpoints;
  int next_id = 1;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double lo = bp[k];
    const double hi = bp[k + 1];
    const double length = hi - lo;
    int parallelism = 0;
    std::vector<OriginShare> origin;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const double q = schedule.start_times[i];
      const double end = q + tasks[i].min_exec_time();
      if (q <= lo + kTimeTolerance && end >= hi - kTimeTolerance) {
        parallelism += tasks[i].parallelism;
        origin.push_back({tasks[i].id, tasks[i].parallelism * length});
      }
    }
    if (parallelism == 0) continue;
    chain.tasks.push_back(TaskSpec{next_id++, parallelism * length, parallelism});
    chain.origin_map.push_back(std::move(origin));
  }
  return chain;
}

DagJob as_dag(const ChainJob& chain) {
  std::vector<std::pair<int, int>> edges;
  for (std::size_t k = 1; k < chain.tasks.size(); ++k) {
    edges.emplace_back(chain.tasks[k - 1].id, chain.tasks[k].id);
  }
  return DagJob::make(chain.id, chain.arrival, chain.deadline, chain.tasks, edges);
}

}  // namespace spotdag::chainify
