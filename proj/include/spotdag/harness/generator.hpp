#pragma once

#include <cstdint>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/rng.hpp"

namespace spotdag::harness {

struct GeneratorConfig {
  double arrival_rate = 4.0;                  // Poisson arrivals per time unit
  std::vector<int> task_counts{7, 49};        // chosen uniformly per job
  double edge_prob = 0.5;                     // per ordered task pair
  std::vector<int> parallelism_choices{8, 64};  // chosen uniformly per task
  double pareto_shape = 7.0 / 8.0;
  double pareto_scale = 7.0 / 32.0;
  double pareto_location = 0.25;
  double exec_min = 2.0;                      // bounds on min execution time
  double exec_max = 10.0;
  double stretch_max = 2.0;                   // relative deadline = U[1, stretch_max] * critical path
  int job_count = 1000;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on non-positive fields or stretch_max <= 1.
  void validate() const;

  /// The four job types use stretch_max 1.5, 2, 2.5 and 3.
  static double stretch_for_job_type(int job_type);
};

/// Draws a minimum execution time: location + scale * U^(-1/shape), rejected until
/// it falls inside [exec_min, exec_max].
double sample_exec_time(const GeneratorConfig& config, rng::Engine& g);

/// Poisson arrival stream of DAG jobs. Tasks are generated in topological order;
/// every later task is a successor with probability edge_prob, then tasks without
/// successors (resp. predecessors) are joined to a random later (resp. earlier) task.
std::vector<chainify::DagJob> generate_jobs(const GeneratorConfig& config, rng::Engine& g);

std::vector<chainify::DagJob> generate_jobs(const GeneratorConfig& config);

}  // namespace spotdag::harness
