#include "spotdag/harness/generator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spotdag::harness {

void GeneratorConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("generator config: ") + what);
  };
  require(arrival_rate > 0.0, "arrival_rate must be positive");
  require(!task_counts.empty(), "task_counts must be non-empty");
  for (int l : task_counts) require(l >= 1, "task counts must be >= 1");
  require(edge_prob >= 0.0 && edge_prob <= 1.0, "edge_prob must be in [0, 1]");
  require(!parallelism_choices.empty(), "parallelism_choices must be non-empty");
  for (int p : parallelism_choices) require(p >= 1, "parallelism choices must be >= 1");
  require(pareto_shape > 0.0 && pareto_scale > 0.0, "pareto shape and scale must be positive");
  require(exec_min > 0.0 && exec_max > exec_min, "exec bounds must satisfy 0 < min < max");
  require(pareto_location + pareto_scale < exec_max, "exec bounds unreachable by the pareto draw");
  require(stretch_max > 1.0, "stretch_max must exceed 1");
  require(job_count > 0, "job_count must be positive");
}

double GeneratorConfig::stretch_for_job_type(int job_type) {
  switch (job_type) {
    case 1:
      return 1.5;
    case 2:
      return 2.0;
    case 3:
      return 2.5;
    case 4:
      return 3.0;
    default:
      throw std::invalid_argument("job type must be 1..4, got " + std::to_string(job_type));
  }
}

double sample_exec_time(const GeneratorConfig& config, rng::Engine& g) {
  for (;;) {
    const double u = 1.0 - rng::uniform01(g);  // (0, 1]
    const double x = config.pareto_location + config.pareto_scale * std::pow(u, -1.0 / config.pareto_shape);
    if (x >= config.exec_min && x <= config.exec_max) return x;
  }
}

namespace {

template <class T>
const T& pick(const std::vector<T>& choices, rng::Engine& g) {
  return choices[static_cast<std::size_t>(
      rng::uniform_int(g, 0, static_cast<std::int64_t>(choices.size()) - 1))];
}

}  // namespace

std::vector<chainify::DagJob> generate_jobs(const GeneratorConfig& config, rng::Engine& g) {
  config.validate();
  std::vector<chainify::DagJob> jobs;
  jobs.reserve(static_cast<std::size_t>(config.job_count));

  double clock = 0.0;
  for (int j = 0; j < config.job_count; ++j) {
    clock += rng::exponential(g, 1.0 / config.arrival_rate);
    const int l = pick(config.task_counts, g);

    std::vector<chainify::TaskSpec> tasks;
    tasks.reserve(static_cast<std::size_t>(l));
    for (int i = 1; i <= l; ++i) {
      const int delta = pick(config.parallelism_choices, g);
      const double e = sample_exec_time(config, g);
      tasks.push_back(chainify::TaskSpec{i, e * delta, delta});
    }

    // adjacency over 1-based ids; only i < k pairs exist
    std::vector<std::pair<int, int>> edges;
    std::vector<char> has_succ(static_cast<std::size_t>(l) + 1, 0);
    std::vector<char> has_pred(static_cast<std::size_t>(l) + 1, 0);
    auto connect = [&](int a, int b) {
      edges.emplace_back(a, b);
      has_succ[static_cast<std::size_t>(a)] = 1;
      has_pred[static_cast<std::size_t>(b)] = 1;
    };
    for (int a = 1; a <= l; ++a) {
      for (int b = a + 1; b <= l; ++b) {
        if (rng::coin(g, config.edge_prob)) connect(a, b);
      }
    }
    for (int a = 1; a < l; ++a) {
      if (!has_succ[static_cast<std::size_t>(a)]) connect(a, static_cast<int>(rng::uniform_int(g, a + 1, l)));
    }
    for (int b = 2; b <= l; ++b) {
      if (!has_pred[static_cast<std::size_t>(b)]) connect(static_cast<int>(rng::uniform_int(g, 1, b - 1)), b);
    }

    chainify::TaskGraph graph;
    graph.tasks = tasks;
    for (const auto& [a, b] : edges) {
      graph.edges.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    }
    const double cp = chainify::critical_path(graph);
    const double stretch = rng::uniform(g, 1.0, config.stretch_max);
    jobs.push_back(chainify::DagJob::make(j + 1, clock, clock + stretch * cp, std::move(tasks), edges));
  }
  return jobs;
}

std::vector<chainify::DagJob> generate_jobs(const GeneratorConfig& config) {
  auto g = rng::stream(config.seed, 1);
  return generate_jobs(config, g);
}

}  // namespace spotdag::harness
