#include "spotdag/harness/kernels.hpp"

#include <algorithm>
#include <exception>

#include "spotdag/learning.hpp"

namespace spotdag::harness {

namespace {

std::uint64_t market_seed_for(std::uint64_t seed) {
  auto g = rng::stream(seed, 2);
  return g();
}

double normalized(const chainify::ChainJob& job, const PolicySpec& policy, const market::SpotMarket& market,
                  int owned_capacity) {
  const double all_ondemand = market.ondemand_price() * job.total_workload();
  return learning::counterfactual_cost(job, policy, market, owned_capacity) / all_ondemand;
}

// OpenMP forbids exceptions escaping a parallel region; the first is kept and rethrown.
class ErrorSlot {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(spotdag_error_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

double Workload::max_relative_deadline() const {
  double d = 0.0;
  for (const auto& job : jobs) d = std::max(d, job.deadline - job.arrival);
  return d;
}

Workload make_workload(std::span<const chainify::DagJob> dags, std::uint64_t market_seed) {
  Workload w;
  w.jobs.reserve(dags.size());
  for (const auto& dag : dags) w.jobs.push_back(chainify::transform(dag));
  w.market = market_for(w.jobs, market_seed);
  return w;
}

Workload make_workload(GeneratorConfig config, std::uint64_t seed) {
  config.seed = seed;
  const auto dags = generate_jobs(config);
  return make_workload(dags, market_seed_for(seed));
}

std::vector<CostLedger> sweep_serial(const Workload& w, std::span<const PolicySpec> policies, int owned_capacity) {
  std::vector<CostLedger> out(policies.size());
  for (std::size_t k = 0; k < policies.size(); ++k) {
    out[k] = CostLedger::of(simulate(w.jobs, policies[k], w.market, owned_capacity));
  }
  return out;
}

std::vector<CostLedger> sweep_parallel(const Workload& w, std::span<const PolicySpec> policies, int owned_capacity) {
  std::vector<CostLedger> out(policies.size());
  ErrorSlot errors;
  const auto n = static_cast<long>(policies.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < n; ++k) {
    errors.run([&] {
      const auto i = static_cast<std::size_t>(k);
      out[i] = CostLedger::of(simulate(w.jobs, policies[i], w.market, owned_capacity));
    });
  }
  errors.rethrow();
  return out;
}

std::vector<std::vector<double>> counterfactual_matrix_serial(const Workload& w, std::span<const PolicySpec> policies,
                                                              int owned_capacity) {
  std::vector<std::vector<double>> m(w.jobs.size(), std::vector<double>(policies.size()));
  for (std::size_t j = 0; j < w.jobs.size(); ++j) {
    for (std::size_t k = 0; k < policies.size(); ++k) {
      m[j][k] = normalized(w.jobs[j], policies[k], w.market, owned_capacity);
    }
  }
  return m;
}

std::vector<std::vector<double>> counterfactual_matrix_parallel(const Workload& w,
                                                                std::span<const PolicySpec> policies,
                                                                int owned_capacity) {
  std::vector<std::vector<double>> m(w.jobs.size(), std::vector<double>(policies.size()));
  ErrorSlot errors;
  const auto n = static_cast<long>(w.jobs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long j = 0; j < n; ++j) {
    errors.run([&] {
      const auto i = static_cast<std::size_t>(j);
      for (std::size_t k = 0; k < policies.size(); ++k) {
        m[i][k] = normalized(w.jobs[i], policies[k], w.market, owned_capacity);
      }
    });
  }
  errors.rethrow();
  return m;
}

}  // namespace spotdag::harness
