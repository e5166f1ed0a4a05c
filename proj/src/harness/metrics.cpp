#include "spotdag/harness/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace spotdag::harness {

CostLedger CostLedger::of(std::span<const JobCost> jobs) {
  CostLedger l;
  for (const auto& j : jobs) {
    ++l.jobs;
    if (!j.met_deadline) ++l.missed_deadlines;
    l.workload += j.workload;
    l.owned_work += j.owned_work;
    l.spot_work += j.spot_work;
    l.ondemand_work += j.ondemand_work;
    l.spot_cost += j.spot_cost;
    l.ondemand_cost += j.ondemand_cost;
    l.owned_alloc_total += j.owned_alloc_total;
  }
  return l;
}

CostLedger& CostLedger::operator+=(const CostLedger& o) {
  jobs += o.jobs;
  missed_deadlines += o.missed_deadlines;
  workload += o.workload;
  owned_work += o.owned_work;
  spot_work += o.spot_work;
  ondemand_work += o.ondemand_work;
  spot_cost += o.spot_cost;
  ondemand_cost += o.ondemand_cost;
  owned_alloc_total += o.owned_alloc_total;
  return *this;
}

double CostLedger::unit_cost() const {
  if (!(workload > 0.0)) throw std::invalid_argument("unit cost of an empty ledger");
  return cost() / workload;
}

bool CostLedger::conserves(double rel) const {
  const double sum = owned_work + spot_work + ondemand_work;
  return std::abs(sum - workload) <= rel * std::max(1.0, workload);
}

double cost_improvement(double alpha, double alpha_benchmark) {
  if (!(alpha_benchmark > 0.0)) throw std::invalid_argument("benchmark unit cost must be positive");
  return 1.0 - alpha / alpha_benchmark;
}

std::optional<double> utilization_ratio(const CostLedger& proposed, const CostLedger& benchmark) {
  if (!(benchmark.owned_work > 0.0)) return std::nullopt;
  return proposed.owned_work / benchmark.owned_work;
}

std::size_t best_index(std::span<const CostLedger> ledgers) {
  if (ledgers.empty()) throw std::invalid_argument("no ledgers to compare");
  std::size_t best = 0;
  for (std::size_t k = 1; k < ledgers.size(); ++k) {
    if (ledgers[k].unit_cost() < ledgers[best].unit_cost()) best = k;
  }
  return best;
}

}  // namespace spotdag::harness
