#pragma once

// Fixed-policy sweeps and online-learning runs over seeded workloads, reduced
// to per-policy unit costs and improvement metrics.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spotdag/harness/generator.hpp"
#include "spotdag/harness/metrics.hpp"
#include "spotdag/harness/simulation.hpp"
#include "spotdag/learning.hpp"

namespace spotdag::harness {

struct PolicySets {
  std::vector<double> beta0{2.0 / 12, 4.0 / 14, 6.0 / 16, 8.0 / 18, 0.5, 0.6, 0.7};
  std::vector<double> beta{1.0, 1 / 1.3, 1 / 1.6, 1 / 1.9, 1 / 2.2};
  std::vector<double> bids{0.18, 0.21, 0.24, 0.27, 0.3};

  void validate() const;
};

/// (beta, bid) pairs with no self-owned use, or (beta0, beta, bid) triples with the
/// sufficiency rule when `with_owned`. Order: beta0, then beta, then bid.
std::vector<PolicySpec> proposed_policies(const PolicySets& sets, bool with_owned);

/// A named group of benchmark policies; the group's best member is the baseline.
struct BenchmarkFamily {
  std::string name;
  std::vector<PolicySpec> policies;
};

/// Fixed-policy sweeps: experiment 1 compares against Greedy and Even (no
/// self-owned use), 2 against Even with naive self-owned, 3 against Dealloc with
/// naive self-owned. Experiment 4 (learning) uses the same families as 1 when
/// owned is zero and as 2 otherwise.
std::vector<BenchmarkFamily> benchmark_families(int experiment, const PolicySets& sets, int owned);

struct ExperimentSpec {
  int experiment = 1;  // 1..3 sweeps, 4 learning
  int job_type = 2;    // 1..4
  int owned = 0;       // self-owned instance count
  int jobs = 1000;
  std::vector<std::uint64_t> seeds{1};
  GeneratorConfig generator;  // job_count and stretch_max are set from jobs and job_type
  PolicySets sets;
  bool parallel = true;
  double confidence = 0.1;    // regret bound confidence

  /// Throws std::invalid_argument on an inconsistent spec.
  void validate() const;
  GeneratorConfig generator_config() const;
};

struct MetricsRow {
  int x1 = 0;
  int x2 = 0;
  std::string policy;
  double alpha = 0.0;
  std::optional<double> rho;
  std::optional<double> mu;
};

struct FamilyResult {
  std::string name;
  std::size_t best = 0;      // index inside the family
  double alpha = 0.0;        // benchmark unit cost (best member, or learned)
  double rho = 0.0;
  std::optional<double> mu;
};

struct RegretCheck {
  std::uint64_t seed = 0;
  std::size_t policies = 0;
  double d = 0.0;
  std::size_t jobs = 0;      // jobs counted in the average
  double regret = 0.0;       // per-job normalized cost of the picks minus the best fixed policy
  double bound = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<PolicySpec> proposed;
  std::vector<CostLedger> proposed_ledgers;  // pooled over seeds
  std::size_t best = 0;
  double alpha = 0.0;  // best proposed (or learned) unit cost
  std::vector<BenchmarkFamily> families;
  std::vector<std::vector<CostLedger>> family_ledgers;
  std::vector<FamilyResult> summary;
  std::size_t missed_deadlines = 0;
  bool conserved = true;

  // learning mode
  std::vector<RegretCheck> regret;
  std::vector<learning::WeightLogRow> weight_log;  // first seed only

  std::vector<MetricsRow> rows() const;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Sweep cells that share job sets: ledgers for experiments 2 and 3 come from one pass.
std::vector<ExperimentResult> run_sweeps(const ExperimentSpec& base, const std::vector<int>& experiments);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
void write_weights_csv(std::ostream& out, const std::vector<learning::WeightLogRow>& rows);
void write_regret_csv(std::ostream& out, const std::vector<RegretCheck>& rows);

/// Plain-text table of the summary rows (best-vs-benchmark), grouped by x1 and x2.
void write_report(std::ostream& out, const std::vector<MetricsRow>& rows);

}  // namespace spotdag::harness
