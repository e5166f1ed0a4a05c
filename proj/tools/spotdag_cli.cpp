// Command-line front end: job generation, single-policy simulation, policy
// sweeps, online learning and reporting.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spotdag/harness/experiment.hpp"
#include "spotdag/harness/io.hpp"
#include "spotdag/harness/kernels.hpp"
#include "spotdag/harness/simulation.hpp"

namespace fs = std::filesystem;
using namespace spotdag;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int jobs = 1000;
  int job_type = 2;
  std::string config;
  std::string out = ".";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Base seed")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Number of jobs per seed")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--config", c.config, "Generator config JSON")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const auto path = fs::path(dir) / name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return f;
}

harness::GeneratorConfig load_config(const Common& c) {
  harness::GeneratorConfig g;
  if (!c.config.empty()) {
    auto f = open_in(c.config);
    g = harness::read_generator_config(f);
  }
  g.job_count = c.jobs;
  g.stretch_max = harness::GeneratorConfig::stretch_for_job_type(c.job_type);
  g.seed = c.seed;
  return g;
}

harness::PolicySets load_sets(const std::string& path) {
  if (path.empty()) return {};
  auto f = open_in(path);
  return harness::read_policy_sets(f);
}

std::optional<double> parse_bid(const std::string& s) {
  if (s == "null" || s == "none") return std::nullopt;
  return std::stod(s);
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  return seeds;
}

int cmd_generate(const Common& c) {
  const auto config = load_config(c);
  const auto dags = harness::generate_jobs(config);
  const auto w = harness::make_workload(dags, rng::stream(c.seed, 2)());
  auto jobs = open_out(c.out, "jobs.json");
  harness::write_jobs_json(jobs, dags);
  auto prices = open_out(c.out, "prices.csv");
  w.market.write_csv(prices);
  std::printf("wrote %zu jobs and %zu price slots to %s\n", dags.size(), w.market.slot_count(), c.out.c_str());
  return 0;
}

struct SimulateArgs {
  std::string policy = "proposed";
  double beta0 = 0.5;
  double beta = 1 / 1.6;
  std::string bid = "0.3";
  int owned = 0;
  std::string jobs_file;
  std::string prices_file;
};

int cmd_simulate(const Common& c, const SimulateArgs& a) {
  harness::Workload w;
  if (!a.jobs_file.empty()) {
    auto f = open_in(a.jobs_file);
    const auto dags = harness::read_jobs_json(f);
    w = harness::make_workload(dags, rng::stream(c.seed, 2)());
  } else {
    w = harness::make_workload(load_config(c), c.seed);
  }
  if (!a.prices_file.empty()) {
    auto f = open_in(a.prices_file);
    w.market = market::SpotMarket::read_csv(f);
  }

  learning::PolicyTuple params{a.beta0, a.beta, parse_bid(a.bid)};
  params.validate();
  harness::PolicySpec spec;
  if (a.policy == "proposed") {
    spec = harness::PolicySpec::proposed(params);
  } else if (a.policy == "dealloc") {
    spec = harness::PolicySpec{harness::WindowRule::Dealloc, harness::OwnedRule::None, params};
  } else if (a.policy == "dealloc+naive") {
    spec = harness::PolicySpec{harness::WindowRule::Dealloc, harness::OwnedRule::Naive, params};
  } else if (a.policy == "greedy") {
    spec = harness::PolicySpec::greedy(params.bid);
  } else if (a.policy == "even") {
    spec = harness::PolicySpec::even(params.bid);
  } else {
    spec = harness::PolicySpec::even(params.bid, harness::OwnedRule::Naive);
  }

  std::vector<harness::TraceRow> trace;
  const auto costs = harness::simulate(w.jobs, spec, w.market, a.owned, &trace);
  const auto ledger = harness::CostLedger::of(costs);

  auto metrics = open_out(c.out, "metrics.csv");
  harness::write_metrics_csv(metrics, {{a.owned, c.job_type, spec.label(), ledger.unit_cost(), std::nullopt,
                                        std::nullopt}});
  auto tf = open_out(c.out, "trace.csv");
  harness::write_trace_csv(tf, trace);
  std::printf("%s: alpha %.6f over %zu jobs, %zu missed deadlines\n", spec.label().c_str(), ledger.unit_cost(),
              ledger.jobs, ledger.missed_deadlines);
  return ledger.missed_deadlines == 0 ? 0 : 2;
}

struct SweepArgs {
  std::vector<int> experiments{1};
  std::vector<int> job_types{2};
  std::vector<int> owned{0};
  int seeds = 1;
  std::string policies;
  bool serial = false;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  const auto sets = load_sets(a.policies);
  const auto base_config = load_config(c);
  // validate every cell before simulating any of them
  std::vector<harness::ExperimentSpec> cells;
  for (int owned : a.owned) {
    for (int x2 : a.job_types) {
      harness::ExperimentSpec s;
      s.experiment = a.experiments.front();
      s.job_type = x2;
      s.owned = owned;
      s.jobs = c.jobs;
      s.seeds = seed_range(c.seed, a.seeds);
      s.generator = base_config;
      s.sets = sets;
      s.parallel = !a.serial;
      s.validate();
      for (int e : a.experiments) {
        if (e < 1 || e > 3) throw std::invalid_argument("sweep experiments are 1..3");
        if (e == 1 && owned != 0) throw std::invalid_argument("experiment 1 runs with --owned 0");
      }
      cells.push_back(s);
    }
  }
  std::vector<harness::MetricsRow> rows;
  for (const auto& s : cells) {
    for (const auto& r : harness::run_sweeps(s, a.experiments)) {
      if (r.missed_deadlines != 0) std::fprintf(stderr, "warning: %zu missed deadlines\n", r.missed_deadlines);
      auto more = r.rows();
      rows.insert(rows.end(), more.begin(), more.end());
    }
  }
  auto f = open_out(c.out, "metrics.csv");
  harness::write_metrics_csv(f, rows);
  harness::write_report(std::cout, rows);
  return 0;
}

struct LearnArgs {
  std::vector<int> job_types{2};
  std::vector<int> owned{0};
  int seeds = 1;
  std::string policies;
  bool serial = false;
};

int cmd_learn(const Common& c, const LearnArgs& a) {
  const auto sets = load_sets(a.policies);
  const auto base_config = load_config(c);
  std::vector<harness::ExperimentSpec> cells;
  for (int owned : a.owned) {
    for (int x2 : a.job_types) {
      harness::ExperimentSpec s;
      s.experiment = 4;
      s.job_type = x2;
      s.owned = owned;
      s.jobs = c.jobs;
      s.seeds = seed_range(c.seed, a.seeds);
      s.generator = base_config;
      s.sets = sets;
      s.parallel = !a.serial;
      s.validate();
      cells.push_back(s);
    }
  }
  std::vector<harness::MetricsRow> rows;
  std::vector<harness::RegretCheck> regret;
  std::vector<learning::WeightLogRow> weights;
  for (const auto& s : cells) {
    const auto r = harness::run_experiment(s);
    auto more = r.rows();
    rows.insert(rows.end(), more.begin(), more.end());
    regret.insert(regret.end(), r.regret.begin(), r.regret.end());
    if (weights.empty()) weights = r.weight_log;
  }
  auto m = open_out(c.out, "metrics.csv");
  harness::write_metrics_csv(m, rows);
  auto wf = open_out(c.out, "weights.csv");
  harness::write_weights_csv(wf, weights);
  auto rf = open_out(c.out, "regret.csv");
  harness::write_regret_csv(rf, regret);
  harness::write_report(std::cout, rows);
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<harness::MetricsRow> rows;
  for (const auto& path : inputs) {
    auto f = open_in(path);
    auto more = harness::read_metrics_csv(f);
    rows.insert(rows.end(), more.begin(), more.end());
  }
  if (out.empty()) {
    harness::write_report(std::cout, rows);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    harness::write_report(f, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-constrained DAG jobs on self-owned, spot and on-demand instances"};
  app.require_subcommand(1);

  Common gen_c, sim_c, sweep_c, learn_c;
  auto* gen = app.add_subcommand("generate", "Emit a job set (jobs.json) and its price trace (prices.csv)");
  add_common(gen, gen_c);
  gen->add_option("--job-type", gen_c.job_type, "Job type 1..4")->check(CLI::Range(1, 4))->capture_default_str();

  SimulateArgs sim_a;
  auto* sim = app.add_subcommand("simulate", "Run one policy over a job set; writes metrics.csv and trace.csv");
  add_common(sim, sim_c);
  sim->add_option("--job-type", sim_c.job_type, "Job type 1..4")->check(CLI::Range(1, 4))->capture_default_str();
  sim->add_option("--policy", sim_a.policy, "proposed | dealloc | dealloc+naive | greedy | even | even+naive")
      ->check(CLI::IsMember({"proposed", "dealloc", "dealloc+naive", "greedy", "even", "even+naive"}))
      ->capture_default_str();
  sim->add_option("--beta0", sim_a.beta0, "Self-owned sufficiency index")->capture_default_str();
  sim->add_option("--beta", sim_a.beta, "Planning spot availability")->capture_default_str();
  sim->add_option("--bid", sim_a.bid, "Bid price or null")->capture_default_str();
  sim->add_option("--owned", sim_a.owned, "Self-owned instances")->check(CLI::NonNegativeNumber)->capture_default_str();
  sim->add_option("--jobs-file", sim_a.jobs_file, "Job set JSON from generate")->check(CLI::ExistingFile);
  sim->add_option("--prices-file", sim_a.prices_file, "Price trace CSV")->check(CLI::ExistingFile);

  SweepArgs sweep_a;
  auto* sweep = app.add_subcommand("sweep", "Fixed-policy experiments 1-3; writes metrics.csv");
  add_common(sweep, sweep_c);
  sweep->add_option("--experiment", sweep_a.experiments, "Experiment(s) 1..3")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  sweep->add_option("--job-type", sweep_a.job_types, "Job type(s) 1..4")->check(CLI::Range(1, 4))->capture_default_str();
  sweep->add_option("--owned", sweep_a.owned, "Self-owned count(s)")->check(CLI::NonNegativeNumber)->capture_default_str();
  sweep->add_option("--seeds", sweep_a.seeds, "Seeds per cell, starting at --seed")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--policies", sweep_a.policies, "Policy set JSON")->check(CLI::ExistingFile);
  sweep->add_flag("--serial", sweep_a.serial, "Use the serial kernel");

  LearnArgs learn_a;
  auto* learn = app.add_subcommand("learn", "Online learning (experiment 4); writes metrics.csv, weights.csv, regret.csv");
  add_common(learn, learn_c);
  learn->add_option("--job-type", learn_a.job_types, "Job type(s) 1..4")->check(CLI::Range(1, 4))->capture_default_str();
  learn->add_option("--owned", learn_a.owned, "Self-owned count(s)")->check(CLI::NonNegativeNumber)->capture_default_str();
  learn->add_option("--seeds", learn_a.seeds, "Seeds per cell, starting at --seed")->check(CLI::PositiveNumber)->capture_default_str();
  learn->add_option("--policies", learn_a.policies, "Policy set JSON")->check(CLI::ExistingFile);
  learn->add_flag("--serial", learn_a.serial, "Use the serial kernel");

  std::vector<std::string> report_in;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Summarize metrics.csv files");
  report->add_option("--in", report_in, "metrics.csv file(s)")->required()->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "Write the table to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(gen_c);
    if (*sim) return cmd_simulate(sim_c, sim_a);
    if (*sweep) return cmd_sweep(sweep_c, sweep_a);
    if (*learn) return cmd_learn(learn_c, learn_a);
    if (*report) return cmd_report(report_in, report_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
