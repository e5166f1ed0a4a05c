#include "spotdag/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spotdag/harness/kernels.hpp"

namespace spotdag::harness {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("experiment spec: " + what);
}

// Deduplicated union of policy lists, remembering where each list landed.
struct PolicyUnion {
  std::vector<PolicySpec> all;

  std::vector<std::size_t> add(const std::vector<PolicySpec>& list) {
    std::vector<std::size_t> where;
    where.reserve(list.size());
    for (const auto& p : list) {
      auto it = std::find(all.begin(), all.end(), p);
      if (it == all.end()) {
        all.push_back(p);
        where.push_back(all.size() - 1);
      } else {
        where.push_back(static_cast<std::size_t>(it - all.begin()));
      }
    }
    return where;
  }
};

std::vector<CostLedger> pick(const std::vector<CostLedger>& pooled, const std::vector<std::size_t>& where) {
  std::vector<CostLedger> out;
  out.reserve(where.size());
  for (auto i : where) out.push_back(pooled[i]);
  return out;
}

void summarize(ExperimentResult& r) {
  r.best = best_index(r.proposed_ledgers);
  r.alpha = r.proposed_ledgers[r.best].unit_cost();
  r.missed_deadlines = 0;
  r.conserved = true;
  auto tally = [&](const std::vector<CostLedger>& ls) {
    for (const auto& l : ls) {
      r.missed_deadlines += l.missed_deadlines;
      r.conserved = r.conserved && l.conserves();
    }
  };
  tally(r.proposed_ledgers);
  r.summary.clear();
  for (std::size_t f = 0; f < r.families.size(); ++f) {
    tally(r.family_ledgers[f]);
    FamilyResult fr;
    fr.name = r.families[f].name;
    fr.best = best_index(r.family_ledgers[f]);
    const auto& bench = r.family_ledgers[f][fr.best];
    fr.alpha = bench.unit_cost();
    fr.rho = cost_improvement(r.alpha, fr.alpha);
    if (r.spec.owned > 0) fr.mu = utilization_ratio(r.proposed_ledgers[r.best], bench);
    r.summary.push_back(fr);
  }
}

void check_sweep_kind(int experiment, int owned) {
  require(experiment >= 1 && experiment <= 3, "sweeps are experiments 1..3");
  if (experiment == 1) require(owned == 0, "experiment 1 runs without self-owned instances");
}

}  // namespace

void PolicySets::validate() const {
  require(!beta0.empty() && !beta.empty() && !bids.empty(), "policy sets must be non-empty");
  for (double b0 : beta0) require(b0 > 0.0 && b0 < 1.0, "beta0 values must be in (0, 1)");
  for (double b : beta) require(b > 0.0 && b <= 1.0, "beta values must be in (0, 1]");
  for (double b : bids) require(b >= 0.0, "bids must be non-negative");
}

std::vector<PolicySpec> proposed_policies(const PolicySets& sets, bool with_owned) {
  std::vector<PolicySpec> out;
  const std::vector<double> beta0s = with_owned ? sets.beta0 : std::vector<double>{1.0};
  for (double b0 : beta0s) {
    for (double beta : sets.beta) {
      for (double bid : sets.bids) {
        learning::PolicyTuple p{b0, beta, bid};
        auto spec = PolicySpec::proposed(p);
        if (!with_owned) spec.owned = OwnedRule::None;
        out.push_back(spec);
      }
    }
  }
  return out;
}

std::vector<BenchmarkFamily> benchmark_families(int experiment, const PolicySets& sets, int owned) {
  std::vector<BenchmarkFamily> out;
  auto per_bid = [&](auto make) {
    std::vector<PolicySpec> ps;
    for (double bid : sets.bids) ps.push_back(make(bid));
    return ps;
  };
  const bool learning_with_owned = experiment == 4 && owned > 0;
  if (experiment == 1 || (experiment == 4 && !learning_with_owned)) {
    out.push_back({"greedy", per_bid([](double b) { return PolicySpec::greedy(b); })});
    out.push_back({"even", per_bid([](double b) { return PolicySpec::even(b); })});
  } else if (experiment == 2 || learning_with_owned) {
    out.push_back({"even+naive", per_bid([](double b) { return PolicySpec::even(b, OwnedRule::Naive); })});
  } else if (experiment == 3) {
    std::vector<PolicySpec> ps;
    for (double beta : sets.beta) {
      for (double bid : sets.bids) {
        learning::PolicyTuple p{1.0, beta, bid};
        ps.push_back(PolicySpec{WindowRule::Dealloc, OwnedRule::Naive, p});
      }
    }
    out.push_back({"dealloc+naive", std::move(ps)});
  } else {
    throw std::invalid_argument("experiment must be 1..4");
  }
  return out;
}

void ExperimentSpec::validate() const {
  require(experiment >= 1 && experiment <= 4, "experiment must be 1..4");
  require(job_type >= 1 && job_type <= 4, "job type must be 1..4");
  require(owned >= 0, "owned count must be non-negative");
  require(jobs > 0, "job count must be positive");
  require(!seeds.empty(), "at least one seed is required");
  require(confidence > 0.0 && confidence < 1.0, "confidence must be in (0, 1)");
  if (experiment == 1) require(owned == 0, "experiment 1 runs without self-owned instances");
  sets.validate();
  generator_config().validate();
}

GeneratorConfig ExperimentSpec::generator_config() const {
  GeneratorConfig g = generator;
  g.job_count = jobs;
  g.stretch_max = GeneratorConfig::stretch_for_job_type(job_type);
  return g;
}

std::vector<ExperimentResult> run_sweeps(const ExperimentSpec& base, const std::vector<int>& experiments) {
  base.validate();
  for (int e : experiments) check_sweep_kind(e, base.owned);

  PolicyUnion u;
  const auto proposed = proposed_policies(base.sets, base.owned > 0);
  const auto proposed_at = u.add(proposed);
  std::vector<std::vector<BenchmarkFamily>> families;
  std::vector<std::vector<std::vector<std::size_t>>> family_at;
  for (int e : experiments) {
    families.push_back(benchmark_families(e, base.sets, base.owned));
    auto& at = family_at.emplace_back();
    for (const auto& f : families.back()) at.push_back(u.add(f.policies));
  }

  const auto config = base.generator_config();
  std::vector<CostLedger> pooled(u.all.size());
  for (auto seed : base.seeds) {
    const auto w = make_workload(config, seed);
    const auto ledgers = base.parallel ? sweep_parallel(w, u.all, base.owned) : sweep_serial(w, u.all, base.owned);
    for (std::size_t k = 0; k < ledgers.size(); ++k) pooled[k] += ledgers[k];
  }

  std::vector<ExperimentResult> out;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    ExperimentResult r;
    r.spec = base;
    r.spec.experiment = experiments[i];
    r.proposed = proposed;
    r.proposed_ledgers = pick(pooled, proposed_at);
    r.families = families[i];
    for (const auto& at : family_at[i]) r.family_ledgers.push_back(pick(pooled, at));
    summarize(r);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

struct LearnedSet {
  CostLedger live;
  std::vector<std::size_t> picks;
  std::vector<std::vector<double>> costs;
  std::vector<learning::WeightLogRow> log;
};

LearnedSet learn_over(const Workload& w, const std::vector<PolicySpec>& policies, int owned, double d,
                      rng::Engine g, bool parallel, bool keep_log) {
  LearnedSet s;
  s.costs = parallel ? counterfactual_matrix_parallel(w, policies, owned)
                     : counterfactual_matrix_serial(w, policies, owned);
  std::vector<double> arrivals;
  arrivals.reserve(w.jobs.size());
  for (const auto& job : w.jobs) arrivals.push_back(job.arrival);
  auto run = learning::run_tola(arrivals, s.costs, d, g, keep_log);
  std::vector<PolicySpec> policy_of;
  policy_of.reserve(w.jobs.size());
  for (auto k : run.picks) policy_of.push_back(policies[k]);
  s.live = CostLedger::of(simulate(w.jobs, policy_of, w.market, owned));
  s.picks = std::move(run.picks);
  s.log = std::move(run.log);
  return s;
}

RegretCheck regret_of(const Workload& w, const LearnedSet& s, double d, double confidence) {
  std::vector<std::size_t> counted;
  for (std::size_t j = 0; j < w.jobs.size(); ++j) {
    if (w.jobs[j].arrival >= d) counted.push_back(j);
  }
  if (counted.empty()) {
    counted.resize(w.jobs.size());
    for (std::size_t j = 0; j < counted.size(); ++j) counted[j] = j;
  }
  const std::size_t n = s.costs.front().size();
  double learner = 0.0;
  std::vector<double> fixed(n, 0.0);
  for (auto j : counted) {
    learner += s.costs[j][s.picks[j]];
    for (std::size_t k = 0; k < n; ++k) fixed[k] += s.costs[j][k];
  }
  const double m = static_cast<double>(counted.size());
  RegretCheck rc;
  rc.policies = n;
  rc.d = d;
  rc.jobs = counted.size();
  rc.regret = learner / m - *std::min_element(fixed.begin(), fixed.end()) / m;
  rc.bound = learning::regret_bound(n, d, counted.size(), confidence);
  return rc;
}

ExperimentResult run_learning(const ExperimentSpec& spec) {
  ExperimentResult r;
  r.spec = spec;
  r.proposed = proposed_policies(spec.sets, spec.owned > 0);
  r.families = benchmark_families(4, spec.sets, spec.owned);

  const auto config = spec.generator_config();
  CostLedger proposed_live;
  std::vector<CostLedger> family_live(r.families.size());
  bool first = true;
  for (auto seed : spec.seeds) {
    const auto w = make_workload(config, seed);
    const double d = w.max_relative_deadline();
    auto learned = learn_over(w, r.proposed, spec.owned, d, rng::stream(seed, 3), spec.parallel, first);
    proposed_live += learned.live;
    auto rc = regret_of(w, learned, d, spec.confidence);
    rc.seed = seed;
    r.regret.push_back(rc);
    if (first) r.weight_log = std::move(learned.log);
    for (std::size_t f = 0; f < r.families.size(); ++f) {
      auto fam = learn_over(w, r.families[f].policies, spec.owned, d, rng::stream(seed, 4 + f), spec.parallel, false);
      family_live[f] += fam.live;
    }
    first = false;
  }

  r.proposed_ledgers = {proposed_live};
  r.best = 0;
  r.alpha = proposed_live.unit_cost();
  r.missed_deadlines = proposed_live.missed_deadlines;
  r.conserved = proposed_live.conserves();
  for (std::size_t f = 0; f < r.families.size(); ++f) {
    r.family_ledgers.push_back({family_live[f]});
    r.missed_deadlines += family_live[f].missed_deadlines;
    r.conserved = r.conserved && family_live[f].conserves();
    FamilyResult fr;
    fr.name = r.families[f].name;
    fr.alpha = family_live[f].unit_cost();
    fr.rho = cost_improvement(r.alpha, fr.alpha);
    if (spec.owned > 0) fr.mu = utilization_ratio(proposed_live, family_live[f]);
    r.summary.push_back(fr);
  }
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.experiment == 4) return run_learning(spec);
  return run_sweeps(spec, {spec.experiment}).front();
}

std::vector<MetricsRow> ExperimentResult::rows() const {
  std::vector<MetricsRow> out;
  const int x1 = spec.owned;
  const int x2 = spec.job_type;
  if (spec.experiment == 4) {
    out.push_back({x1, x2, "tola:proposed", alpha, std::nullopt, std::nullopt});
    for (const auto& s : summary) out.push_back({x1, x2, "tola:" + s.name, s.alpha, s.rho, s.mu});
    return out;
  }
  for (std::size_t k = 0; k < proposed.size(); ++k) {
    out.push_back({x1, x2, proposed[k].label(), proposed_ledgers[k].unit_cost(), std::nullopt, std::nullopt});
  }
  for (std::size_t f = 0; f < families.size(); ++f) {
    for (std::size_t k = 0; k < families[f].policies.size(); ++k) {
      out.push_back({x1, x2, families[f].policies[k].label(), family_ledgers[f][k].unit_cost(), std::nullopt,
                     std::nullopt});
    }
  }
  out.push_back({x1, x2, "best:proposed", alpha, std::nullopt, std::nullopt});
  for (const auto& s : summary) out.push_back({x1, x2, "rho:" + s.name, s.alpha, s.rho, s.mu});
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "x1,x2,policy,alpha,rho,mu\n";
  for (const auto& r : rows) {
    out << r.x1 << ',' << r.x2 << ',' << r.policy << ',' << num(r.alpha) << ',' << opt_num(r.rho) << ','
        << opt_num(r.mu) << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::vector<MetricsRow> rows;
  std::string line;
  if (!std::getline(in, line) || line.rfind("x1,x2,policy,alpha,rho,mu", 0) != 0) {
    throw std::invalid_argument("metrics csv: missing header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    if (cols.size() != 6) throw std::invalid_argument("metrics csv: line " + std::to_string(lineno) + " needs 6 columns");
    MetricsRow r;
    try {
      r.x1 = std::stoi(cols[0]);
      r.x2 = std::stoi(cols[1]);
      r.policy = cols[2];
      r.alpha = std::stod(cols[3]);
      if (!cols[4].empty()) r.rho = std::stod(cols[4]);
      if (!cols[5].empty()) r.mu = std::stod(cols[5]);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("metrics csv: bad number on line " + std::to_string(lineno));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_weights_csv(std::ostream& out, const std::vector<learning::WeightLogRow>& rows) {
  out << "kappa,t,policy,weight\n";
  for (const auto& r : rows) out << r.kappa << ',' << num(r.time) << ',' << r.policy << ',' << num(r.weight) << '\n';
}

void write_regret_csv(std::ostream& out, const std::vector<RegretCheck>& rows) {
  out << "seed,n,d,jobs,regret,bound\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.policies << ',' << num(r.d) << ',' << r.jobs << ',' << num(r.regret) << ','
        << num(r.bound) << '\n';
  }
}

void write_report(std::ostream& out, const std::vector<MetricsRow>& rows) {
  std::map<std::pair<int, int>, std::vector<const MetricsRow*>> cells;
  for (const auto& r : rows) {
    if (r.rho || r.policy == "best:proposed" || r.policy == "tola:proposed") cells[{r.x1, r.x2}].push_back(&r);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%6s %4s  %-22s %10s %9s %8s\n", "x1", "x2", "row", "alpha", "rho(%)", "mu");
  out << buf;
  for (const auto& [key, list] : cells) {
    for (const auto* r : list) {
      const std::string rho = r->rho ? num(std::round(*r->rho * 10000.0) / 100.0) : "-";
      const std::string mu = r->mu ? num(std::round(*r->mu * 1000.0) / 1000.0) : "-";
      std::snprintf(buf, sizeof buf, "%6d %4d  %-22s %10.4f %9s %8s\n", key.first, key.second, r->policy.c_str(),
                    r->alpha, rho.c_str(), mu.c_str());
      out << buf;
    }
  }
}

}  // namespace spotdag::harness
