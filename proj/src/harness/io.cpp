#include "spotdag/harness/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace spotdag::harness {

using nlohmann::json;

namespace {

json parse(std::istream& in, const char* what) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

template <class T>
void maybe(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

void write_jobs_json(std::ostream& out, const std::vector<chainify::DagJob>& jobs) {
  json arr = json::array();
  for (const auto& job : jobs) {
    json tasks = json::array();
    for (const auto& t : job.tasks()) tasks.push_back({{"id", t.id}, {"size", t.size}, {"parallelism", t.parallelism}});
    json edges = json::array();
    for (const auto& [a, b] : job.edge_ids()) edges.push_back({a, b});
    arr.push_back({{"id", job.id()},
                   {"arrival", job.arrival()},
                   {"deadline", job.deadline()},
                   {"tasks", std::move(tasks)},
                   {"edges", std::move(edges)}});
  }
  out << json{{"jobs", std::move(arr)}}.dump(1) << '\n';
}

std::vector<chainify::DagJob> read_jobs_json(std::istream& in) {
  const json doc = parse(in, "jobs json");
  std::vector<chainify::DagJob> jobs;
  try {
    for (const auto& j : doc.at("jobs")) {
      std::vector<chainify::TaskSpec> tasks;
      for (const auto& t : j.at("tasks")) {
        tasks.push_back(chainify::TaskSpec{t.at("id").get<int>(), t.at("size").get<double>(),
                                           t.at("parallelism").get<int>()});
      }
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      jobs.push_back(chainify::DagJob::make(j.at("id").get<int>(), j.at("arrival").get<double>(),
                                            j.at("deadline").get<double>(), std::move(tasks), edges));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("jobs json: ") + e.what());
  }
  return jobs;
}

GeneratorConfig read_generator_config(std::istream& in) {
  const json j = parse(in, "generator config");
  GeneratorConfig c;
  try {
    maybe(j, "arrival_rate", c.arrival_rate);
    maybe(j, "task_counts", c.task_counts);
    maybe(j, "edge_prob", c.edge_prob);
    maybe(j, "parallelism_choices", c.parallelism_choices);
    maybe(j, "pareto_shape", c.pareto_shape);
    maybe(j, "pareto_scale", c.pareto_scale);
    maybe(j, "pareto_location", c.pareto_location);
    maybe(j, "exec_min", c.exec_min);
    maybe(j, "exec_max", c.exec_max);
    maybe(j, "stretch_max", c.stretch_max);
    maybe(j, "job_count", c.job_count);
    maybe(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("generator config: ") + e.what());
  }
  c.validate();
  return c;
}

void write_generator_config(std::ostream& out, const GeneratorConfig& c) {
  const json j{{"arrival_rate", c.arrival_rate},
               {"task_counts", c.task_counts},
               {"edge_prob", c.edge_prob},
               {"parallelism_choices", c.parallelism_choices},
               {"pareto_shape", c.pareto_shape},
               {"pareto_scale", c.pareto_scale},
               {"pareto_location", c.pareto_location},
               {"exec_min", c.exec_min},
               {"exec_max", c.exec_max},
               {"stretch_max", c.stretch_max},
               {"job_count", c.job_count},
               {"seed", c.seed}};
  out << j.dump(1) << '\n';
}

PolicySets read_policy_sets(std::istream& in) {
  const json j = parse(in, "policy sets");
  PolicySets s;
  try {
    maybe(j, "beta0", s.beta0);
    maybe(j, "beta", s.beta);
    maybe(j, "bids", s.bids);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("policy sets: ") + e.what());
  }
  s.validate();
  return s;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "job_id,time,task_id,owned,spot,ondemand,remaining\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.job_id << ',';
    std::snprintf(buf, sizeof buf, "%.10g", r.slot.time);
    out << buf << ',' << r.slot.task_id << ',' << r.slot.owned << ',' << r.slot.spot_granted << ','
        << r.slot.ondemand << ',';
    std::snprintf(buf, sizeof buf, "%.10g", r.slot.remaining);
    out << buf << '\n';
  }
}

}  // namespace spotdag::harness
