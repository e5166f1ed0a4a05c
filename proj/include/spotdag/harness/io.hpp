#pragma once

#include <iosfwd>
#include <vector>

#include "spotdag/chainify.hpp"
#include "spotdag/harness/experiment.hpp"
#include "spotdag/harness/generator.hpp"
#include "spotdag/harness/simulation.hpp"

namespace spotdag::harness {

/// {"jobs": [{"id", "arrival", "deadline", "tasks": [{"id", "size", "parallelism"}],
///            "edges": [[pred, succ], ...]}]}
void write_jobs_json(std::ostream& out, const std::vector<chainify::DagJob>& jobs);
/// Throws std::invalid_argument on malformed input; structural checks come from DagJob::make.
std::vector<chainify::DagJob> read_jobs_json(std::istream& in);

/// Keys mirror GeneratorConfig field names; absent keys keep their defaults.
GeneratorConfig read_generator_config(std::istream& in);
void write_generator_config(std::ostream& out, const GeneratorConfig& config);

/// {"beta0": [...], "beta": [...], "bids": [...]}; absent keys keep the defaults.
PolicySets read_policy_sets(std::istream& in);

/// job_id,time,task_id,owned,spot,ondemand,remaining
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

}  // namespace spotdag::harness
