#include <doctest.h>

#include <algorithm>
#include <map>

#include "spotdag/chainify.hpp"
#include "spotdag/errors.hpp"
#include "spotdag/windows.hpp"
#include "test_support.hpp"

using namespace spotdag;
using chainify::DagJob;
using chainify::TaskSpec;

namespace {

DagJob diamond() {
  // e = (1, 2, 3, 1) with delta 1
  return DagJob::make(1, 0.0, 10.0, {{1, 1.0, 1}, {2, 2.0, 1}, {3, 3.0, 1}, {4, 1.0, 1}},
                      {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
}

}  // namespace

TEST_CASE("task min execution time") {
  CHECK(TaskSpec{1, 2.0, 4}.min_exec_time() == doctest::Approx(0.5));
  CHECK_THROWS_AS(TaskSpec::make(1, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(TaskSpec::make(1, 1.0, 0), std::invalid_argument);
}

TEST_CASE("critical path examples") {
  CHECK(chainify::critical_path(DagJob::make(1, 0, 1, {{1, 2.0, 4}}, {})) == doctest::Approx(0.5));
  CHECK(chainify::critical_path(DagJob::make(1, 0, 5, {{1, 1.0, 1}, {2, 2.0, 1}}, {{1, 2}})) == doctest::Approx(3.0));

  const auto d = diamond();
  const double oracle = testing::enumerate_longest_path(d.tasks(), d.edge_ids());
  CHECK(oracle == doctest::Approx(5.0));
  CHECK(chainify::critical_path(d) == doctest::Approx(oracle));
}

TEST_CASE("cycles and bad ids are structural errors") {
  chainify::TaskGraph g;
  g.tasks = {{1, 1.0, 1}, {2, 1.0, 1}};
  g.edges = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(chainify::critical_path(g), StructuralError);
  CHECK_THROWS_AS(DagJob::make(1, 0, 5, {{1, 1.0, 1}, {2, 1.0, 1}}, {{1, 2}, {2, 1}}), StructuralError);
  CHECK_THROWS_AS(DagJob::make(1, 0, 5, {{1, 1.0, 1}}, {{1, 7}}), StructuralError);
  CHECK_THROWS_AS(DagJob::make(1, 0, 5, {{1, 1.0, 1}, {1, 1.0, 1}}, {}), StructuralError);
}

TEST_CASE("infeasible deadline rejected with deficit") {
  try {
    DagJob::make(1, 0.0, 2.0, {{1, 1.0, 1}, {2, 2.0, 1}}, {{1, 2}});
    FAIL("expected InfeasibleWindow");
  } catch (const InfeasibleWindow& e) {
    CHECK(e.deficit() == doctest::Approx(1.0));
  }
}

TEST_CASE("pseudo schedule examples") {
  auto chain = chainify::pseudo_schedule(DagJob::make(1, 0, 5, {{1, 1.0, 1}, {2, 2.0, 1}}, {{1, 2}}));
  CHECK(chain.start_times == std::vector<double>{0.0, 1.0});
  CHECK(chain.completion == doctest::Approx(3.0));
  CHECK(chain.breakpoints == std::vector<double>{0.0, 1.0, 3.0});

  auto pair = chainify::pseudo_schedule(DagJob::make(1, 0, 5, {{1, 2.0, 1}, {2, 1.0, 1}}, {}));
  CHECK(pair.start_times == std::vector<double>{0.0, 0.0});
  CHECK(pair.completion == doctest::Approx(2.0));
  CHECK(pair.breakpoints == std::vector<double>{0.0, 1.0, 2.0});

  auto dia = chainify::pseudo_schedule(diamond());
  CHECK(dia.start_times == std::vector<double>{0.0, 1.0, 1.0, 4.0});
  CHECK(dia.completion == doctest::Approx(5.0));
}

TEST_CASE("pseudo schedule starts are tight earliest starts") {
  auto g = rng::stream(11, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto rd = testing::random_dag(g, 10);
    const double a = rng::uniform(g, 0.0, 5.0);
    const auto dag = DagJob::make(1, a, a + 100.0, rd.tasks, rd.edges);
    const auto ps = chainify::pseudo_schedule(dag);
    for (std::size_t i = 0; i < rd.tasks.size(); ++i) {
      double tight = a;
      bool has_pred = false;
      for (auto [p, s] : rd.edges) {
        if (s != rd.tasks[i].id) continue;
        has_pred = true;
        const auto pi = static_cast<std::size_t>(p - 1);
        REQUIRE(ps.start_times[i] >= ps.start_times[pi] + rd.tasks[pi].min_exec_time() - 1e-12);
        tight = std::max(tight, ps.start_times[pi] + rd.tasks[pi].min_exec_time());
      }
      CHECK(ps.start_times[i] == doctest::Approx(has_pred ? tight : a).epsilon(1e-12));
    }
    CHECK(std::is_sorted(ps.breakpoints.begin(), ps.breakpoints.end()));
  }
}

TEST_CASE("transform examples") {
  auto chain = chainify::transform(DagJob::make(1, 0, 5, {{1, 2.0, 2}, {2, 2.0, 1}}, {{1, 2}}));
  REQUIRE(chain.tasks.size() == 2);
  CHECK(chain.tasks[0].parallelism == 2);
  CHECK(chain.tasks[0].size == doctest::Approx(2.0));
  CHECK(chain.tasks[1].parallelism == 1);
  CHECK(chain.tasks[1].size == doctest::Approx(2.0));

  // A (e=2, delta=1), B (e=1, delta=2), unrelated: intervals [0,1], [1,2]
  auto pair = chainify::transform(DagJob::make(1, 0, 5, {{1, 2.0, 1}, {2, 2.0, 2}}, {}));
  REQUIRE(pair.tasks.size() == 2);
  CHECK(pair.tasks[0].parallelism == 3);
  CHECK(pair.tasks[0].size == doctest::Approx(3.0));
  CHECK(pair.tasks[1].parallelism == 1);
  CHECK(pair.tasks[1].size == doctest::Approx(1.0));
  CHECK(pair.arrival == 0.0);
  CHECK(pair.deadline == 5.0);
}

TEST_CASE("chains pass through unchanged") {
  const std::vector<TaskSpec> tasks{{3, 1.0, 2}, {1, 4.0, 4}, {2, 0.5, 1}};
  const auto dag = DagJob::make(9, 1.0, 20.0, tasks, {{3, 1}, {1, 2}});
  REQUIRE(dag.is_chain());
  const auto chain = chainify::transform(dag);
  CHECK(chain.tasks == tasks);
  CHECK(chain.id == 9);
}

TEST_CASE("coincident breakpoints merge") {
  // both tasks end at 1, so there is a single interval
  const auto dag = DagJob::make(1, 0.0, 10.0, {{1, 1.0, 1}, {2, 3.0, 3}}, {});
  const auto chain = chainify::transform(dag);
  REQUIRE(chain.tasks.size() == 1);
  CHECK(chain.tasks[0].parallelism == 4);
  CHECK(chain.total_workload() == doctest::Approx(4.0));
  CHECK(chain.origin_map[0].size() == 2);
}

namespace {

// Replays a chain window plan as a schedule of the original tasks via origin_map.
struct Piece {
  int task_id;
  double start;
  double end;
  int instances;
  double work;
};

std::vector<Piece> induced_schedule(const chainify::ChainJob& chain, const windows::WindowPlan& plan,
                                    const std::map<int, TaskSpec>& original) {
  std::vector<Piece> out;
  for (std::size_t k = 0; k < chain.tasks.size(); ++k) {
    for (const auto& share : chain.origin_map[k]) {
      const auto& t = original.at(share.task_id);
      const double len = share.workload / t.parallelism;
      out.push_back({share.task_id, plan.start(k), plan.start(k) + len, t.parallelism, share.workload});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("transformation properties on random DAGs") {
  auto g = rng::stream(5, 0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto rd = testing::random_dag(g, 10);
    const double a = rng::uniform(g, 0.0, 3.0);
    double total = 0.0;
    for (const auto& t : rd.tasks) total += t.size;
    const double cp = testing::enumerate_longest_path(rd.tasks, rd.edges);
    const auto dag = DagJob::make(rep, a, a + cp * rng::uniform(g, 1.0, 2.5), rd.tasks, rd.edges);
    const auto chain = chainify::transform(dag);

    CHECK(chain.total_workload() == doctest::Approx(total).epsilon(1e-9));
    CHECK(chain.total_min_exec_time() == doctest::Approx(cp).epsilon(1e-9));
    CHECK(chain.tasks.size() == chain.origin_map.size());

    std::map<int, TaskSpec> original;
    for (const auto& t : rd.tasks) original[t.id] = t;
    for (std::size_t k = 0; k < chain.tasks.size(); ++k) {
      int delta = 0;
      double work = 0.0;
      for (const auto& s : chain.origin_map[k]) {
        delta += original[s.task_id].parallelism;
        work += s.workload;
      }
      CHECK(delta == chain.tasks[k].parallelism);
      CHECK(work == doctest::Approx(chain.tasks[k].size).epsilon(1e-9));
    }

    // idempotence through the chain-as-DAG view
    const auto again = chainify::transform(chainify::as_dag(chain));
    REQUIRE(again.tasks.size() == chain.tasks.size());
    for (std::size_t k = 0; k < chain.tasks.size(); ++k) {
      CHECK(again.tasks[k].id == chain.tasks[k].id);
      CHECK(again.tasks[k].parallelism == chain.tasks[k].parallelism);
      CHECK(again.tasks[k].size == doctest::Approx(chain.tasks[k].size).epsilon(1e-9));
    }

    // feasibility transfer: a random valid window plan for the chain
    const double slack = dag.deadline() - dag.arrival() - chain.total_min_exec_time();
    std::vector<double> sizes;
    double left = std::max(slack, 0.0);
    for (const auto& t : chain.tasks) {
      const double extra = rng::uniform(g, 0.0, left);
      left -= extra;
      sizes.push_back(t.min_exec_time() + extra);
    }
    const auto plan = windows::WindowPlan::from_sizes(chain.tasks, chain.arrival, sizes);
    REQUIRE(plan.is_valid(chain.tasks, chain.deadline));
    const auto pieces = induced_schedule(chain, plan, original);

    std::map<int, double> done, first_start, last_end;
    for (const auto& p : pieces) {
      done[p.task_id] += p.work;
      first_start.try_emplace(p.task_id, p.start);
      first_start[p.task_id] = std::min(first_start[p.task_id], p.start);
      last_end[p.task_id] = std::max(last_end[p.task_id], p.end);
      CHECK(p.instances <= original[p.task_id].parallelism);
      CHECK(p.end <= chain.deadline + 1e-9);
    }
    for (const auto& t : rd.tasks) CHECK(done[t.id] == doctest::Approx(t.size).epsilon(1e-9));
    for (auto [pred, succ] : rd.edges) CHECK(first_start[succ] >= last_end[pred] - 1e-9);
    // pieces of one task never overlap, so it never exceeds its parallelism
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (std::size_t j = i + 1; j < pieces.size(); ++j) {
        if (pieces[i].task_id != pieces[j].task_id) continue;
        const bool disjoint = pieces[i].end <= pieces[j].start + 1e-9 || pieces[j].end <= pieces[i].start + 1e-9;
        CHECK(disjoint);
      }
    }
  }
}
