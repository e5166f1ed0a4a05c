#include <doctest.h>

#include <cmath>

#include "spotdag/errors.hpp"
#include "spotdag/harness/experiment.hpp"
#include "spotdag/harness/kernels.hpp"
#include "spotdag/learning.hpp"
#include "test_support.hpp"

using namespace spotdag;
using harness::PolicySpec;
using learning::PolicyTuple;
using learning::WeightVector;

TEST_CASE("policy tuple validation and labels") {
  CHECK_NOTHROW((PolicyTuple{0.5, 1.0, 0.3}.validate()));
  CHECK_NOTHROW((PolicyTuple{1.0, 0.5, std::nullopt}.validate()));
  CHECK_THROWS_AS((PolicyTuple{0.0, 0.5, 0.3}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PolicyTuple{0.5, 0.0, 0.3}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PolicyTuple{0.5, 1.2, 0.3}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PolicyTuple{0.5, 0.5, -0.1}.validate()), std::invalid_argument);
  CHECK(PolicyTuple{0.5, 0.5, std::nullopt}.label() == "beta0=0.5;beta=0.5;bid=null");
}

TEST_CASE("pick policy examples") {
  auto g = rng::stream(1, 0);
  WeightVector point{{1.0, 0.0, 0.0}, 1};
  for (int i = 0; i < 1000; ++i) CHECK(learning::pick_policy(point, g) == 0);

  const std::size_t n = 5;
  const auto u = WeightVector::uniform(n);
  CHECK(u.is_valid());
  std::vector<int> counts(n, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[learning::pick_policy(u, g)];
  const double sigma = std::sqrt(draws * (1.0 / n) * (1.0 - 1.0 / n));
  for (int c : counts) CHECK(std::abs(c - draws / static_cast<double>(n)) <= 3 * sigma);

  auto a = rng::stream(9, 3);
  auto b = rng::stream(9, 3);
  for (int i = 0; i < 100; ++i) CHECK(learning::pick_policy(u, a) == learning::pick_policy(u, b));
}

TEST_CASE("weight update examples") {
  // eta = 1 when 2 ln 2 / (d (t - d)) = 1
  const double d = 1.0;
  const double t = d + 2.0 * std::log(2.0);
  CHECK(learning::learning_rate(2, d, t) == doctest::Approx(1.0));
  const std::vector<double> costs{0.0, 1.0};
  const auto w = learning::update_weights(WeightVector::uniform(2), costs, t, d);
  CHECK(w.weights[0] == doctest::Approx(0.7311).epsilon(1e-4));
  CHECK(w.weights[1] == doctest::Approx(0.2689).epsilon(1e-4));
  CHECK(w.kappa == 2);

  const std::vector<double> same{0.4, 0.4, 0.4};
  WeightVector skew{{0.2, 0.3, 0.5}, 1};
  const auto unchanged = learning::update_weights(skew, same, 5.0, 2.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(unchanged.weights[i] == doctest::Approx(skew.weights[i]).epsilon(1e-14));

  CHECK(learning::learning_rate(25, 3.0, 6.0) == doctest::Approx(0.8458).epsilon(1e-4));
  CHECK_THROWS_AS(learning::learning_rate(25, 3.0, 3.0), SequencingError);
  CHECK_THROWS_AS(learning::update_weights(WeightVector::uniform(2), costs, 1.0, 2.0), SequencingError);
  CHECK_THROWS_AS(learning::update_weights(WeightVector::uniform(3), costs, 5.0, 2.0), std::invalid_argument);
}

TEST_CASE("regret bound examples") {
  const double b = learning::regret_bound(25, 9, 10000, 0.1);
  CHECK(b == doctest::Approx(9.0 * std::sqrt(2.0 * 9.0 * std::log(250.0) / 10000.0)).epsilon(1e-12));
  CHECK(std::abs(b - 0.8963) < 1e-3);
  CHECK(learning::regret_bound(1, 9, 100, 0.999999) == doctest::Approx(0.0).epsilon(1e-2));
  CHECK(learning::regret_bound(25, 9, 20000, 0.1) < learning::regret_bound(25, 9, 10000, 0.1));
}

TEST_CASE("weights keep unit mass and concentrate on a dominant policy") {
  auto g = rng::stream(2, 0);
  const std::size_t n = 25;
  auto w = WeightVector::uniform(n);
  const double d = 3.0;
  int reached = -1;
  for (int k = 0; k < 500; ++k) {
    std::vector<double> costs(n);
    for (std::size_t i = 0; i < n; ++i) costs[i] = i == 7 ? rng::uniform(g, 0.0, 0.3) : rng::uniform(g, 0.5, 1.0);
    w = learning::update_weights(w, costs, d + 0.25 * (k + 1), d);
    CHECK(w.is_valid(1e-12));
    if (reached < 0 && w.weights[7] > 0.9) reached = k + 1;
  }
  CHECK(reached > 0);
  CHECK(w.weights[7] > 0.9);
  CHECK(w.kappa == 501);
}

TEST_CASE("run_tola picks before same-instant updates") {
  const std::vector<double> arrivals{0.5, 1.5, 2.0, 4.0};
  const std::vector<std::vector<double>> costs{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  const double d = 1.0;
  auto g = rng::stream(4, 3);
  auto replay = g;
  const auto run = learning::run_tola(arrivals, costs, d, g);

  auto w = WeightVector::uniform(2);
  std::vector<std::size_t> expect;
  expect.push_back(learning::pick_policy(w, replay));  // t = 0.5
  expect.push_back(learning::pick_policy(w, replay));  // t = 1.5, update of job 0 comes after
  w = learning::update_weights(w, costs[0], 1.5, d);
  expect.push_back(learning::pick_policy(w, replay));  // t = 2.0
  w = learning::update_weights(w, costs[1], 2.5, d);
  w = learning::update_weights(w, costs[2], 3.0, d);
  expect.push_back(learning::pick_policy(w, replay));  // t = 4.0
  w = learning::update_weights(w, costs[3], 5.0, d);
  CHECK(run.picks == expect);
  CHECK(run.final_weights.kappa == w.kappa);
  for (std::size_t i = 0; i < 2; ++i) CHECK(run.final_weights.weights[i] == doctest::Approx(w.weights[i]).epsilon(1e-14));

  REQUIRE(run.log.size() == 2 * 5);
  CHECK(run.log[0].kappa == 1);
  CHECK(run.log[0].time == 0.0);
  CHECK(run.log[2].kappa == 2);
  CHECK(run.log[2].time == doctest::Approx(1.5));
}

namespace {

chainify::ChainJob small_chain(double deadline) {
  return chainify::ChainJob{1, 0.0, deadline, {{1, 2.0, 2}, {2, 3.0, 3}, {3, 1.0, 1}}, {}};
}

}  // namespace

TEST_CASE("counterfactual cost under full availability") {
  // windows reach e / beta for every task, so spot does all the work
  const auto job = small_chain(20.0);
  const market::SpotMarket flat(std::vector<double>(12 * 30, 0.2));
  const auto p = PolicySpec::proposed({1.0, 0.5, 0.3});
  CHECK(learning::counterfactual_cost(job, p, flat, 0) == doctest::Approx(0.2 * 6.0));

  const auto random = market::SpotMarket::sample(3, 30.0);
  const auto live = harness::run_job(job, PolicySpec::proposed({1.0, 0.5, 1.0}), random, nullptr);
  CHECK(live.ondemand_work == 0.0);
  CHECK(learning::counterfactual_cost(job, PolicySpec::proposed({1.0, 0.5, 1.0}), random, 0) ==
        doctest::Approx(live.spot_cost));
}

TEST_CASE("counterfactual cost with no availability") {
  const auto job = small_chain(8.0);
  const auto m = market::SpotMarket::sample(3, 30.0);
  // beta0 = 0.2 plans at rate 0.2; the last task keeps its minimal window and needs one instance
  const auto p = PolicySpec::proposed({0.2, 0.5, 0.1});
  CHECK(learning::counterfactual_cost(job, p, m, 0) == doctest::Approx(6.0));
  market::OwnedPool pool(2);
  const auto owned = harness::run_job(job, p, m, &pool);
  CHECK(owned.owned_work > 0.0);
  CHECK(learning::counterfactual_cost(job, p, m, 2) == doctest::Approx(6.0 - owned.owned_work));
  CHECK(learning::counterfactual_cost(job, p, m, 2) == learning::counterfactual_cost(job, p, m, 2));
  const market::SpotMarket short_trace(std::vector<double>(12, 0.2));
  CHECK_THROWS_AS(learning::counterfactual_cost(job, p, short_trace, 0), HorizonError);
}

TEST_CASE("counterfactual replay matches the live run without self-owned instances") {
  harness::GeneratorConfig cfg;
  cfg.job_count = 60;
  const auto w = harness::make_workload(cfg, 5);
  harness::PolicySets sets;
  const auto policies = harness::proposed_policies(sets, false);
  auto g = rng::stream(5, 3);
  std::vector<PolicySpec> assigned;
  for (std::size_t j = 0; j < w.jobs.size(); ++j) {
    assigned.push_back(policies[rng::uniform_int(g, 0, static_cast<std::int64_t>(policies.size()) - 1)]);
  }
  const auto live = harness::simulate(w.jobs, assigned, w.market, 0);
  for (std::size_t j = 0; j < w.jobs.size(); ++j) {
    CHECK(live[j].cost() == learning::counterfactual_cost(w.jobs[j], assigned[j], w.market, 0));
  }
}
