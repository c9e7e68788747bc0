#include <doctest.h>

#include <cmath>
#include <random>

#include "vcqa/instances.hpp"
#include "vcqa/optimize.hpp"

using namespace vcqa;
using optimize::Bounds;
using optimize::OptimizerConfig;

namespace {

OptimizerConfig quick_config(std::uint64_t seed = 1) {
  OptimizerConfig config;
  config.seed = seed;
  config.max_evals = 200;
  config.restarts = 2;
  config.integrator.dt = 0.0;  // T / 500
  config.integrator.tolerance = 1e-5;
  return config;
}

}  // namespace

TEST_CASE("nelder-mead recovers the minimizer of a frozen quadratic") {
  const std::vector<double> target{0.3, 0.45, 0.6, 0.25, 0.55, 0.7};
  const optimize::CostFunction quadratic =
      [&](std::span<const double> x) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
          sum += (x[i] - target[i]) * (x[i] - target[i]);
        return sum;
      };
  const std::vector<double> start{0.9, 0.1, 0.2, 0.8, 0.15, 0.05};
  const std::vector<Bounds> bounds(6, Bounds{0.0, 1.0});
  const auto result =
      optimize::nelder_mead(quadratic, start, bounds, 1200, 0.15, 1e-14, 1e-12);
  REQUIRE(result.best_params.size() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(result.best_params[i] == doctest::Approx(target[i]).epsilon(1e-4));
  CHECK(result.best_cost < 1e-8);
}

TEST_CASE("nelder-mead respects the box") {
  // Unconstrained minimizer sits outside the box; every evaluation and the
  // final answer must stay inside.
  const optimize::CostFunction cost = [](std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += (v - 2.0) * (v - 2.0);
    return sum;
  };
  const std::vector<double> start{0.5, 0.5};
  const std::vector<Bounds> bounds(2, Bounds{0.0, 1.0});
  const auto result =
      optimize::nelder_mead(cost, start, bounds, 300, 0.2, 1e-12, 1e-10);
  for (double v : result.best_params) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(result.best_params[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("running minimum of the cost history is non-increasing and the "
          "reported best matches it") {
  const optimize::CostFunction rosenbrock = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const std::vector<double> start{0.2, 0.8};
  const std::vector<Bounds> bounds(2, Bounds{0.0, 1.0});
  const auto result =
      optimize::nelder_mead(rosenbrock, start, bounds, 400, 0.15, 1e-12, 1e-10);
  double running = result.cost_history.front();
  for (double f : result.cost_history) running = std::min(running, f);
  CHECK(result.best_cost == running);
}

TEST_CASE("failed evaluations count as infinity and are survivable") {
  int calls = 0;
  const optimize::CostFunction flaky = [&](std::span<const double> x) {
    ++calls;
    if (calls % 3 == 0) throw std::runtime_error("synthetic failure");
    return (x[0] - 0.5) * (x[0] - 0.5);
  };
  const std::vector<double> start{0.1};
  const std::vector<Bounds> bounds(1, Bounds{0.0, 1.0});
  const auto result =
      optimize::nelder_mead(flaky, start, bounds, 100, 0.2, 1e-12, 1e-10);
  CHECK(result.best_cost < 1e-3);
}

TEST_CASE("all-failing cost raises an optimization error") {
  const optimize::CostFunction broken = [](std::span<const double>) -> double {
    throw std::runtime_error("always fails");
  };
  const std::vector<double> start{0.5};
  const std::vector<Bounds> bounds(1, Bounds{0.0, 1.0});
  CHECK_THROWS_AS(
      optimize::nelder_mead(broken, start, bounds, 50, 0.2, 1e-12, 1e-10),
      optimize::OptimizationError);
}

TEST_CASE("cost at the ramp-equivalent point replays the propagation") {
  const auto instances =
      harness::generate_instances(Connectivity::linear, 2, 1, 1234);
  const auto& inst = instances[0];
  const auto config = quick_config();
  const auto params = schedule::ramp_equivalent_params(2, true);

  const double from_cost =
      optimize::cost(params, inst, 5.0, AuxAxis::z, config);

  const auto schedules =
      optimize::schedules_from_params(params, config, AuxAxis::z);
  auto setup = make_setup(inst, schedules, 5.0, AuxAxis::z);
  evolve::IntegratorOptions opts = config.integrator;
  opts.n_samples = 2;
  opts.store_states = false;
  const double direct = evolve::propagate(setup, opts).exp_final.back();
  CHECK(from_cost == direct);
}

TEST_CASE("variational bound: cost never beats the exact ground energy") {
  const auto instances =
      harness::generate_instances(Connectivity::linear, 2, 3, 77);
  const auto config = quick_config();
  for (const auto& inst : instances) {
    const double e0 = ground_state(spin_glass(inst)).energy;
    for (std::uint64_t s : {1ull, 2ull, 3ull}) {
      std::mt19937_64 rng(s);
      std::vector<double> params(6);
      for (auto& p : params)
        p = static_cast<double>(rng() >> 11) * 0x1p-53;
      const double c = optimize::cost(params, inst, 3.0, AuxAxis::z, config);
      CHECK(c >= e0 - 1e-9);
    }
  }
}

TEST_CASE("minimize on a seeded 2-qubit chain beats the ramp start" *
          doctest::timeout(300)) {
  const auto instances =
      harness::generate_instances(Connectivity::linear, 2, 1, 42);
  const auto& inst = instances[0];
  auto config = quick_config(9);
  config.max_evals = 150;
  config.restarts = 1;

  const auto ramp_point = schedule::ramp_equivalent_params(2, true);
  const double ramp_cost =
      optimize::cost(ramp_point, inst, 5.0, AuxAxis::z, config);
  const auto result = optimize::minimize(inst, 5.0, AuxAxis::z, config);

  CHECK(result.best_cost <= ramp_cost);
  CHECK(result.best_cost >= ground_state(spin_glass(inst)).energy - 1e-9);
  CHECK(result.eval_count <= 150);
  for (std::size_t i = 0; i < result.best_params.size(); ++i) {
    CHECK(result.best_params[i] >= 0.0);
    CHECK(result.best_params[i] <= 1.0);
  }
}

TEST_CASE("determinism: identical seeds give identical best parameters" *
          doctest::timeout(300)) {
  const auto instances =
      harness::generate_instances(Connectivity::linear, 2, 1, 4242);
  auto config = quick_config(31);
  config.max_evals = 60;
  config.restarts = 2;
  const auto a = optimize::minimize(instances[0], 2.0, AuxAxis::z, config);
  const auto b = optimize::minimize(instances[0], 2.0, AuxAxis::z, config);
  REQUIRE(a.best_params.size() == b.best_params.size());
  for (std::size_t i = 0; i < a.best_params.size(); ++i)
    CHECK(a.best_params[i] == b.best_params[i]);
  CHECK(a.best_cost == b.best_cost);
  CHECK(a.eval_count == b.eval_count);
}

TEST_CASE("minimize surfaces total failure of the cost pipeline") {
  const auto instances =
      harness::generate_instances(Connectivity::linear, 2, 1, 2);
  auto config = quick_config();
  config.max_evals = 20;
  config.restarts = 2;
  // Impossible refinement demand: every propagation throws, every start
  // fails, minimize must raise rather than return garbage.
  config.integrator.dt = 1.0;
  config.integrator.tolerance = 1e-18;
  config.integrator.max_refinements = 1;
  CHECK_THROWS_AS(optimize::minimize(instances[0], 2.0, AuxAxis::z, config),
                  optimize::OptimizationError);
}

TEST_CASE("minimize works for a non-commuting auxiliary axis" *
          doctest::timeout(300)) {
  const auto instances =
      harness::generate_instances(Connectivity::linear, 2, 1, 64);
  auto config = quick_config(5);
  config.max_evals = 60;
  config.restarts = 1;
  const auto result = optimize::minimize(instances[0], 2.0, AuxAxis::y, config);
  CHECK(result.best_params.size() == 6);
  CHECK(std::isfinite(result.best_cost));
}

TEST_CASE("vcqa_run without an auxiliary axis optimizes four parameters" *
          doctest::timeout(300)) {
  const auto instances =
      harness::generate_instances(Connectivity::linear, 2, 1, 55);
  auto config = quick_config(3);
  config.max_evals = 80;
  config.restarts = 1;
  const auto [result, metrics] =
      optimize::vcqa_run(instances[0], 3.0, AuxAxis::none, config);
  CHECK(result.best_params.size() == 4);
  CHECK(metrics.err_pct >= 0.0);
  CHECK(metrics.fidelity >= 0.0);
  CHECK(metrics.fidelity <= 1.0);

  // Replay identity: scoring the stored best parameters reproduces the
  // stored best cost within the integrator tolerance.
  const double replayed = optimize::cost(result.best_params, instances[0], 3.0,
                                         AuxAxis::none, config);
  CHECK(replayed == doctest::Approx(result.best_cost).epsilon(1e-9));
}
