#include "vcqa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "vcqa/harness.hpp"

namespace vcqa::optimize {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void clip(std::vector<double>& x, std::span<const Bounds> bounds) {
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
}

double guarded_eval(const CostFunction& cost, std::span<const double> x) {
  try {
    const double f = cost(x);
    return std::isfinite(f) ? f : kInf;
  } catch (const std::exception&) {
    return kInf;
  }
}

}  // namespace

OptimizationResult nelder_mead(const CostFunction& cost,
                               std::span<const double> start,
                               std::span<const Bounds> bounds, int max_evals,
                               double simplex_scale, double f_tol,
                               double x_tol) {
  const int dim = static_cast<int>(start.size());
  if (dim < 1) throw std::invalid_argument("nelder_mead: empty start point");
  if (bounds.size() != start.size())
    throw std::invalid_argument("nelder_mead: bounds/start size mismatch");
  if (max_evals < dim + 2)
    throw std::invalid_argument("nelder_mead: budget below dimension + 2");

  OptimizationResult result;
  auto evaluate = [&](std::vector<double>& x) {
    clip(x, bounds);
    const double f = guarded_eval(cost, x);
    result.cost_history.push_back(f);
    ++result.eval_count;
    return f;
  };

  // Initial simplex: one step along each coordinate, flipped at the box edge.
  std::vector<std::vector<double>> simplex;
  std::vector<double> f_values;
  simplex.emplace_back(start.begin(), start.end());
  f_values.push_back(evaluate(simplex[0]));
  for (int i = 0; i < dim; ++i) {
    auto x = simplex[0];
    const double h = simplex_scale * (bounds[i].hi - bounds[i].lo);
    x[i] += (x[i] + h <= bounds[i].hi) ? h : -h;
    simplex.push_back(x);
    f_values.push_back(evaluate(simplex.back()));
  }

  std::vector<std::size_t> order(simplex.size());
  const auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return f_values[a] < f_values[b];
                     });
  };

  // An iteration may cost up to two evaluations before the shrink loop's own
  // budget check, so leave headroom.
  while (result.eval_count + 2 <= max_evals) {
    sort_simplex();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    // Termination: spread of values or simplex size.
    if (std::isfinite(f_values[best]) && std::isfinite(f_values[worst]) &&
        f_values[worst] - f_values[best] < f_tol) {
      result.converged = true;
      break;
    }
    double diameter = 0.0;
    for (int i = 0; i < dim; ++i) {
      double lo = simplex[0][i], hi = simplex[0][i];
      for (const auto& v : simplex) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
      }
      diameter = std::max(diameter, hi - lo);
    }
    if (diameter < x_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < simplex.size(); ++v) {
      if (v == worst) continue;
      for (int i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
    }
    for (auto& c : centroid) c /= dim;

    const auto blend = [&](double factor) {
      std::vector<double> x(dim);
      for (int i = 0; i < dim; ++i)
        x[i] = centroid[i] + factor * (simplex[worst][i] - centroid[i]);
      return x;
    };

    auto reflected = blend(-1.0);
    const double f_reflected = evaluate(reflected);

    if (f_reflected < f_values[best]) {
      auto expanded = blend(-2.0);
      const double f_expanded = evaluate(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = std::move(expanded);
        f_values[worst] = f_expanded;
      } else {
        simplex[worst] = std::move(reflected);
        f_values[worst] = f_reflected;
      }
    } else if (f_reflected < f_values[second_worst]) {
      simplex[worst] = std::move(reflected);
      f_values[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < f_values[worst];
      auto contracted = blend(outside ? -0.5 : 0.5);
      const double f_contracted = evaluate(contracted);
      if (f_contracted < std::min(f_reflected, f_values[worst])) {
        simplex[worst] = std::move(contracted);
        f_values[worst] = f_contracted;
      } else {
        // Shrink towards the best vertex.
        for (std::size_t v = 0; v < simplex.size(); ++v) {
          if (v == best) continue;
          for (int i = 0; i < dim; ++i)
            simplex[v][i] =
                simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
          f_values[v] = evaluate(simplex[v]);
          if (result.eval_count >= max_evals) break;
        }
      }
    }
  }

  sort_simplex();
  result.best_params = simplex[order.front()];
  result.best_cost = f_values[order.front()];
  if (!std::isfinite(result.best_cost))
    throw OptimizationError("nelder_mead: no finite cost found");
  return result;
}

std::vector<Bounds> parameter_bounds(const OptimizerConfig& config,
                                     AuxAxis axis) {
  std::vector<Bounds> bounds;
  const int n = config.params_per_schedule;
  bounds.insert(bounds.end(), n, config.f1_bounds);
  bounds.insert(bounds.end(), n, config.f2_bounds);
  if (axis != AuxAxis::none) bounds.insert(bounds.end(), n, config.f3_bounds);
  return bounds;
}

schedule::ScheduleSet schedules_from_params(std::span<const double> params,
                                            const OptimizerConfig& config,
                                            AuxAxis axis) {
  const int n = config.params_per_schedule;
  const int expected = axis == AuxAxis::none ? 2 * n : 3 * n;
  if (static_cast<int>(params.size()) != expected)
    throw std::invalid_argument("schedules_from_params: expected " +
                                std::to_string(expected) + " parameters, got " +
                                std::to_string(params.size()));
  schedule::ScheduleSet set;
  set.f1 = schedule::Schedule::from_spec(schedule::spec_for_role(
      1, params.subspan(0, n), config.f1_bounds.lo, config.f1_bounds.hi));
  set.f2 = schedule::Schedule::from_spec(schedule::spec_for_role(
      2, params.subspan(n, n), config.f2_bounds.lo, config.f2_bounds.hi));
  set.f3 = axis == AuxAxis::none
               ? schedule::Schedule::zero()
               : schedule::Schedule::from_spec(schedule::spec_for_role(
                     3, params.subspan(2 * n, n), config.f3_bounds.lo,
                     config.f3_bounds.hi));
  return set;
}

double cost(std::span<const double> params, const ProblemInstance& instance,
            double total_time, AuxAxis axis, const OptimizerConfig& config) {
  const auto schedules = schedules_from_params(params, config, axis);
  auto setup = make_setup(instance, schedules, total_time, axis,
                          config.epsilon);
  evolve::IntegratorOptions opts = config.integrator;
  opts.n_samples = 2;
  opts.store_states = false;
  const auto traj = evolve::propagate(setup, opts);
  return traj.exp_final.back();
}

OptimizationResult minimize(const ProblemInstance& instance, double total_time,
                            AuxAxis axis, const OptimizerConfig& config) {
  const auto bounds = parameter_bounds(config, axis);
  const int dim = static_cast<int>(bounds.size());
  const CostFunction objective = [&](std::span<const double> x) {
    return cost(x, instance, total_time, axis, config);
  };

  OptimizationResult merged;
  bool have_result = false;

  for (int r = 0; r < std::max(1, config.restarts); ++r) {
    std::vector<double> start;
    if (r == 0) {
      start = schedule::ramp_equivalent_params(config.params_per_schedule,
                                               axis != AuxAxis::none);
    } else {
      std::mt19937_64 rng(harness::mix_seed(config.seed, r));
      start.resize(dim);
      for (int i = 0; i < dim; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
        start[i] = bounds[i].lo + u * (bounds[i].hi - bounds[i].lo);
      }
    }

    try {
      OptimizationResult run =
          nelder_mead(objective, start, bounds, config.max_evals,
                      config.simplex_scale, config.f_tol, config.x_tol);
      merged.eval_count += run.eval_count;
      merged.cost_history.insert(merged.cost_history.end(),
                                 run.cost_history.begin(),
                                 run.cost_history.end());
      if (!have_result || run.best_cost < merged.best_cost) {
        merged.best_params = std::move(run.best_params);
        merged.best_cost = run.best_cost;
        merged.converged = run.converged;
        have_result = true;
      }
    } catch (const OptimizationError&) {
      // start produced no finite cost; try the next one
    }
  }
  if (!have_result)
    throw OptimizationError(
        "minimize: every start failed to produce a finite cost");
  return merged;
}

std::pair<OptimizationResult, evolve::EvolutionMetrics> vcqa_run(
    const ProblemInstance& instance, double total_time, AuxAxis axis,
    const OptimizerConfig& config,
    const evolve::IntegratorOptions& metrics_integrator) {
  OptimizationResult result = minimize(instance, total_time, axis, config);
  const auto schedules =
      schedules_from_params(result.best_params, config, axis);
  const auto setup =
      make_setup(instance, schedules, total_time, axis, config.epsilon);
  const auto ground = ground_state(setup.h_final);
  const auto metrics =
      evolve::evaluate_run(setup, ground, metrics_integrator);
  return {std::move(result), metrics};
}

}  // namespace vcqa::optimize
