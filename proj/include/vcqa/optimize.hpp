#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vcqa/evolve.hpp"
#include "vcqa/hamiltonian.hpp"

namespace vcqa::optimize {

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct OptimizerConfig {
  int max_evals = 400;         ///< budget per start
  int restarts = 3;            ///< independent starts, first one at the ramp point
  double simplex_scale = 0.15; ///< initial simplex edge, fraction of the box
  double f_tol = 1e-10;        ///< spread termination
  double x_tol = 1e-9;         ///< simplex-size termination
  std::uint64_t seed = 0;
  int params_per_schedule = 2;
  double epsilon = 1.0;  ///< transverse-field scale of H_i
  Bounds f1_bounds, f2_bounds, f3_bounds;
  evolve::IntegratorOptions integrator;  ///< used for cost evaluations
};

struct OptimizationResult {
  std::vector<double> best_params;
  double best_cost = 0.0;
  int eval_count = 0;
  std::vector<double> cost_history;  ///< cost at every evaluation, in order
  bool converged = false;
};

class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CostFunction = std::function<double(std::span<const double>)>;

/// Bounded Nelder-Mead from one start; every candidate is clipped to the box
/// before evaluation, so the cost function only sees feasible points.
/// Failed evaluations count as +infinity.
OptimizationResult nelder_mead(const CostFunction& cost,
                               std::span<const double> start,
                               std::span<const Bounds> bounds,
                               int max_evals, double simplex_scale,
                               double f_tol, double x_tol);

/// Per-coordinate boxes for the flat parameter vector (F1 block, F2 block,
/// and the F3 block when the axis is not none).
std::vector<Bounds> parameter_bounds(const OptimizerConfig& config,
                                     AuxAxis axis);

/// Schedules from the flat parameter vector, split per schedule role.
schedule::ScheduleSet schedules_from_params(std::span<const double> params,
                                            const OptimizerConfig& config,
                                            AuxAxis axis);

/// Final energy <psi_T|H_f|psi_T> of the propagation under the schedules the
/// parameters describe. This is the variational objective.
double cost(std::span<const double> params, const ProblemInstance& instance,
            double total_time, AuxAxis axis, const OptimizerConfig& config);

/// Multi-start bounded simplex search over the schedule parameters.
/// Deterministic given the instance and config seeds.
OptimizationResult minimize(const ProblemInstance& instance, double total_time,
                            AuxAxis axis, const OptimizerConfig& config);

/// minimize, then one scoring propagation at the best parameters against the
/// exact ground state of H_f.
std::pair<OptimizationResult, evolve::EvolutionMetrics> vcqa_run(
    const ProblemInstance& instance, double total_time, AuxAxis axis,
    const OptimizerConfig& config,
    const evolve::IntegratorOptions& metrics_integrator = {});

}  // namespace vcqa::optimize
