#pragma once

#include <stdexcept>
#include <vector>

#include "vcqa/evolve.hpp"
#include "vcqa/hamiltonian.hpp"

namespace vcqa::annealtime {

using DensityMatrix = Eigen::MatrixXcd;

/// (1/T) integral of |psi><psi| over the trajectory, trapezoid weights.
/// Needs the stored states; Hermitian, unit trace, positive semidefinite.
DensityMatrix time_averaged_density(const evolve::Trajectory& traj);

/// i Tr(rho [A, B]); real for Hermitian A, B. The imaginary residue is
/// checked against 1e-10.
double commutator_expectation(const DensityMatrix& rho, const PauliSum& a,
                              const PauliSum& b);
double commutator_expectation(const StateVector& psi, const PauliSum& a,
                              const PauliSum& b);

/// Per-observable mismatch between the finite-difference time derivative of
/// the sampled expectation and its commutator form, at interior samples.
struct ResidualSeries {
  std::vector<double> residuals;
  double max_abs = 0.0;
  double rms = 0.0;
};
struct EhrenfestResiduals {
  ResidualSeries initial;  ///< d<H_i>/dt identity
  ResidualSeries final;    ///< d<H_f>/dt identity
  ResidualSeries aux;      ///< d<H_aux>/dt identity
};
EhrenfestResiduals ehrenfest_residual(const evolve::Trajectory& traj,
                                      const AnnealSetup& setup);

class SingularScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DivergentLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DegenerateDynamicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schedule-shape correction to the annealing-time relation:
/// integral of (<H_f> - <H_i>) d/dt(1/F_sigma) - <H_aux> d/dt(R31/F_sigma),
/// with F_sigma = F1 + F2 and R31 = F3/F1. Quadrature over the trajectory
/// samples with analytic schedule derivatives; the endpoint value of the
/// R31 factor comes from a series limit, escalating to second and third
/// derivatives when the lower ones vanish.
double coefficient_c(const evolve::Trajectory& traj,
                     const schedule::ScheduleSet& schedules);

struct AnnealTimeReport {
  double t_actual = 0.0;
  double t_predicted = 0.0;
  double coefficient_c = 0.0;
  double denominator = 0.0;       ///< i Tr(rho_bar [H_f, H_i])
  double boundary_term_tf = 0.0;  ///< R31 <H_aux> / F_sigma limit at t_f
  double boundary_term_t0 = 0.0;
  double numerator = 0.0;
  double residual = 0.0;          ///< |t_predicted - t_actual| / t_actual
  bool reduced_form = false;      ///< F3 == 0 and F_sigma == 1 shortcut
  /// Numerator and prediction with the t_f boundary term and the initial
  /// <H_i> endpoint dropped, the way the reduced relation is usually quoted.
  double numerator_dropped_terms = 0.0;
  double t_predicted_dropped_terms = 0.0;
};

/// Self-consistency check of the annealing-time relation on one finished
/// trajectory. Throws DegenerateDynamicsError when the denominator is below
/// 1e-10 and refuses non-commuting auxiliary Hamiltonians.
AnnealTimeReport annealing_time_prediction(const evolve::Trajectory& traj,
                                           const AnnealSetup& setup);

}  // namespace vcqa::annealtime
