#pragma once

#include <stdexcept>
#include <vector>

#include "vcqa/hamiltonian.hpp"
#include "vcqa/pauli.hpp"

namespace vcqa::evolve {

struct IntegratorOptions {
  double dt = 0.0;          ///< initial step; 0 picks total_time / 500
  double tolerance = 1e-6;  ///< final-energy agreement between refinements;
                            ///< <= 0 disables refinement (single pass)
  int max_refinements = 12;
  int n_samples = 2;        ///< uniform sample times, endpoints included
  bool store_states = true;
  double krylov_tol = 1e-12;
  int krylov_max_dim = 40;
};

/// Time-sampled output of one propagation. The expectation and commutator
/// series are always recorded at the sample times; states are kept unless
/// the caller asked for the lean form.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> exp_initial;  ///< <H_i>
  std::vector<double> exp_final;    ///< <H_f>
  std::vector<double> exp_aux;      ///< <H_aux>
  std::vector<double> comm_fi;      ///< i<[H_f, H_i]>
  std::vector<double> comm_ai;      ///< i<[H_aux, H_i]>
  std::vector<double> comm_af;      ///< i<[H_aux, H_f]>
  std::vector<double> norms;
  double total_time = 0.0;
  double dt_used = 0.0;
  int refinements = 0;

  std::size_t n_samples() const { return times.size(); }
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_energy(previous),
        last_energy(last) {}
  double previous_energy;
  double last_energy;
};

/// Schrodinger propagation from the transverse-field ground state under
/// F1 H_i + F2 H_f + F3 H_aux, by midpoint exponential stepping with the
/// exponential applied through a matrix-free Krylov action. Halves the step
/// until the final energy moves by less than the tolerance.
Trajectory propagate(const AnnealSetup& setup,
                     const IntegratorOptions& options = {});

/// Re(<psi|H|psi>), asserting the imaginary residue is negligible.
double expectation(const PauliSum& h, const StateVector& psi);

class UndefinedMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |(E0 - <psi|H_f|psi>) / E0| * 100. Refuses |E0| under the floor rather
/// than returning an unbounded ratio.
double percent_error(const StateVector& psi_final, const PauliSum& h_final,
                     double ground_energy, double energy_floor = 1e-8);

/// Squared norm of the projection onto the ground eigenspace; equals the
/// plain overlap-squared when the level is non-degenerate.
double fidelity(const StateVector& psi_final,
                const std::vector<StateVector>& ground_basis);

struct EvolutionMetrics {
  double final_energy = 0.0;
  double err_pct = 0.0;
  double fidelity = 0.0;
  double wall_seconds = 0.0;
  double dt_used = 0.0;
  int refinements = 0;
  double norm_drift = 0.0;
};

/// Propagate and score against the exact ground state of H_f.
EvolutionMetrics evaluate_run(const AnnealSetup& setup,
                              const GroundState& ground,
                              const IntegratorOptions& options = {});

/// Exponential action exp(-i dt H) psi for one frozen Hamiltonian, exposed
/// for tests. H must be Hermitian.
StateVector krylov_exp_step(const PauliSum& h, double dt,
                            const StateVector& psi, double tol = 1e-12,
                            int max_dim = 40);

}  // namespace vcqa::evolve
