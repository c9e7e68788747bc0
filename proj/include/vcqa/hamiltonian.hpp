#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcqa/pauli.hpp"
#include "vcqa/schedule.hpp"

namespace vcqa {

enum class Connectivity { linear, cyclic, star, full, heisenberg };
enum class AuxAxis { none, x, y, z };

Connectivity connectivity_from_string(const std::string& name);
std::string to_string(Connectivity c);
AuxAxis aux_axis_from_string(const std::string& name);
std::string to_string(AuxAxis a);

struct Edge {
  int i = 0;  ///< 1-based site indices
  int j = 0;
  double g = 0.0;
};

struct HeisenbergParams {
  double omega = 1.0;
  double g = 0.1;
  double delta = 5.0;
};

/// One problem draw: local fields and couplings on a named graph. For the
/// Heisenberg case the couplings list is empty and the chain parameters are
/// carried explicitly; omegas then holds the uniform field, which doubles as
/// the auxiliary-Hamiltonian frequency.
struct ProblemInstance {
  Connectivity connectivity = Connectivity::linear;
  int n_qubits = 0;
  std::vector<double> omegas;
  std::vector<Edge> couplings;
  std::optional<HeisenbergParams> heisenberg;
  std::uint64_t seed = 0;

  /// Checks sizes and that the edge list matches the connectivity tag.
  void validate() const;
};

/// Expected edge list (i, j) pairs for a connectivity at a given size.
std::vector<std::pair<int, int>> connectivity_edges(Connectivity c,
                                                    int n_qubits);

/// Transverse-field operator: epsilon * sum_j X_j.
PauliSum initial_hamiltonian(int n_qubits, double epsilon);

/// Its ground state, amplitudes (-1)^{popcount} / 2^{N/2}.
StateVector minus_state(int n_qubits);

/// Diagonal Ising operator: sum omega_j Z_j + sum g_{jk} Z_j Z_k.
PauliSum spin_glass(const ProblemInstance& instance);

/// Open chain with Z fields plus XX, YY (scaled by delta) and ZZ couplings.
PauliSum heisenberg_chain(int n_qubits, double omega, double g, double delta);

/// Local operator sum omega_j sigma^axis_j; AuxAxis::none gives the zero
/// operator.
PauliSum aux_hamiltonian(const ProblemInstance& instance, AuxAxis axis);

/// spin_glass or heisenberg_chain, per the instance tag.
PauliSum final_hamiltonian(const ProblemInstance& instance);

/// One complete evolution definition.
struct AnnealSetup {
  PauliSum h_initial;
  PauliSum h_final;
  PauliSum h_aux;
  schedule::ScheduleSet schedules;
  double total_time = 1.0;
  double epsilon = 1.0;

  int n_qubits() const { return h_initial.n_qubits(); }
  void validate() const;
};

/// Convenience constructor from an instance: H_i(N, epsilon), the instance's
/// final Hamiltonian, and the axis-selected auxiliary operator.
AnnealSetup make_setup(const ProblemInstance& instance,
                       const schedule::ScheduleSet& schedules, double total_time,
                       AuxAxis axis, double epsilon = 1.0);

/// F1(s) H_i + F2(s) H_f + F3(s) H_aux with duplicate strings merged.
PauliSum assemble(const AnnealSetup& setup, double s);

struct GroundState {
  double energy = 0.0;
  std::vector<StateVector> basis;  ///< orthonormal basis of the eigenspace
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest eigenvalue and its eigenspace. Diagonal operators are scanned
/// directly; dense diagonalization below dense_cap qubits, Lanczos up to
/// hard_cap, refusal above.
GroundState ground_state(const PauliSum& h, double degeneracy_rtol = 1e-9,
                         int hard_cap = 14, int dense_cap = 10);

}  // namespace vcqa
