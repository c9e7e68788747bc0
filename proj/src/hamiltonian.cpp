#include "vcqa/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "vcqa/spectrum.hpp"

namespace vcqa {

Connectivity connectivity_from_string(const std::string& name) {
  if (name == "linear") return Connectivity::linear;
  if (name == "cyclic") return Connectivity::cyclic;
  if (name == "star") return Connectivity::star;
  if (name == "full") return Connectivity::full;
  if (name == "heisenberg") return Connectivity::heisenberg;
  throw std::invalid_argument("unknown connectivity: " + name);
}

std::string to_string(Connectivity c) {
  switch (c) {
    case Connectivity::linear: return "linear";
    case Connectivity::cyclic: return "cyclic";
    case Connectivity::star: return "star";
    case Connectivity::full: return "full";
    case Connectivity::heisenberg: return "heisenberg";
  }
  return "?";
}

AuxAxis aux_axis_from_string(const std::string& name) {
  if (name == "none") return AuxAxis::none;
  if (name == "x") return AuxAxis::x;
  if (name == "y") return AuxAxis::y;
  if (name == "z") return AuxAxis::z;
  throw std::invalid_argument("unknown auxiliary axis: " + name);
}

std::string to_string(AuxAxis a) {
  switch (a) {
    case AuxAxis::none: return "none";
    case AuxAxis::x: return "x";
    case AuxAxis::y: return "y";
    case AuxAxis::z: return "z";
  }
  return "?";
}

std::vector<std::pair<int, int>> connectivity_edges(Connectivity c,
                                                    int n_qubits) {
  std::vector<std::pair<int, int>> edges;
  switch (c) {
    case Connectivity::linear:
      for (int j = 1; j < n_qubits; ++j) edges.emplace_back(j, j + 1);
      break;
    case Connectivity::cyclic:
      for (int j = 1; j < n_qubits; ++j) edges.emplace_back(j, j + 1);
      if (n_qubits >= 2) edges.emplace_back(n_qubits, 1);
      break;
    case Connectivity::star:
      for (int j = 2; j <= n_qubits; ++j) edges.emplace_back(1, j);
      break;
    case Connectivity::full:
      for (int j = 1; j <= n_qubits; ++j)
        for (int k = j + 1; k <= n_qubits; ++k) edges.emplace_back(j, k);
      break;
    case Connectivity::heisenberg:
      break;  // couplings carried by HeisenbergParams, not an edge list
  }
  return edges;
}

void ProblemInstance::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("instance needs >= 1 qubit");
  if (static_cast<int>(omegas.size()) != n_qubits)
    throw std::invalid_argument("omegas size does not match qubit count");
  if (connectivity == Connectivity::heisenberg) {
    if (!heisenberg)
      throw std::invalid_argument("heisenberg instance missing parameters");
    if (!couplings.empty())
      throw std::invalid_argument("heisenberg instance carries no edge list");
    return;
  }
  const auto expected = connectivity_edges(connectivity, n_qubits);
  if (couplings.size() != expected.size())
    throw std::invalid_argument(
        "instance has " + std::to_string(couplings.size()) + " couplings, " +
        to_string(connectivity) + " connectivity requires " +
        std::to_string(expected.size()));
  for (std::size_t e = 0; e < expected.size(); ++e) {
    if (couplings[e].i != expected[e].first ||
        couplings[e].j != expected[e].second)
      throw std::invalid_argument(
          "coupling " + std::to_string(e) + " is (" +
          std::to_string(couplings[e].i) + "," + std::to_string(couplings[e].j) +
          "), expected (" + std::to_string(expected[e].first) + "," +
          std::to_string(expected[e].second) + ")");
  }
}

PauliSum initial_hamiltonian(int n_qubits, double epsilon) {
  if (n_qubits < 1)
    throw std::domain_error("initial_hamiltonian: need >= 1 qubit");
  std::vector<PauliTerm> terms;
  terms.reserve(n_qubits);
  for (int j = 1; j <= n_qubits; ++j)
    terms.push_back(single_site_term(n_qubits, j, 'X', epsilon));
  return PauliSum(n_qubits, std::move(terms));
}

StateVector minus_state(int n_qubits) {
  if (n_qubits < 1) throw std::domain_error("minus_state: need >= 1 qubit");
  const std::size_t d = std::size_t{1} << n_qubits;
  StateVector psi(static_cast<Eigen::Index>(d));
  const double amp = std::pow(2.0, -0.5 * n_qubits);
  for (std::size_t b = 0; b < d; ++b)
    psi[static_cast<Eigen::Index>(b)] =
        (std::popcount(b) & 1) ? -amp : amp;
  return psi;
}

PauliSum spin_glass(const ProblemInstance& instance) {
  instance.validate();
  if (instance.connectivity == Connectivity::heisenberg)
    throw std::invalid_argument("spin_glass: instance is a Heisenberg chain");
  const int n = instance.n_qubits;
  std::vector<PauliTerm> terms;
  terms.reserve(instance.omegas.size() + instance.couplings.size());
  for (int j = 1; j <= n; ++j)
    terms.push_back(single_site_term(n, j, 'Z', instance.omegas[j - 1]));
  for (const auto& edge : instance.couplings)
    terms.push_back(two_site_term(n, edge.i, edge.j, 'Z', edge.g));
  return PauliSum(n, std::move(terms));
}

PauliSum heisenberg_chain(int n_qubits, double omega, double g, double delta) {
  if (n_qubits < 1)
    throw std::domain_error("heisenberg_chain: need >= 1 qubit");
  std::vector<PauliTerm> terms;
  for (int j = 1; j <= n_qubits; ++j)
    terms.push_back(single_site_term(n_qubits, j, 'Z', omega));
  for (int j = 1; j < n_qubits; ++j) {
    terms.push_back(two_site_term(n_qubits, j, j + 1, 'X', g));
    terms.push_back(two_site_term(n_qubits, j, j + 1, 'Y', g * delta));
    terms.push_back(two_site_term(n_qubits, j, j + 1, 'Z', g));
  }
  return PauliSum(n_qubits, std::move(terms));
}

PauliSum aux_hamiltonian(const ProblemInstance& instance, AuxAxis axis) {
  instance.validate();
  if (axis == AuxAxis::none) return PauliSum::zero(instance.n_qubits);
  const char op = axis == AuxAxis::x ? 'X' : axis == AuxAxis::y ? 'Y' : 'Z';
  std::vector<PauliTerm> terms;
  terms.reserve(instance.omegas.size());
  for (int j = 1; j <= instance.n_qubits; ++j)
    terms.push_back(
        single_site_term(instance.n_qubits, j, op, instance.omegas[j - 1]));
  return PauliSum(instance.n_qubits, std::move(terms));
}

PauliSum final_hamiltonian(const ProblemInstance& instance) {
  if (instance.connectivity == Connectivity::heisenberg) {
    instance.validate();
    const auto& h = *instance.heisenberg;
    return heisenberg_chain(instance.n_qubits, h.omega, h.g, h.delta);
  }
  return spin_glass(instance);
}

void AnnealSetup::validate() const {
  if (h_final.n_qubits() != h_initial.n_qubits() ||
      h_aux.n_qubits() != h_initial.n_qubits())
    throw std::invalid_argument("setup operators disagree on qubit count");
  if (!(total_time > 0.0))
    throw std::invalid_argument("total_time must be positive");
  const auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  if (!near(schedules.f1.value(0.0), 1.0) || !near(schedules.f1.value(1.0), 0.0) ||
      !near(schedules.f2.value(0.0), 0.0) || !near(schedules.f2.value(1.0), 1.0) ||
      !near(schedules.f3.value(0.0), 0.0) || !near(schedules.f3.value(1.0), 0.0))
    throw std::invalid_argument("schedules violate the boundary conditions");
}

AnnealSetup make_setup(const ProblemInstance& instance,
                       const schedule::ScheduleSet& schedules,
                       double total_time, AuxAxis axis, double epsilon) {
  AnnealSetup setup{initial_hamiltonian(instance.n_qubits, epsilon),
                    final_hamiltonian(instance),
                    aux_hamiltonian(instance, axis),
                    schedules,
                    total_time,
                    epsilon};
  setup.validate();
  return setup;
}

PauliSum assemble(const AnnealSetup& setup, double s) {
  return PauliSum::weighted_sum({{setup.schedules.f1.value(s), &setup.h_initial},
                                 {setup.schedules.f2.value(s), &setup.h_final},
                                 {setup.schedules.f3.value(s), &setup.h_aux}});
}

GroundState ground_state(const PauliSum& h, double degeneracy_rtol,
                         int hard_cap, int dense_cap) {
  if (h.n_qubits() > hard_cap)
    throw ResourceError("ground_state: " + std::to_string(h.n_qubits()) +
                        " qubits exceeds the cap of " +
                        std::to_string(hard_cap));
  const auto d = static_cast<Eigen::Index>(h.dim());
  GroundState gs;

  if (h.is_diagonal()) {
    const Eigen::VectorXd diag = h.diagonal();
    gs.energy = diag.minCoeff();
    const double tol = degeneracy_rtol * std::max(1.0, std::abs(gs.energy));
    for (Eigen::Index b = 0; b < d; ++b) {
      if (diag[b] - gs.energy <= tol) {
        StateVector e = StateVector::Zero(d);
        e[b] = 1.0;
        gs.basis.push_back(std::move(e));
      }
    }
    return gs;
  }

  if (h.n_qubits() <= dense_cap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.to_dense());
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("ground_state: dense eigensolver failed");
    const auto& evals = solver.eigenvalues();
    gs.energy = evals[0];
    const double tol = degeneracy_rtol * std::max(1.0, std::abs(gs.energy));
    for (Eigen::Index k = 0; k < d; ++k) {
      if (evals[k] - gs.energy > tol) break;
      gs.basis.push_back(solver.eigenvectors().col(k));
    }
    return gs;
  }

  // Matrix-free path for larger systems; grows the subspace until the next
  // eigenvalue clears the degeneracy tolerance.
  const int max_pairs = 8;
  const auto pairs = spectrum::lanczos_lowest(h, max_pairs);
  gs.energy = pairs.values[0];
  const double tol = degeneracy_rtol * std::max(1.0, std::abs(gs.energy));
  for (std::size_t k = 0; k < pairs.values.size(); ++k) {
    if (pairs.values[k] - gs.energy > tol) break;
    gs.basis.push_back(pairs.vectors[k]);
  }
  return gs;
}

}  // namespace vcqa
