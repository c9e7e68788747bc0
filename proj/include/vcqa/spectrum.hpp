#pragma once

#include <span>
#include <string>
#include <vector>

#include "vcqa/hamiltonian.hpp"
#include "vcqa/pauli.hpp"

namespace vcqa::spectrum {

/// Gap between the two lowest instantaneous eigenvalues along normalized
/// time, tagged with the strategy that produced the schedules.
struct GapProfile {
  std::vector<double> grid;
  std::vector<double> gaps;
  std::string strategy;
};

struct LanczosPairs {
  std::vector<double> values;
  std::vector<StateVector> vectors;
};

/// Lowest-k eigenpairs by Lanczos with full reorthogonalization; intended
/// for operators too large for dense diagonalization.
LanczosPairs lanczos_lowest(const PauliSum& h, int k, int max_iter = 400,
                            double tol = 1e-11);

/// Two smallest eigenvalues, sorted (duplicates kept: a degenerate ground
/// level yields E1 == E0). Dense below dense_cap qubits, Lanczos above.
std::pair<double, double> lowest_two(const PauliSum& h, int dense_cap = 10);

/// Delta01(s) = E1(s) - E0(s) over the grid.
GapProfile gap_profile(const AnnealSetup& setup, std::span<const double> grid,
                       std::string strategy = {});

/// Pointwise mean of per-instance profiles; all profiles must share a grid.
GapProfile average_gap_profile(const std::vector<GapProfile>& profiles);

/// Builds the per-instance setups from shared schedules and averages.
GapProfile average_gap_profile(const std::vector<ProblemInstance>& instances,
                               const schedule::ScheduleSet& schedules,
                               AuxAxis axis, double total_time,
                               std::span<const double> grid,
                               std::string strategy = {}, double epsilon = 1.0);

/// n equally spaced points covering [0, 1].
std::vector<double> uniform_grid(int n);

}  // namespace vcqa::spectrum
