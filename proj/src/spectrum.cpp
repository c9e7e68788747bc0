#include "vcqa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace vcqa::spectrum {

LanczosPairs lanczos_lowest(const PauliSum& h, int k, int max_iter,
                            double tol) {
  const auto d = static_cast<Eigen::Index>(h.dim());
  k = static_cast<int>(std::min<Eigen::Index>(k, d));
  const int m_target = static_cast<int>(
      std::min<Eigen::Index>(std::max({8 * k, 80, 1}), d));
  const int m_cap = static_cast<int>(std::min<Eigen::Index>(max_iter, d));
  const int m_run = std::min(m_target, m_cap);

  // Deterministic start vector; full reorthogonalization keeps the basis
  // usable for eigenvector assembly.
  std::mt19937_64 rng(0x5eed5eed5eedULL);
  StateVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double re = static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5;
    const double im = static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5;
    v[i] = Complex(re, im);
  }
  v.normalize();

  std::vector<StateVector> basis;
  basis.reserve(m_run);
  std::vector<double> alpha, beta;
  StateVector w(d);
  basis.push_back(v);

  int m = 0;
  bool breakdown = false;
  for (int j = 0; j < m_run; ++j) {
    h.apply_into(basis[j], w);
    const double a = basis[j].dot(w).real();
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    for (const auto& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();
    m = j + 1;
    if (b < 1e-13) {
      breakdown = true;  // invariant subspace found, results are exact
      break;
    }
    if (m == m_run) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);

  LanczosPairs out;
  const int found = std::min(k, m);
  std::string residual_report;
  for (int p = 0; p < found; ++p) {
    const double value = solver.eigenvalues()[p];
    StateVector vec = StateVector::Zero(d);
    for (int i = 0; i < m; ++i) vec += solver.eigenvectors()(i, p) * basis[i];
    vec.normalize();
    const double residual = (h.apply(vec) - value * vec).norm();
    if (!breakdown && residual > std::sqrt(tol) * std::max(1.0, std::abs(value)))
      residual_report += (residual_report.empty() ? "" : ", ") +
                         std::to_string(residual);
    out.values.push_back(value);
    out.vectors.push_back(std::move(vec));
  }
  if (!residual_report.empty())
    throw std::runtime_error(
        "lanczos_lowest: eigenpair residual norms too large: " +
        residual_report);
  return out;
}

std::pair<double, double> lowest_two(const PauliSum& h, int dense_cap) {
  if (h.n_qubits() < 1) throw std::domain_error("lowest_two: empty operator");
  if (h.dim() < 2)
    throw std::domain_error("lowest_two: need at least a 2-dimensional space");

  if (h.is_diagonal()) {
    const Eigen::VectorXd diag = h.diagonal();
    double e0 = std::numeric_limits<double>::infinity();
    double e1 = std::numeric_limits<double>::infinity();
    for (Eigen::Index b = 0; b < diag.size(); ++b) {
      const double v = diag[b];
      if (v < e0) {
        e1 = e0;
        e0 = v;
      } else if (v < e1) {
        e1 = v;
      }
    }
    return {e0, e1};
  }

  if (h.n_qubits() <= dense_cap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
    solver.compute(h.to_dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("lowest_two: dense eigensolver failed");
    return {solver.eigenvalues()[0], solver.eigenvalues()[1]};
  }

  const auto pairs = lanczos_lowest(h, 2);
  return {pairs.values[0], pairs.values[1]};
}

GapProfile gap_profile(const AnnealSetup& setup, std::span<const double> grid,
                       std::string strategy) {
  GapProfile profile;
  profile.strategy = std::move(strategy);
  profile.grid.assign(grid.begin(), grid.end());
  profile.gaps.reserve(grid.size());
  for (double s : grid) {
    const auto [e0, e1] = lowest_two(assemble(setup, s));
    profile.gaps.push_back(e1 - e0);
  }
  return profile;
}

GapProfile average_gap_profile(const std::vector<GapProfile>& profiles) {
  if (profiles.empty())
    throw std::invalid_argument("average_gap_profile: no profiles");
  GapProfile mean = profiles.front();
  for (std::size_t p = 1; p < profiles.size(); ++p) {
    if (profiles[p].grid != mean.grid)
      throw std::invalid_argument("average_gap_profile: grids differ");
    for (std::size_t i = 0; i < mean.gaps.size(); ++i)
      mean.gaps[i] += profiles[p].gaps[i];
  }
  const double scale = 1.0 / static_cast<double>(profiles.size());
  for (auto& g : mean.gaps) g *= scale;
  return mean;
}

GapProfile average_gap_profile(const std::vector<ProblemInstance>& instances,
                               const schedule::ScheduleSet& schedules,
                               AuxAxis axis, double total_time,
                               std::span<const double> grid,
                               std::string strategy, double epsilon) {
  std::vector<GapProfile> profiles;
  profiles.reserve(instances.size());
  for (const auto& instance : instances) {
    const auto setup = make_setup(instance, schedules, total_time, axis, epsilon);
    profiles.push_back(gap_profile(setup, grid, strategy));
  }
  auto mean = average_gap_profile(profiles);
  mean.strategy = std::move(strategy);
  return mean;
}

std::vector<double> uniform_grid(int n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need >= 2 points");
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = 1.0;
  return grid;
}

}  // namespace vcqa::spectrum
