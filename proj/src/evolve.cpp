#include "vcqa/evolve.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

namespace vcqa::evolve {

namespace {

// One Hamiltonian component split into a diagonal vector and the remaining
// off-diagonal strings, so the inner loop touches each amplitude once.
struct CompiledComponent {
  Eigen::VectorXd diag;
  std::vector<PauliSum::CompiledTerm> offdiag;

  explicit CompiledComponent(const PauliSum& h)
      : diag(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.dim()))) {
    for (const auto& term : h.compiled()) {
      if (term.x_mask == 0) {
        const double w = term.weight.real();
        for (std::size_t b = 0; b < h.dim(); ++b) {
          const int parity = std::popcount(b & term.z_mask) & 1;
          diag[static_cast<Eigen::Index>(b)] += parity ? -w : w;
        }
      } else {
        offdiag.push_back(term);
      }
    }
  }
};

// F1 H_i + F2 H_f + F3 H_aux with the weights frozen at one midpoint.
class ThreeTermApplier {
 public:
  explicit ThreeTermApplier(const AnnealSetup& setup)
      : components_{CompiledComponent(setup.h_initial),
                    CompiledComponent(setup.h_final),
                    CompiledComponent(setup.h_aux)},
        frozen_diag_(components_[0].diag.size()) {}

  void freeze(double f1, double f2, double f3) {
    const double weights[3] = {f1, f2, f3};
    frozen_diag_.setZero();
    frozen_offdiag_.clear();
    for (int c = 0; c < 3; ++c) {
      if (weights[c] == 0.0) continue;
      frozen_diag_ += weights[c] * components_[c].diag;
      for (const auto& term : components_[c].offdiag)
        frozen_offdiag_.push_back(
            {term.x_mask, term.z_mask, weights[c] * term.weight});
    }
  }

  void apply(const StateVector& in, StateVector& out) const {
    const auto d = static_cast<std::size_t>(in.size());
    const Complex* src = in.data();
    Complex* dst = out.data();
    const double* diag = frozen_diag_.data();
    for (std::size_t b = 0; b < d; ++b) dst[b] = diag[b] * src[b];
    for (const auto& term : frozen_offdiag_) {
      for (std::size_t b = 0; b < d; ++b) {
        const int parity = std::popcount(b & term.z_mask) & 1;
        dst[b ^ term.x_mask] += (parity ? -term.weight : term.weight) * src[b];
      }
    }
  }

 private:
  CompiledComponent components_[3];
  Eigen::VectorXd frozen_diag_;
  std::vector<PauliSum::CompiledTerm> frozen_offdiag_;
};

// Lanczos workspace reused across steps.
struct KrylovWorkspace {
  std::vector<StateVector> basis;
  std::vector<double> alpha;
  std::vector<double> beta;
  StateVector w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;

  void reset(Eigen::Index dim, int max_dim) {
    if (basis.empty() || basis.front().size() != dim) {
      basis.assign(static_cast<std::size_t>(max_dim), StateVector(dim));
      w.resize(dim);
    }
    alpha.clear();
    beta.clear();
  }
};

// psi <- exp(-i dt H) psi for the frozen applier. The Lanczos recursion on a
// Hermitian operator yields a real tridiagonal matrix; its small exponential
// is assembled from an eigendecomposition. The a-posteriori estimate
// beta_m * |y_m| decides the subspace size.
template <typename Applier>
void exp_step(const Applier& h, double dt, StateVector& psi,
              KrylovWorkspace& ws, double tol, int max_dim) {
  const auto dim = psi.size();
  const int m_cap = static_cast<int>(
      std::min<Eigen::Index>(max_dim, dim));
  ws.reset(dim, static_cast<int>(std::min<Eigen::Index>(max_dim, dim)) + 1);

  const double norm0 = psi.norm();
  if (norm0 == 0.0) return;
  ws.basis[0] = psi / norm0;

  Eigen::VectorXcd y;
  int m = 0;
  bool breakdown = false;
  for (int j = 0; j < m_cap; ++j) {
    h.apply(ws.basis[j], ws.w);
    const double a = ws.basis[j].dot(ws.w).real();
    ws.alpha.push_back(a);
    ws.w -= a * ws.basis[j];
    if (j > 0) ws.w -= ws.beta[j - 1] * ws.basis[j - 1];
    const double b = ws.w.norm();
    m = j + 1;

    // Small exponential at the current subspace size.
    if (m == 1) {
      y.resize(1);
      y[0] = std::exp(Complex(0.0, -dt * ws.alpha[0]));
    } else {
      Eigen::Map<const Eigen::VectorXd> diag(ws.alpha.data(), m);
      Eigen::Map<const Eigen::VectorXd> sub(ws.beta.data(), m - 1);
      ws.solver.computeFromTridiagonal(diag, sub);
      const auto& q = ws.solver.eigenvectors();
      const auto& lambda = ws.solver.eigenvalues();
      Eigen::VectorXcd phases(m);
      for (int i = 0; i < m; ++i)
        phases[i] = std::exp(Complex(0.0, -dt * lambda[i])) * q(0, i);
      y = q * phases;
    }

    breakdown = b < 1e-14;
    if (breakdown || b * std::abs(y[m - 1]) < tol || m == m_cap) break;

    ws.beta.push_back(b);
    ws.basis[static_cast<std::size_t>(j) + 1] = ws.w / b;
  }

  psi.setZero();
  for (int i = 0; i < m; ++i) psi += y[i] * ws.basis[i];
  psi *= norm0;
}

struct SeriesRecorder {
  const AnnealSetup& setup;
  Trajectory& traj;
  StateVector u, v, w;

  SeriesRecorder(const AnnealSetup& s, Trajectory& t, Eigen::Index dim)
      : setup(s), traj(t), u(dim), v(dim), w(dim) {}

  void record(double t, const StateVector& psi, bool store_state) {
    setup.h_initial.apply_into(psi, u);
    setup.h_final.apply_into(psi, v);
    const bool with_aux = setup.h_aux.terms().size() > 0;
    if (with_aux) setup.h_aux.apply_into(psi, w);

    traj.times.push_back(t);
    traj.norms.push_back(psi.norm());
    traj.exp_initial.push_back(psi.dot(u).real());
    traj.exp_final.push_back(psi.dot(v).real());
    traj.exp_aux.push_back(with_aux ? psi.dot(w).real() : 0.0);
    traj.comm_fi.push_back(-2.0 * v.dot(u).imag());
    traj.comm_ai.push_back(with_aux ? -2.0 * w.dot(u).imag() : 0.0);
    traj.comm_af.push_back(with_aux ? -2.0 * w.dot(v).imag() : 0.0);
    if (store_state) traj.states.push_back(psi);
  }
};

Trajectory run_once(const AnnealSetup& setup, ThreeTermApplier& applier,
                    KrylovWorkspace& ws, int steps_per_interval,
                    const IntegratorOptions& options) {
  const int intervals = options.n_samples - 1;
  const long total_steps = static_cast<long>(steps_per_interval) * intervals;
  const double t_total = setup.total_time;
  const double dt = t_total / static_cast<double>(total_steps);

  Trajectory traj;
  traj.total_time = t_total;
  traj.dt_used = dt;
  const auto dim = static_cast<Eigen::Index>(setup.h_initial.dim());
  SeriesRecorder recorder(setup, traj, dim);

  StateVector psi = minus_state(setup.n_qubits());
  recorder.record(0.0, psi, options.store_states);

  long step = 0;
  for (int i = 0; i < intervals; ++i) {
    for (int q = 0; q < steps_per_interval; ++q, ++step) {
      const double s_mid =
          (static_cast<double>(step) + 0.5) / static_cast<double>(total_steps);
      applier.freeze(setup.schedules.f1.value(s_mid),
                     setup.schedules.f2.value(s_mid),
                     setup.schedules.f3.value(s_mid));
      exp_step(applier, dt, psi, ws, options.krylov_tol,
               options.krylov_max_dim);
    }
    const double t =
        (i + 1 == intervals) ? t_total
                             : static_cast<double>(step) * dt;
    recorder.record(t, psi, options.store_states);
  }
  return traj;
}

}  // namespace

Trajectory propagate(const AnnealSetup& setup,
                     const IntegratorOptions& options) {
  setup.validate();
  if (options.n_samples < 2)
    throw std::invalid_argument("propagate: need at least 2 samples");
  const double dt0 =
      options.dt > 0.0 ? options.dt : setup.total_time / 500.0;
  if (!(dt0 > 0.0)) throw std::invalid_argument("propagate: dt must be > 0");

  const int intervals = options.n_samples - 1;
  const int spi0 = std::max(
      1, static_cast<int>(std::lround(setup.total_time / (dt0 * intervals))));

  ThreeTermApplier applier(setup);
  KrylovWorkspace ws;

  Trajectory current = run_once(setup, applier, ws, spi0, options);
  if (options.tolerance <= 0.0 || options.max_refinements <= 0) return current;

  double previous_energy = current.exp_final.back();
  for (int r = 1; r <= options.max_refinements; ++r) {
    const int spi = spi0 << r;
    Trajectory refined = run_once(setup, applier, ws, spi, options);
    refined.refinements = r;
    const double energy = refined.exp_final.back();
    if (std::abs(energy - previous_energy) < options.tolerance) return refined;
    previous_energy = energy;
    current = std::move(refined);
  }
  throw IntegrationError(
      "propagate: final energy did not settle within tolerance after " +
          std::to_string(options.max_refinements) + " refinements",
      previous_energy, current.exp_final.back());
}

double expectation(const PauliSum& h, const StateVector& psi) {
  return h.expectation(psi);
}

double percent_error(const StateVector& psi_final, const PauliSum& h_final,
                     double ground_energy, double energy_floor) {
  if (std::abs(ground_energy) <= energy_floor)
    throw UndefinedMetricError(
        "percent_error: ground energy magnitude below the floor, the "
        "relative error is undefined");
  const double energy = expectation(h_final, psi_final);
  return std::abs((ground_energy - energy) / ground_energy) * 100.0;
}

double fidelity(const StateVector& psi_final,
                const std::vector<StateVector>& ground_basis) {
  double sum = 0.0;
  for (const auto& phi : ground_basis) sum += std::norm(phi.dot(psi_final));
  return sum;
}

EvolutionMetrics evaluate_run(const AnnealSetup& setup,
                              const GroundState& ground,
                              const IntegratorOptions& options) {
  IntegratorOptions opts = options;
  opts.store_states = true;  // the final state feeds both metrics
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = propagate(setup, opts);
  const auto stop = std::chrono::steady_clock::now();

  const StateVector& psi_final = traj.states.back();
  EvolutionMetrics metrics;
  metrics.final_energy = traj.exp_final.back();
  metrics.err_pct = percent_error(psi_final, setup.h_final, ground.energy);
  metrics.fidelity = fidelity(psi_final, ground.basis);
  metrics.wall_seconds =
      std::chrono::duration<double>(stop - start).count();
  metrics.dt_used = traj.dt_used;
  metrics.refinements = traj.refinements;
  double drift = 0.0;
  for (double n : traj.norms) drift = std::max(drift, std::abs(n - 1.0));
  metrics.norm_drift = drift;
  return metrics;
}

StateVector krylov_exp_step(const PauliSum& h, double dt,
                            const StateVector& psi, double tol, int max_dim) {
  struct PlainApplier {
    const PauliSum& h;
    void apply(const StateVector& in, StateVector& out) const {
      h.apply_into(in, out);
    }
  } applier{h};
  KrylovWorkspace ws;
  StateVector out = psi;
  exp_step(applier, dt, out, ws, tol, max_dim);
  return out;
}

}  // namespace vcqa::evolve
