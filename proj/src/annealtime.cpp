#include "vcqa/annealtime.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace vcqa::annealtime {

namespace {

// Trapezoid weights for a (possibly non-uniform) strictly increasing grid.
std::vector<double> trapezoid_weights(const std::vector<double>& times) {
  const std::size_t n = times.size();
  if (n < 2) throw std::invalid_argument("trajectory needs >= 2 samples");
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = times[i + 1] - times[i];
    if (!(h > 0.0))
      throw std::invalid_argument("trajectory times must be increasing");
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

// Value and first derivative of N/D at a point where both may vanish,
// from derivative arrays [f, f', f'', f''']. Finds the first order at which
// the denominator is nonzero; any lower-order nonzero numerator derivative
// means the ratio diverges.
struct RatioLimit {
  double value = 0.0;
  double derivative = 0.0;
};

RatioLimit ratio_limit(const std::array<double, 4>& num,
                       const std::array<double, 4>& den) {
  constexpr double kZero = 1e-9;
  static constexpr double kFactorial[4] = {1.0, 1.0, 2.0, 6.0};
  int r = -1;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(den[k]) > kZero) {
      r = k;
      break;
    }
    if (std::abs(num[k]) > kZero)
      throw DivergentLimitError(
          "schedule ratio diverges: numerator derivative of order " +
          std::to_string(k) + " is nonzero where the denominator vanishes");
  }
  if (r < 0)
    throw DivergentLimitError(
        "schedule ratio indeterminate through third derivatives");
  RatioLimit out;
  const double n_r = num[r] / kFactorial[r];
  const double d_r = den[r] / kFactorial[r];
  out.value = n_r / d_r;
  if (r + 1 < 4) {
    const double n_r1 = num[r + 1] / kFactorial[r + 1];
    const double d_r1 = den[r + 1] / kFactorial[r + 1];
    out.derivative = (n_r1 * d_r - n_r * d_r1) / (d_r * d_r);
  } else {
    throw DivergentLimitError(
        "schedule ratio derivative needs fourth-order information");
  }
  return out;
}

std::array<double, 4> derivs(const schedule::Schedule& f, double s) {
  return {f.value(s), f.derivative(s), f.second_derivative(s),
          f.third_derivative(s)};
}

// R31 = F3/F1 and its derivative at s, with series limits where F1 vanishes.
RatioLimit r31_at(const schedule::ScheduleSet& schedules, double s) {
  const auto f1 = derivs(schedules.f1, s);
  const auto f3 = derivs(schedules.f3, s);
  if (std::abs(f1[0]) > 1e-7) {
    RatioLimit out;
    out.value = f3[0] / f1[0];
    out.derivative = (f3[1] * f1[0] - f3[0] * f1[1]) / (f1[0] * f1[0]);
    return out;
  }
  return ratio_limit(f3, f1);
}

bool is_reduced_form(const schedule::ScheduleSet& schedules) {
  if (!schedules.f3.is_zero()) return false;
  for (int i = 0; i <= 64; ++i) {
    const double s = static_cast<double>(i) / 64.0;
    if (std::abs(schedules.f1.value(s) + schedules.f2.value(s) - 1.0) > 1e-12)
      return false;
  }
  return true;
}

}  // namespace

DensityMatrix time_averaged_density(const evolve::Trajectory& traj) {
  if (traj.states.empty())
    throw std::invalid_argument(
        "time_averaged_density: trajectory carries no states (lean mode)");
  if (traj.states.size() != traj.times.size())
    throw std::invalid_argument("time_averaged_density: state/time mismatch");
  const auto weights = trapezoid_weights(traj.times);
  const double span = traj.times.back() - traj.times.front();
  const auto dim = traj.states.front().size();
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < traj.states.size(); ++i)
    rho.noalias() +=
        (weights[i] / span) * (traj.states[i] * traj.states[i].adjoint());
  return rho;
}

double commutator_expectation(const DensityMatrix& rho, const PauliSum& a,
                              const PauliSum& b) {
  const Eigen::MatrixXcd ma = a.to_dense();
  const Eigen::MatrixXcd mb = b.to_dense();
  const Complex trace = (rho * (ma * mb - mb * ma)).trace();
  const Complex value = Complex(0.0, 1.0) * trace;
  if (std::abs(value.imag()) > 1e-10 * (1.0 + std::abs(value.real())))
    throw std::runtime_error("commutator_expectation: non-real value");
  return value.real();
}

double commutator_expectation(const StateVector& psi, const PauliSum& a,
                              const PauliSum& b) {
  const StateVector av = a.apply(psi);
  const StateVector bv = b.apply(psi);
  // i(<A psi|B psi> - <B psi|A psi>) = -2 Im <A psi|B psi>
  return -2.0 * av.dot(bv).imag();
}

EhrenfestResiduals ehrenfest_residual(const evolve::Trajectory& traj,
                                      const AnnealSetup& setup) {
  const std::size_t n = traj.times.size();
  if (n < 3)
    throw std::invalid_argument("ehrenfest_residual: need >= 3 samples");

  EhrenfestResiduals out;
  auto run = [&](ResidualSeries& series, const std::vector<double>& values,
                 auto rhs) {
    series.residuals.reserve(n - 2);
    double sum_sq = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h = traj.times[i + 1] - traj.times[i - 1];
      const double derivative = (values[i + 1] - values[i - 1]) / h;
      const double r = derivative - rhs(i);
      series.residuals.push_back(r);
      series.max_abs = std::max(series.max_abs, std::abs(r));
      sum_sq += r * r;
    }
    series.rms = std::sqrt(sum_sq / static_cast<double>(n - 2));
  };

  const double t_total = traj.total_time;
  auto f1 = [&](std::size_t i) {
    return setup.schedules.f1.value(traj.times[i] / t_total);
  };
  auto f2 = [&](std::size_t i) {
    return setup.schedules.f2.value(traj.times[i] / t_total);
  };
  auto f3 = [&](std::size_t i) {
    return setup.schedules.f3.value(traj.times[i] / t_total);
  };

  run(out.initial, traj.exp_initial, [&](std::size_t i) {
    return f2(i) * traj.comm_fi[i] + f3(i) * traj.comm_ai[i];
  });
  run(out.final, traj.exp_final, [&](std::size_t i) {
    return -f1(i) * traj.comm_fi[i] + f3(i) * traj.comm_af[i];
  });
  run(out.aux, traj.exp_aux, [&](std::size_t i) {
    return -f1(i) * traj.comm_ai[i] - f2(i) * traj.comm_af[i];
  });
  return out;
}

double coefficient_c(const evolve::Trajectory& traj,
                     const schedule::ScheduleSet& schedules) {
  const std::size_t n = traj.times.size();
  if (n < 2) throw std::invalid_argument("coefficient_c: need >= 2 samples");
  const double t_total = traj.total_time;

  if (is_reduced_form(schedules)) return 0.0;

  // F_sigma must stay positive; validate on the sample grid first.
  for (std::size_t i = 0; i < n; ++i) {
    const double s = traj.times[i] / t_total;
    const double fs = schedules.f1.value(s) + schedules.f2.value(s);
    if (fs < 1e-8)
      throw SingularScheduleError(
          "coefficient_c: F1 + F2 vanishes near s = " + std::to_string(s));
  }

  const bool with_aux = !schedules.f3.is_zero();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = traj.times[i] / t_total;
    const double fs = schedules.f1.value(s) + schedules.f2.value(s);
    const double fs_prime =
        schedules.f1.derivative(s) + schedules.f2.derivative(s);
    // d/dt(1/F_sigma) = -F_sigma'/(T F_sigma^2); time units via 1/T.
    const double d_inv_fs = -fs_prime / (fs * fs) / t_total;
    double value = (traj.exp_final[i] - traj.exp_initial[i]) * d_inv_fs;
    if (with_aux) {
      const auto r31 = r31_at(schedules, s);
      const double d_r31_over_fs =
          (r31.derivative * fs - r31.value * fs_prime) / (fs * fs) / t_total;
      value -= traj.exp_aux[i] * d_r31_over_fs;
    }
    integrand[i] = value;
  }

  const auto weights = trapezoid_weights(traj.times);
  double integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) integral += weights[i] * integrand[i];
  return integral;
}

AnnealTimeReport annealing_time_prediction(const evolve::Trajectory& traj,
                                           const AnnealSetup& setup) {
  if (traj.times.size() < 2)
    throw std::invalid_argument("annealing_time_prediction: empty trajectory");
  const bool with_aux = setup.h_aux.terms().size() > 0 &&
                        !setup.schedules.f3.is_zero();
  if (with_aux) {
    const double comm = PauliSum::commutator_norm(setup.h_final, setup.h_aux);
    if (comm > 1e-10)
      throw std::invalid_argument(
          "annealing_time_prediction: [H_f, H_aux] != 0, the relation only "
          "holds for a commuting auxiliary Hamiltonian");
  }

  AnnealTimeReport report;
  report.t_actual = traj.total_time;
  report.reduced_form = is_reduced_form(setup.schedules);
  report.coefficient_c =
      report.reduced_form ? 0.0 : coefficient_c(traj, setup.schedules);

  // i Tr(rho_bar [H_f, H_i]) is the time average of the sampled commutator
  // expectation.
  const auto weights = trapezoid_weights(traj.times);
  double mean_comm = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    mean_comm += weights[i] * traj.comm_fi[i];
  mean_comm /= traj.times.back() - traj.times.front();
  report.denominator = mean_comm;

  const double exp_hi_0 = traj.exp_initial.front();
  const double exp_hi_T = traj.exp_initial.back();
  const double exp_hf_0 = traj.exp_final.front();
  const double exp_hf_T = traj.exp_final.back();

  const double fs_0 =
      setup.schedules.f1.value(0.0) + setup.schedules.f2.value(0.0);
  const double fs_1 =
      setup.schedules.f1.value(1.0) + setup.schedules.f2.value(1.0);
  double boundary_tf = 0.0;
  double boundary_t0 = 0.0;
  if (!report.reduced_form) {
    const auto r31_1 = r31_at(setup.schedules, 1.0);
    const auto r31_0 = r31_at(setup.schedules, 0.0);
    boundary_tf = r31_1.value * traj.exp_aux.back() / fs_1;
    boundary_t0 = r31_0.value * traj.exp_aux.front() / fs_0;
  }
  report.boundary_term_tf = std::abs(boundary_tf) > 1e-10 ? boundary_tf : 0.0;
  report.boundary_term_t0 = std::abs(boundary_t0) > 1e-10 ? boundary_t0 : 0.0;

  // Exact integrated identity: both endpoints of (<H_i> - <H_f>)/F_sigma
  // plus the R31 boundary terms plus the integral correction.
  report.numerator = (exp_hi_T - exp_hf_T) / fs_1 -
                     (exp_hi_0 - exp_hf_0) / fs_0 +
                     report.boundary_term_tf - report.boundary_term_t0 +
                     report.coefficient_c;
  // Convention that drops the initial <H_i> endpoint (measuring H_i from its
  // ground energy) and the t_f boundary term.
  report.numerator_dropped_terms =
      exp_hi_T + exp_hf_0 - exp_hf_T + report.coefficient_c;

  if (std::abs(report.denominator) < 1e-10)
    throw DegenerateDynamicsError(
        "annealing_time_prediction: commutator average below 1e-10, the "
        "prediction is withheld");
  report.t_predicted = report.numerator / report.denominator;
  report.t_predicted_dropped_terms =
      report.numerator_dropped_terms / report.denominator;
  report.residual =
      std::abs(report.t_predicted - report.t_actual) / report.t_actual;
  return report;
}

}  // namespace vcqa::annealtime
