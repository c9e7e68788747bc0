#include "vcqa/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace vcqa::schedule {

void ScheduleSpec::validate() const {
  if (n_params < 0) throw std::invalid_argument("n_params must be >= 0");
  if (static_cast<int>(params.size()) != n_params)
    throw std::invalid_argument("params size " + std::to_string(params.size()) +
                                " does not match n_params " +
                                std::to_string(n_params));
  if (!(lower_bound <= upper_bound))
    throw std::invalid_argument("empty parameter bounds");
  for (int i = 0; i < n_params; ++i) {
    if (!(params[i] >= lower_bound && params[i] <= upper_bound))
      throw std::invalid_argument("schedule parameter " + std::to_string(i) +
                                  " = " + std::to_string(params[i]) +
                                  " outside bounds [" +
                                  std::to_string(lower_bound) + ", " +
                                  std::to_string(upper_bound) + "]");
  }
}

std::array<double, 4> hermite_basis(double t_hat) {
  if (!(t_hat >= 0.0 && t_hat <= 1.0))
    throw std::domain_error("hermite_basis: t_hat outside [0, 1]");
  const double u = 1.0 - t_hat;
  const double h0 = (1.0 + 2.0 * t_hat) * u * u;
  const double h1 = t_hat * t_hat * (3.0 - 2.0 * t_hat);
  const double h2 = t_hat * u * u;
  const double h3 = t_hat * t_hat * (t_hat - 1.0);
  return {h0, h1, h2, h3};
}

std::vector<double> monotone_slopes(std::span<const double> values,
                                    double spacing) {
  if (values.size() < 2)
    throw std::domain_error("monotone_slopes: need at least 2 points");
  if (!(spacing > 0.0))
    throw std::domain_error("monotone_slopes: spacing must be positive");
  std::vector<double> slopes(values.size(), 0.0);
  for (std::size_t k = 1; k + 1 < values.size(); ++k) {
    const double d_left = values[k] - values[k - 1];
    const double d_right = values[k + 1] - values[k];
    if (d_left * d_right > 0.0)
      slopes[k] =
          2.0 * d_left * d_right / (spacing * (values[k + 1] - values[k - 1]));
  }
  return slopes;
}

PiecewiseHermite::PiecewiseHermite(std::vector<double> values,
                                   std::vector<double> slopes)
    : values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() < 2)
    throw std::invalid_argument("PiecewiseHermite: need at least 2 knots");
  if (slopes_.size() != values_.size())
    throw std::invalid_argument("PiecewiseHermite: slope/value size mismatch");
  spacing_ = 1.0 / static_cast<double>(values_.size() - 1);
}

int PiecewiseHermite::segment_of(double x) const {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("PiecewiseHermite: x outside [0, 1]");
  const int n_seg = segment_count();
  int k = static_cast<int>(x * static_cast<double>(n_seg));
  if (k >= n_seg) k = n_seg - 1;
  return k;
}

double PiecewiseHermite::value_on_segment(int segment, double x) const {
  const double t = (x - static_cast<double>(segment) * spacing_) / spacing_;
  const auto h = hermite_basis(std::clamp(t, 0.0, 1.0));
  return h[0] * values_[segment] + h[1] * values_[segment + 1] +
         spacing_ * (h[2] * slopes_[segment] + h[3] * slopes_[segment + 1]);
}

double PiecewiseHermite::value(double x) const {
  return value_on_segment(segment_of(x), x);
}

double PiecewiseHermite::derivative_on_segment(int k, double x) const {
  const double t = std::clamp(
      (x - static_cast<double>(k) * spacing_) / spacing_, 0.0, 1.0);
  const double h0p = 6.0 * t * t - 6.0 * t;
  const double h2p = (1.0 - t) * (1.0 - 3.0 * t);
  const double h3p = t * (3.0 * t - 2.0);
  return (h0p * values_[k] - h0p * values_[k + 1]) / spacing_ +
         h2p * slopes_[k] + h3p * slopes_[k + 1];
}

double PiecewiseHermite::derivative(double x) const {
  const int k = segment_of(x);
  const double t = (x - static_cast<double>(k) * spacing_) / spacing_;
  // d/dt of the basis: h0' = 6t^2-6t, h1' = -h0', h2' = (1-t)(1-3t),
  // h3' = t(3t-2); chain rule divides by the spacing.
  const double h0p = 6.0 * t * t - 6.0 * t;
  const double h2p = (1.0 - t) * (1.0 - 3.0 * t);
  const double h3p = t * (3.0 * t - 2.0);
  return (h0p * values_[k] - h0p * values_[k + 1]) / spacing_ +
         h2p * slopes_[k] + h3p * slopes_[k + 1];
}

double PiecewiseHermite::second_derivative(double x) const {
  const int k = segment_of(x);
  const double t = (x - static_cast<double>(k) * spacing_) / spacing_;
  const double h0pp = 12.0 * t - 6.0;
  const double h2pp = 6.0 * t - 4.0;
  const double h3pp = 6.0 * t - 2.0;
  return (h0pp * (values_[k] - values_[k + 1])) / (spacing_ * spacing_) +
         (h2pp * slopes_[k] + h3pp * slopes_[k + 1]) / spacing_;
}

double PiecewiseHermite::third_derivative(double x) const {
  const int k = segment_of(x);
  return 12.0 * (values_[k] - values_[k + 1]) /
             (spacing_ * spacing_ * spacing_) +
         6.0 * (slopes_[k] + slopes_[k + 1]) / (spacing_ * spacing_);
}

std::vector<double> PiecewiseHermite::knots() const {
  std::vector<double> xs(values_.size());
  for (std::size_t k = 0; k < xs.size(); ++k)
    xs[k] = static_cast<double>(k) * spacing_;
  xs.back() = 1.0;
  return xs;
}

PiecewiseHermite build_schedule(const ScheduleSpec& spec) {
  spec.validate();
  std::vector<double> values;
  values.reserve(spec.n_params + 2);
  values.push_back(spec.boundary_start);
  values.insert(values.end(), spec.params.begin(), spec.params.end());
  values.push_back(spec.boundary_end);
  auto slopes = monotone_slopes(values, spec.knot_spacing());
  return PiecewiseHermite(std::move(values), std::move(slopes));
}

Schedule Schedule::linear(double start, double end) {
  Schedule s;
  s.is_hermite_ = false;
  s.start_ = start;
  s.end_ = end;
  return s;
}

Schedule Schedule::hermite(PiecewiseHermite pw) {
  Schedule s;
  s.is_hermite_ = true;
  s.pw_ = std::move(pw);
  return s;
}

Schedule Schedule::from_spec(const ScheduleSpec& spec) {
  return hermite(build_schedule(spec));
}

double Schedule::value(double x) const {
  if (is_hermite_) return pw_.value(x);
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("Schedule: x outside [0, 1]");
  return start_ + (end_ - start_) * x;
}

double Schedule::derivative(double x) const {
  if (is_hermite_) return pw_.derivative(x);
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("Schedule: x outside [0, 1]");
  return end_ - start_;
}

double Schedule::second_derivative(double x) const {
  if (is_hermite_) return pw_.second_derivative(x);
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("Schedule: x outside [0, 1]");
  return 0.0;
}

double Schedule::third_derivative(double x) const {
  if (is_hermite_) return pw_.third_derivative(x);
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("Schedule: x outside [0, 1]");
  return 0.0;
}

bool Schedule::is_zero() const {
  if (!is_hermite_) return start_ == 0.0 && end_ == 0.0;
  for (double v : pw_.values())
    if (v != 0.0) return false;
  return true;
}

ScheduleSet ramp_profile() {
  return {Schedule::linear(1.0, 0.0), Schedule::linear(0.0, 1.0),
          Schedule::zero()};
}

ScheduleSpec spec_for_role(int role, std::span<const double> interior,
                           double lower_bound, double upper_bound) {
  ScheduleSpec spec;
  spec.n_params = static_cast<int>(interior.size());
  spec.params.assign(interior.begin(), interior.end());
  spec.lower_bound = lower_bound;
  spec.upper_bound = upper_bound;
  switch (role) {
    case 1:
      spec.boundary_start = 1.0;
      spec.boundary_end = 0.0;
      break;
    case 2:
      spec.boundary_start = 0.0;
      spec.boundary_end = 1.0;
      break;
    case 3:
      spec.boundary_start = 0.0;
      spec.boundary_end = 0.0;
      break;
    default:
      throw std::invalid_argument("schedule role must be 1, 2 or 3");
  }
  return spec;
}

std::vector<double> ramp_equivalent_params(int per_schedule, bool with_aux) {
  std::vector<double> params;
  params.reserve(per_schedule * (with_aux ? 3 : 2));
  const double spacing = 1.0 / (per_schedule + 1);
  for (int k = 1; k <= per_schedule; ++k)
    params.push_back(1.0 - static_cast<double>(k) * spacing);
  for (int k = 1; k <= per_schedule; ++k)
    params.push_back(static_cast<double>(k) * spacing);
  if (with_aux)
    for (int k = 1; k <= per_schedule; ++k) params.push_back(0.0);
  return params;
}

}  // namespace vcqa::schedule
