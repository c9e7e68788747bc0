#pragma once

#include <array>
#include <span>
#include <vector>

namespace vcqa::schedule {

/// Variational description of one schedule function: interior knot values
/// between two pinned boundary values, on an equally spaced unit grid.
struct ScheduleSpec {
  int n_params = 0;             ///< number of interior knots
  double boundary_start = 0.0;  ///< value pinned at x = 0
  double boundary_end = 0.0;    ///< value pinned at x = 1
  std::vector<double> params;   ///< interior knot values, size n_params
  double lower_bound = 0.0;     ///< box constraint on interior values
  double upper_bound = 1.0;

  double knot_spacing() const { return 1.0 / (n_params + 1); }

  /// Throws std::invalid_argument naming the first offending parameter index.
  void validate() const;
};

/// Cubic Hermite basis on the unit interval, (h0, h1, h2, h3).
/// h0 + h1 == 1 for every t_hat. Throws std::domain_error outside [0, 1].
std::array<double, 4> hermite_basis(double t_hat);

/// Slopes for shape-preserving interpolation on equally spaced data:
/// the harmonic mean of the two adjacent secants where they share a strict
/// sign, zero otherwise. Endpoint slopes are zero. Needs >= 2 points.
std::vector<double> monotone_slopes(std::span<const double> values,
                                    double spacing);

/// C1 piecewise cubic through equally spaced knots on [0, 1]. With slopes
/// from monotone_slopes the curve stays within the knot-value range and is
/// monotone on every segment.
class PiecewiseHermite {
 public:
  PiecewiseHermite() = default;
  PiecewiseHermite(std::vector<double> values, std::vector<double> slopes);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  double third_derivative(double x) const;
  double operator()(double x) const { return value(x); }

  /// Evaluate a specific segment's cubic; x may be either endpoint of the
  /// segment (used for continuity checks at knots).
  double value_on_segment(int segment, double x) const;
  double derivative_on_segment(int segment, double x) const;

  int segment_count() const { return static_cast<int>(values_.size()) - 1; }
  double knot_spacing() const { return spacing_; }
  std::vector<double> knots() const;
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  int segment_of(double x) const;

  std::vector<double> values_;
  std::vector<double> slopes_;
  double spacing_ = 1.0;
};

/// Knots are the n_params + 2 equally spaced points with the boundary values
/// at the ends; slopes from monotone_slopes.
PiecewiseHermite build_schedule(const ScheduleSpec& spec);

/// One schedule function on [0, 1]: either an exact polynomial of degree
/// <= 1 (the ramp profile carries no interpolation error) or a piecewise
/// Hermite curve.
class Schedule {
 public:
  Schedule() = default;

  static Schedule linear(double start, double end);
  static Schedule zero() { return linear(0.0, 0.0); }
  static Schedule hermite(PiecewiseHermite pw);
  static Schedule from_spec(const ScheduleSpec& spec);

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  double third_derivative(double x) const;

  /// True when the function is identically zero.
  bool is_zero() const;
  bool is_linear() const { return !is_hermite_; }

 private:
  bool is_hermite_ = false;
  double start_ = 0.0;
  double end_ = 0.0;
  PiecewiseHermite pw_;
};

/// The three weights of one anneal: f1 scales the initial Hamiltonian,
/// f2 the final one, f3 the auxiliary one.
struct ScheduleSet {
  Schedule f1, f2, f3;
};

/// F1(x) = 1 - x, F2(x) = x, F3(x) = 0, represented exactly.
ScheduleSet ramp_profile();

/// Fixed boundary values by role: F1 runs 1 -> 0, F2 runs 0 -> 1, F3 is
/// pinned to zero at both ends.
ScheduleSpec spec_for_role(int role, std::span<const double> interior,
                           double lower_bound = 0.0, double upper_bound = 1.0);

/// Interior knot values that sample the exact ramp: the optimizer's
/// canonical starting point.
std::vector<double> ramp_equivalent_params(int per_schedule, bool with_aux);

}  // namespace vcqa::schedule
