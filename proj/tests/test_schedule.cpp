#include <doctest.h>
#include <algorithm>

#include <cmath>
#include <random>

#include "vcqa/schedule.hpp"

using namespace vcqa::schedule;

namespace {

// Random specs for the property checks: uniform interior values in [0, 1],
// 0 to 6 interior knots, all three boundary roles.
ScheduleSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_dist(0, 6);
  std::uniform_int_distribution<int> role_dist(1, 3);
  std::uniform_real_distribution<double> value_dist(0.0, 1.0);
  const int n = n_dist(rng);
  std::vector<double> interior(n);
  for (auto& v : interior) v = value_dist(rng);
  return spec_for_role(role_dist(rng), interior);
}

}  // namespace

TEST_CASE("hermite basis endpoints and midpoint") {
  const auto at0 = hermite_basis(0.0);
  CHECK(at0[0] == 1.0);
  CHECK(at0[1] == 0.0);
  CHECK(at0[2] == 0.0);
  CHECK(at0[3] == 0.0);

  const auto at1 = hermite_basis(1.0);
  CHECK(at1[0] == 0.0);
  CHECK(at1[1] == 1.0);
  CHECK(at1[2] == 0.0);
  CHECK(at1[3] == 0.0);

  // Direct polynomial evaluation of the corrected basis at 1/2.
  const auto mid = hermite_basis(0.5);
  CHECK(mid[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid[2] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(mid[3] == doctest::Approx(-0.125).epsilon(1e-15));

  CHECK_THROWS_AS(hermite_basis(-0.01), std::domain_error);
  CHECK_THROWS_AS(hermite_basis(1.01), std::domain_error);
}

TEST_CASE("hermite basis partition h0 + h1 == 1") {
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const auto h = hermite_basis(t);
    CHECK(h[0] + h[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("monotone slopes") {
  SUBCASE("sign change zeroes the slope") {
    const std::vector<double> p{0.0, 0.8, 0.5};
    const auto m = monotone_slopes(p, 0.5);
    CHECK(m[1] == 0.0);
  }
  SUBCASE("same-sign secants give the harmonic mean") {
    const std::vector<double> p{0.0, 0.3, 0.9};
    const auto m = monotone_slopes(p, 1.0 / 3.0);
    CHECK(m[1] == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(m[0] == 0.0);
    CHECK(m[2] == 0.0);
  }
  SUBCASE("constant data gives zero slopes") {
    const std::vector<double> p{0.5, 0.5, 0.5};
    for (double s : monotone_slopes(p, 1.0 / 3.0)) CHECK(s == 0.0);
  }
  SUBCASE("fewer than two points is a domain error") {
    const std::vector<double> p{1.0};
    CHECK_THROWS_AS(monotone_slopes(p, 0.5), std::domain_error);
  }
  SUBCASE("nonpositive spacing is a domain error") {
    const std::vector<double> p{0.0, 1.0};
    CHECK_THROWS_AS(monotone_slopes(p, 0.0), std::domain_error);
  }
}

TEST_CASE("build_schedule basics") {
  SUBCASE("no interior knots: pure boundary Hermite") {
    auto f = build_schedule(spec_for_role(1, {}));
    CHECK(f.value(0.0) == 1.0);
    CHECK(f.value(1.0) == 0.0);
    CHECK(f.value(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("pass-through at interior knots") {
    std::vector<double> interior{0.4, 0.4};
    auto f = build_schedule(spec_for_role(3, interior));
    CHECK(f.value(1.0 / 3.0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(f.value(2.0 / 3.0) == doctest::Approx(0.4).epsilon(1e-15));
  }
  SUBCASE("dense grid stays inside the data range") {
    std::vector<double> interior{0.9, 0.1};
    auto f = build_schedule(spec_for_role(1, interior));
    for (int i = 0; i <= 1000; ++i) {
      const double v = f.value(i / 1000.0);
      CHECK(v >= -1e-12);
      CHECK(v <= 1.0 + 1e-12);
    }
  }
  SUBCASE("parameter outside bounds names the index") {
    ScheduleSpec spec = spec_for_role(1, std::vector<double>{0.5, 1.4});
    CHECK_THROWS_WITH_AS(build_schedule(spec),
                         doctest::Contains("parameter 1"),
                         std::invalid_argument);
  }
}

TEST_CASE("eval_schedule examples") {
  SUBCASE("ramp-equivalent F1 knots") {
    auto f = build_schedule(
        spec_for_role(1, std::vector<double>{2.0 / 3.0, 1.0 / 3.0}));
    CHECK(f.value(0.0) == 1.0);
    CHECK(f.value(1.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(f.value(2.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(f.value(1.0) == 0.0);
  }
  SUBCASE("identically zero data") {
    auto f = build_schedule(spec_for_role(3, std::vector<double>{0.0, 0.0}));
    for (int i = 0; i <= 100; ++i) CHECK(f.value(i / 100.0) == 0.0);
  }
  SUBCASE("left and right pieces agree at knots") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const auto spec = random_spec(rng);
      if (spec.n_params == 0) continue;
      auto f = build_schedule(spec);
      const auto knots = f.knots();
      for (int k = 1; k < f.segment_count(); ++k) {
        const double left = f.value_on_segment(k - 1, knots[k]);
        const double right = f.value_on_segment(k, knots[k]);
        CHECK(left == doctest::Approx(right).epsilon(1e-13));
      }
    }
  }
  SUBCASE("domain errors") {
    auto f = build_schedule(spec_for_role(2, std::vector<double>{0.2}));
    CHECK_THROWS_AS(f.value(-0.1), std::domain_error);
    CHECK_THROWS_AS(f.value(1.1), std::domain_error);
  }
}

TEST_CASE("schedule derivative") {
  SUBCASE("knot derivatives equal the assigned slopes") {
    auto f = build_schedule(
        spec_for_role(2, std::vector<double>{0.2, 0.7}));
    const auto& slopes = f.slopes();
    const auto knots = f.knots();
    for (std::size_t k = 0; k < knots.size(); ++k)
      CHECK(f.derivative(knots[k]) ==
            doctest::Approx(slopes[k]).epsilon(1e-12));
  }
  SUBCASE("constant data has zero derivative") {
    auto f = build_schedule(spec_for_role(3, std::vector<double>{0.0, 0.0}));
    for (int i = 0; i <= 100; ++i) CHECK(f.derivative(i / 100.0) == 0.0);
  }
  SUBCASE("matches a central finite difference") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const auto spec = random_spec(rng);
      auto f = build_schedule(spec);
      const double h = 1e-6;
      for (double x : {0.1, 0.37, 0.52, 0.81}) {
        const double fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
        const double exact = f.derivative(x);
        CHECK(exact == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  SUBCASE("second and third derivatives by finite differences") {
    auto f = build_schedule(
        spec_for_role(1, std::vector<double>{0.8, 0.25}));
    const double h = 1e-5;
    for (double x : {0.1, 0.5, 0.9}) {
      const double fd2 =
          (f.derivative(x + h) - f.derivative(x - h)) / (2.0 * h);
      CHECK(f.second_derivative(x) == doctest::Approx(fd2).epsilon(1e-5));
      const double fd3 = (f.second_derivative(x + h) -
                          f.second_derivative(x - h)) /
                         (2.0 * h);
      CHECK(f.third_derivative(x) == doctest::Approx(fd3).epsilon(1e-5));
    }
  }
}

TEST_CASE("ramp profile is exact") {
  const auto ramp = ramp_profile();
  CHECK(ramp.f1.value(0.25) == 0.75);
  CHECK(ramp.f2.value(0.25) == 0.25);
  CHECK(ramp.f3.value(0.25) == 0.0);
  CHECK(ramp.f1.value(1.0) == 0.0);
  CHECK(ramp.f2.value(1.0) == 1.0);
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 64.0;
    CHECK(ramp.f1.value(x) + ramp.f2.value(x) == 1.0);
  }
  CHECK(ramp.f3.is_zero());
  CHECK(ramp.f1.derivative(0.3) == -1.0);
  CHECK(ramp.f2.derivative(0.3) == 1.0);
}

TEST_CASE("schedule property suite" * doctest::timeout(60)) {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> x_dist(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto spec = random_spec(rng);
    const auto f = build_schedule(spec);
    const auto knots = f.knots();
    const auto& values = f.values();

    // Pass-through.
    for (std::size_t k = 0; k < knots.size(); ++k)
      REQUIRE(std::abs(f.value(knots[k]) - values[k]) < 1e-12);

    // C1 continuity across interior knots (one-sided evaluations).
    const double eps = 1e-9;
    for (std::size_t k = 1; k + 1 < knots.size(); ++k) {
      REQUIRE(std::abs(f.value(knots[k] - eps) - f.value(knots[k] + eps)) <
              1e-8);
      REQUIRE(std::abs(f.derivative(knots[k] - eps) -
                       f.derivative(knots[k] + eps)) < 1e-6);
    }

    // Boundedness and per-segment monotonicity on a modest grid per trial.
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    for (int i = 0; i <= 40; ++i) {
      const double x = i / 40.0;
      const double v = f.value(x);
      REQUIRE(v >= lo - 1e-12);
      REQUIRE(v <= hi + 1e-12);
    }
    for (int seg = 0; seg < f.segment_count(); ++seg) {
      const double a = knots[seg], b = knots[seg + 1];
      const double direction = values[seg + 1] - values[seg];
      double prev = f.value(a);
      for (int i = 1; i <= 12; ++i) {
        const double x = a + (b - a) * i / 12.0;
        const double v = f.value(x);
        if (direction >= 0.0)
          REQUIRE(v >= prev - 1e-12);
        else
          REQUIRE(v <= prev + 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("C1 at knots exactly: both pieces share value and slope") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = random_spec(rng);
    if (spec.n_params == 0) continue;
    auto f = build_schedule(spec);
    const auto knots = f.knots();
    for (std::size_t k = 1; k + 1 < knots.size(); ++k) {
      // Derivative at the exact knot equals the assigned slope from both
      // sides by construction; checked through the public surface.
      CHECK(f.derivative(knots[k]) ==
            doctest::Approx(f.slopes()[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("ramp equivalent parameter layout") {
  const auto p6 = ramp_equivalent_params(2, true);
  REQUIRE(p6.size() == 6);
  CHECK(p6[0] == doctest::Approx(2.0 / 3.0));
  CHECK(p6[1] == doctest::Approx(1.0 / 3.0));
  CHECK(p6[2] == doctest::Approx(1.0 / 3.0));
  CHECK(p6[3] == doctest::Approx(2.0 / 3.0));
  CHECK(p6[4] == 0.0);
  CHECK(p6[5] == 0.0);
  const auto p4 = ramp_equivalent_params(2, false);
  CHECK(p4.size() == 4);
}
