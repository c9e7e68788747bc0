#include <doctest.h>

#include <algorithm>
#include <random>

#include "vcqa/instances.hpp"
#include "vcqa/spectrum.hpp"

using namespace vcqa;

TEST_CASE("lowest two") {
  SUBCASE("single qubit transverse field") {
    const auto [e0, e1] = spectrum::lowest_two(initial_hamiltonian(1, 1.0));
    CHECK(e0 == doctest::Approx(-1.0));
    CHECK(e1 == doctest::Approx(1.0));
  }
  SUBCASE("transverse field gap is 2 epsilon for any size") {
    for (int n = 2; n <= 6; ++n) {
      const auto [e0, e1] = spectrum::lowest_two(initial_hamiltonian(n, 1.0));
      CHECK(e1 - e0 == doctest::Approx(2.0).epsilon(1e-10));
    }
  }
  SUBCASE("matches dense diagonalization mid-anneal on a full graph") {
    const auto instances =
        harness::generate_instances(Connectivity::full, 4, 1, 321,
                                    harness::DrawRange::closed_unit);
    const auto setup = make_setup(instances[0], schedule::ramp_profile(), 1.0,
                                  AuxAxis::none);
    const auto h = assemble(setup, 0.5);
    const auto [e0, e1] = spectrum::lowest_two(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
    CHECK(e0 == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
    CHECK(e1 == doctest::Approx(es.eigenvalues()[1]).epsilon(1e-12));
  }
  SUBCASE("lanczos path cross-checks the dense path") {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<PauliTerm> terms;
      const char ops[] = {'I', 'X', 'Y', 'Z'};
      for (int t = 0; t < 12; ++t) {
        std::string s(6, 'I');
        for (auto& c : s) c = ops[rng() % 4];
        terms.push_back({g(rng), s});
      }
      const PauliSum h(6, std::move(terms));
      const auto dense = spectrum::lowest_two(h, /*dense_cap=*/10);
      const auto lanczos = spectrum::lowest_two(h, /*dense_cap=*/3);
      CHECK(lanczos.first == doctest::Approx(dense.first).epsilon(1e-9));
      CHECK(lanczos.second == doctest::Approx(dense.second).epsilon(1e-9));
    }
  }
}

TEST_CASE("gap profile") {
  const auto instances =
      harness::generate_instances(Connectivity::full, 4, 1, 17,
                                  harness::DrawRange::closed_unit);
  const auto setup = make_setup(instances[0], schedule::ramp_profile(), 1.0,
                                AuxAxis::none);
  const auto grid = spectrum::uniform_grid(21);
  const auto profile = spectrum::gap_profile(setup, grid, "ramp");

  SUBCASE("starts at 2 epsilon") {
    CHECK(profile.gaps.front() == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("gaps are nonnegative and the grid covers both ends") {
    for (double g : profile.gaps) CHECK(g >= 0.0);
    CHECK(profile.grid.front() == 0.0);
    CHECK(profile.grid.back() == 1.0);
  }
  SUBCASE("degenerate final level reports a zero gap") {
    ProblemInstance pair;
    pair.connectivity = Connectivity::linear;
    pair.n_qubits = 2;
    pair.omegas = {0.0, 0.0};
    pair.couplings = {{1, 2, 1.0}};
    const auto pair_setup =
        make_setup(pair, schedule::ramp_profile(), 1.0, AuxAxis::none);
    const auto p = spectrum::gap_profile(pair_setup, grid, "ramp");
    CHECK(p.gaps.back() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("average gap profile") {
  const auto instances =
      harness::generate_instances(Connectivity::full, 4, 2, 99,
                                  harness::DrawRange::closed_unit);
  const auto grid = spectrum::uniform_grid(11);

  std::vector<spectrum::GapProfile> singles;
  for (const auto& inst : instances) {
    const auto setup =
        make_setup(inst, schedule::ramp_profile(), 1.0, AuxAxis::none);
    singles.push_back(spectrum::gap_profile(setup, grid, "ramp"));
  }

  SUBCASE("single profile averages to itself") {
    const auto mean = spectrum::average_gap_profile({singles[0]});
    CHECK(mean.gaps == singles[0].gaps);
  }
  SUBCASE("two profiles give the pointwise arithmetic mean") {
    const auto mean = spectrum::average_gap_profile(singles);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(mean.gaps[i] ==
            doctest::Approx((singles[0].gaps[i] + singles[1].gaps[i]) / 2.0)
                .epsilon(1e-15));
  }
  SUBCASE("instance-list overload agrees") {
    const auto mean = spectrum::average_gap_profile(singles);
    const auto direct = spectrum::average_gap_profile(
        instances, schedule::ramp_profile(), AuxAxis::none, 1.0, grid, "ramp");
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(direct.gaps[i] == doctest::Approx(mean.gaps[i]).epsilon(1e-15));
  }
}

TEST_CASE("graph automorphism sanity: equal couplings make the spectrum "
          "invariant under relabeling") {
  // Fully connected, equal fields and couplings: any permutation of sites
  // leaves the operator invariant, so eigenvalues must match after swapping
  // two site labels.
  ProblemInstance symmetric;
  symmetric.connectivity = Connectivity::full;
  symmetric.n_qubits = 4;
  symmetric.omegas = {0.4, 0.4, 0.4, 0.4};
  for (const auto& [i, j] : connectivity_edges(Connectivity::full, 4))
    symmetric.couplings.push_back({i, j, 0.7});

  const auto setup = make_setup(symmetric, schedule::ramp_profile(), 1.0,
                                AuxAxis::none);
  const auto h = assemble(setup, 0.37);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());

  // Swap qubits 1 and 3 by permuting basis indices.
  const auto d = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXcd permuted(d, d);
  auto swap_bits = [](int b, int i, int j, int n) {
    const int bi = (b >> (n - i)) & 1;
    const int bj = (b >> (n - j)) & 1;
    int out = b & ~((1 << (n - i)) | (1 << (n - j)));
    out |= bi << (n - j);
    out |= bj << (n - i);
    return out;
  };
  const Eigen::MatrixXcd dense = h.to_dense();
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c)
      permuted(swap_bits(static_cast<int>(r), 1, 3, 4),
               swap_bits(static_cast<int>(c), 1, 3, 4)) = dense(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_permuted(permuted);
  for (Eigen::Index k = 0; k < d; ++k)
    CHECK(es.eigenvalues()[k] ==
          doctest::Approx(es_permuted.eigenvalues()[k]).epsilon(1e-10));
}
