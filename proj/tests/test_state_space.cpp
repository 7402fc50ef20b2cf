#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "qls/state_space.hpp"

using namespace qls;

namespace {
const double kRoot2 = std::sqrt(0.5);
}

TEST_CASE("spectrum stores the minimum last and validates layout") {
  Spectrum s({3.0, 2.0, 1.0});
  CHECK(s.size() == 3);
  CHECK(s.minimum() == 1.0);
  s.require_three_level();

  // Minimum not in last position.
  CHECK_THROWS_AS(Spectrum({1.0, 2.0, 3.0}), Error);
  // Degenerate upper level: E_2 equals the minimum.
  CHECK_THROWS_AS(Spectrum({3.0, 1.0, 1.0}).require_three_level(), Error);
  // Two levels only.
  CHECK_THROWS_AS(Spectrum({2.0, 1.0}).require_three_level(), Error);
}

TEST_CASE("state vectors must arrive unit norm") {
  StateVec ok({1.0, 0.0, 0.0});
  CHECK(ok.norm() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(StateVec({1.0, 1.0, 0.0}), Error);
  try {
    StateVec bad({0.5, 0.5, 0.5});
    FAIL("expected a normalization error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }
}

TEST_CASE("normalize scales raw coefficients and rejects zero") {
  StateVec v = normalize({3.0, 4.0, 0.0});
  CHECK(v[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(v[2] == 0.0);

  try {
    normalize({0.0, 0.0, 0.0});
    FAIL("expected a zero-vector error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
}

TEST_CASE("energy expectation on worked states") {
  Spectrum s({3.0, 2.0, 1.0});

  // Eigenstates give back their eigenvalues exactly.
  CHECK(expectation_energy(StateVec({1.0, 0.0, 0.0}), s) == 3.0);
  CHECK(expectation_energy(StateVec({0.0, 1.0, 0.0}), s) == 2.0);
  CHECK(expectation_energy(StateVec({0.0, 0.0, 1.0}), s) == 1.0);

  // Equal superposition averages the spectrum.
  const double r3 = 1.0 / std::sqrt(3.0);
  CHECK(expectation_energy(normalize({r3, r3, r3}), s) ==
        doctest::Approx(2.0).epsilon(1e-14));

  // Half-half between the top and bottom levels.
  CHECK(expectation_energy(StateVec({kRoot2, 0.0, kRoot2}), s) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("expectation values stay inside the spectral range") {
  Spectrum s({3.0, 2.0, 1.0});
  std::mt19937 rng(20240811);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    StateVec v = normalize({gauss(rng), gauss(rng), gauss(rng)});
    const double e = expectation_energy(v, s);
    CHECK(e >= 1.0 - 1e-12);
    CHECK(e <= 3.0 + 1e-12);
  }
}

TEST_CASE("operations re-check the norm at the looser tolerance") {
  // Construct a valid state, then degrade it past the operating tolerance
  // through the raw-coefficient constructor contract: a state built at the
  // edge of the construction tolerance still works in operations.
  std::vector<double> nearly{1.0 + 4e-13, 0.0, 0.0};
  StateVec edge(nearly);  // squared-sum defect ~8e-13, inside 1e-12
  Spectrum s({3.0, 2.0, 1.0});
  CHECK(expectation_energy(edge, s) == doctest::Approx(3.0).epsilon(1e-11));

  // Dimension mismatch between state and spectrum.
  CHECK_THROWS_AS(expectation_energy(StateVec({1.0, 0.0}), s), Error);
}

TEST_CASE("observable matrices require exact symmetry") {
  ObservableMatrix ok(2, {1.0, 2.0, 2.0, 5.0});
  CHECK(ok(0, 1) == 2.0);

  try {
    ObservableMatrix bad(2, {1.0, 2.0, 2.0 + 1e-15, 5.0});
    FAIL("expected an asymmetric-matrix error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AsymmetricMatrix);
  }

  // Entry count must match the dimension.
  CHECK_THROWS_AS(ObservableMatrix(2, {1.0, 2.0, 2.0}), Error);
}

TEST_CASE("general observable expectation on worked cases") {
  // Pure off-diagonal coupling between the first two levels.
  ObservableMatrix coupling(3, {0.0, 1.0, 0.0,  //
                                1.0, 0.0, 0.0,  //
                                0.0, 0.0, 0.0});
  StateVec plus({kRoot2, kRoot2, 0.0});
  CHECK(expectation_observable(plus, coupling) ==
        doctest::Approx(1.0).epsilon(1e-14));
  StateVec minus({kRoot2, -kRoot2, 0.0});
  CHECK(expectation_observable(minus, coupling) ==
        doctest::Approx(-1.0).epsilon(1e-14));

  // Identity observable always reports 1 on unit states.
  ObservableMatrix id = ObservableMatrix::identity(3);
  CHECK(expectation_observable(plus, id) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("diagonal observable matches the energy expectation") {
  Spectrum s({3.0, 2.0, 1.0});
  ObservableMatrix diag = ObservableMatrix::diagonal(s);
  std::mt19937 rng(4242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    StateVec v = normalize({gauss(rng), gauss(rng), gauss(rng)});
    const double a = expectation_energy(v, s);
    const double b = expectation_observable(v, diag);
    CHECK(std::abs(a - b) <= 1e-14);
  }
}
