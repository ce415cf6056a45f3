#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlhj/hamiltonian.hpp"

using namespace nlhj;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("eval_h") {
  auto g = make_grid(2, 8);
  auto H = power_hamiltonian(g, 1.0, 2.0, GridField(g, 0.0));
  CHECK(eval_h(H, 3, {0.3, 0.4}) == doctest::Approx(0.25));

  auto g1 = make_grid(1, 16);
  auto f = sample(g1, [](const Vec& x) { return std::sin(kTwoPi * x[0]); });
  auto H1 = power_hamiltonian(g1, 1.0, 2.0, f);
  CHECK(eval_h(H1, 5, {0.0, 0.0}) == doctest::Approx(-f[5]));

  auto H3 = power_hamiltonian(g1, 1.0, 3.0, GridField(g1, 0.0));
  H3.a1 = GridField(g1, 1.0);
  H3.l = 1.0;
  CHECK(eval_h(H3, 0, {2.0, 0.0}) == doctest::Approx(10.0));
  CHECK(H1.H0() == doctest::Approx(f.sup_norm()));
}

TEST_CASE("numerical_h") {
  auto g = make_grid(1, 16);
  auto H = power_hamiltonian(g, 1.0, 2.0, GridField(g, 0.0));
  CHECK(numerical_h(H, 0, {0.7, 0.0}, {0.7, 0.0}) == doctest::Approx(eval_h(H, 0, {0.7, 0.0})));
  CHECK(numerical_h(H, 0, {1.0, 0.0}, {-1.0, 0.0}) == doctest::Approx(2.0));
  CHECK(numerical_h(H, 0, {-1.0, 0.0}, {1.0, 0.0}) == 0.0);

  H.a2 = std::array<GridField, 2>{GridField(g, 0.5), GridField(g, 0.0)};
  CHECK(numerical_h(H, 0, {0.3, 0.0}, {0.3, 0.0}) == doctest::Approx(eval_h(H, 0, {0.3, 0.0})));
}

TEST_CASE("validation") {
  auto g = make_grid(1, 16);
  auto H = power_hamiltonian(g, 1.0, 2.0, GridField(g, 0.0));
  H.theta = 2.0;
  CHECK_THROWS_AS(H.validate(), std::invalid_argument);
  H.theta = 0.0;
  H.b = GridField(g, 0.0);
  CHECK_THROWS_AS(H.validate(), std::invalid_argument);
  H.b = GridField(g, 1.0);
  H.a1 = GridField(g, -1.0);
  H.l = 1.0;
  CHECK_NOTHROW(H.validate());
  CHECK_THROWS_AS(H.validate_for_scheme(), std::invalid_argument);
}

TEST_CASE("structure checks") {
  auto g = make_grid(1, 64);
  auto b = sample(g, [](const Vec& x) { return 1.5 + 0.5 * std::cos(kTwoPi * x[0]); });
  for (double m : {2.0, 3.0}) {
    HamiltonianSpec H = power_hamiltonian(g, 1.0, m, sample(g, [](const Vec& x) { return std::cos(kTwoPi * x[0]); }));
    H.b = b;
    auto rep = check_structure(H, 10000, 5);
    CHECK(rep.h2_worst_margin <= 0.0);
    CHECK(rep.monotonicity_violations == 0);
    CHECK(rep.consistency_exact);
    CHECK(rep.pass);
  }
}

TEST_CASE("fitted modulus of f") {
  // f Lipschitz with constant 5.
  auto g = make_grid(1, 1024);
  auto f = sample(g, [](const Vec& x) { return 5.0 / kTwoPi * std::sin(kTwoPi * x[0]); });
  auto rep = check_structure(power_hamiltonian(g, 1.0, 2.0, f), 10000, 9);
  CHECK(rep.zeta1_slope >= 4.9);
  CHECK(rep.zeta1_slope <= 5.0 + 1e-9);
}
