#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlhj/ergodic.hpp"

using namespace nlhj;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("constant case is exact") {
  auto g = make_grid(1, 64);
  auto H = power_hamiltonian(g, 1.0, 2.0, GridField(g, 0.7));
  auto op = make_convolution_operator(discretize(fractional_measure(0.5), g), g);
  EvolutionConfig c;
  c.residual_tol = 1e-11;
  auto er = vanishing_discount(H, *op, default_lambda_seq(), c);
  CHECK(std::abs(er.c - 0.7) <= 1e-8);
  CHECK(er.w.sup_norm() <= 1e-8);
  for (double o : er.osc_w) CHECK(o <= 1e-8);

  auto lt = long_time_constant(H, *op, GridField(g, 0.0), 1.0, 2.0, c);
  CHECK(lt.slope == doctest::Approx(0.7).epsilon(1e-10));
  auto gap = large_time_gap(lt.trajectory, er.c, er.w);
  for (const auto& r : gap.rows) CHECK(r.gap <= 1e-8);
}

TEST_CASE("lambda sequence must decrease") {
  auto g = make_grid(1, 32);
  auto H = power_hamiltonian(g, 1.0, 2.0, GridField(g, 0.0));
  auto op = make_convolution_operator(discretize(fractional_measure(0.5), g), g);
  CHECK_THROWS_AS(vanishing_discount(H, *op, {0.1, 0.2}, EvolutionConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(vanishing_discount(H, *op, {}, EvolutionConfig{}), std::invalid_argument);
}

TEST_CASE("ergodic constant matches the long-time slope on a coarse grid") {
  auto g = make_grid(1, 64);
  auto f = sample(g, [](const Vec& x) { return std::cos(kTwoPi * x[0]); });
  auto H = power_hamiltonian(g, 1.0, 2.0, f);
  auto op = make_convolution_operator(discretize(fractional_measure(0.5), g), g);
  EvolutionConfig c;
  auto er = vanishing_discount(H, *op, {0.1, 0.05, 0.025}, c);
  CHECK(er.c < 0.0);
  CHECK(std::abs(er.differences[1]) < std::abs(er.differences[0]));
  // w_lambda solves the cell problem up to lambda w_lambda.
  CHECK(er.residual <= 0.025 * er.osc_w.back() + 1e-6);
  auto lt = long_time_constant(H, *op, GridField(g, 0.0), 10.0, 20.0, c);
  CHECK(std::abs(lt.slope - er.c) <= 1e-2);
  CHECK(lt.spread <= 1e-6);
}
