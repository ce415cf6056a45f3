#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlhj/barrier.hpp"

using namespace nlhj;

namespace {
BarrierSetup base_setup(int n, double sigma, double m, double theta) {
  BarrierSetup s;
  s.grid = make_grid(1, n);
  s.measure = discretize(fractional_measure(sigma, true), s.grid);
  s.params.x0 = {0.5, 0.0};
  s.params.r = 0.25;
  s.params.gamma = gamma0_boundary(sigma, m, theta);
  s.params.C2 = 1.0;
  s.A = 1.0;
  s.b0 = 1.0;
  s.m = m;
  s.theta = theta;
  return s;
}
}  // namespace

TEST_CASE("ball coordinates") {
  BarrierParams p;
  p.x0 = {0.5, 0.0};
  p.r = 0.2;
  auto c = eval_d0_dr_rho(p, {0.5, 0.0}, 1);
  CHECK(c.d0 == 0.0);
  CHECK(c.dr == doctest::Approx(0.2));
  CHECK(c.rho == 0.0);
  auto mid = eval_d0_dr_rho(p, {0.6, 0.0}, 1);
  CHECK(mid.rho == doctest::Approx(0.2 / 8.0));
  auto e = eval_d0_dr_rho(p, {0.55, 0.0}, 1);
  CHECK(e.d0 == doctest::Approx(0.05));
  CHECK(e.dr == doctest::Approx(0.15));
  CHECK(e.rho == doctest::Approx(0.0125));
  CHECK_THROWS_AS(eval_d0_dr_rho(p, {0.9, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("barrier values") {
  BarrierParams p;
  p.x0 = {0.5, 0.0};
  p.r = 0.2;
  p.gamma = 0.75;
  p.C1 = 2.0;
  p.C2 = 1.0;
  CHECK(eval_w(p, {0.5, 0.0}, 1) == 0.0);
  CHECK(eval_w(p, {0.9, 0.0}, 1) == doctest::Approx(4.0 * std::pow(0.2, 0.75) + 1.0).epsilon(1e-14));
  CHECK(eval_w(p, {0.9, 0.0}, 1) == doctest::Approx(2.1947).epsilon(1e-3));
  auto field = sample_w(p, make_grid(1, 64));
  CHECK(field.max() == doctest::Approx(2.0 * 2.0 * std::pow(0.2, 0.75) + 1.0));
}

TEST_CASE("admissible exponents") {
  CHECK(gamma0_boundary(0.5, 2.0, 0.0) == doctest::Approx(0.75));
  CHECK(gamma0_interior(0.5, 2.0, 0.0) == 1.0);
  CHECK(gamma0_interior(1.5, 2.0, 0.0) == doctest::Approx(0.5));
  CHECK(gamma0_boundary(1.0, 2.0, 1.5) == doctest::Approx(0.25));
}

TEST_CASE("forced C1 = 0 fails everywhere") {
  BarrierProblem P(base_setup(128, 0.5, 2.0, 0.0));
  auto rep = P.verify(0.0);
  CHECK_FALSE(rep.pass);
  for (const auto& row : rep.rows) CHECK(row.margin < 0.0);
}

TEST_CASE("C1 selection and the A scaling law") {
  auto s = base_setup(256, 0.5, 2.0, 0.0);
  BarrierProblem P(s);
  auto sel = P.select_C1();
  CHECK(sel.doublings <= 20);
  CHECK(sel.report.min_margin >= 0.0);
  CHECK(sel.base == doctest::Approx(3.0));

  s.A *= 16.0;
  auto big = BarrierProblem(s).select_C1();
  CHECK(big.C1 / sel.C1 <= 8.0);
}

TEST_CASE("degenerate right-hand side") {
  auto s = base_setup(128, 0.5, 2.0, 0.0);
  s.A = 0.0;
  s.params.C2 = 0.0;
  auto sel = BarrierProblem(s).select_C1();
  CHECK(sel.base == 1.0);
  CHECK(sel.C1 == std::ldexp(1.0, sel.doublings));
}

TEST_CASE("gamma = 1 is certified just below 1") {
  auto s = base_setup(128, 0.5, 2.0, 0.0);
  s.params.gamma = 1.0;
  s.params.C2 = 0.0;
  BarrierProblem P(s);
  CHECK(P.gamma() == doctest::Approx(1.0 - 1e-3));
}

TEST_CASE("censored and Levy-Ito modes") {
  auto s = base_setup(256, 0.5, 2.0, 0.0);
  s.measure = discretize(fractional_measure(0.5), s.grid);
  s.mode = BarrierMode::censored;
  CHECK(BarrierProblem(s).select_C1().report.pass);

  s.mode = BarrierMode::levy_ito;
  CHECK_THROWS_AS(BarrierProblem{s}, std::invalid_argument);
  s.jump = JumpFunction::scaled(
      sample(s.grid, [](const Vec& x) { return 1.5 + 0.5 * std::cos(2.0 * std::numbers::pi * x[0]); }));
  auto sel = BarrierProblem(s).select_C1();
  CHECK(sel.report.pass);
  CHECK(sel.doublings <= 30);
}

TEST_CASE("bound on I(w) has a finite constant") {
  BarrierProblem P(base_setup(256, 0.5, 2.0, 0.0));
  auto rep = P.bound_Iw(4.0);
  CHECK_FALSE(rep.rows.empty());
  CHECK(std::isfinite(rep.fitted_constant));
  for (const auto& row : rep.rows) CHECK(row.measured <= row.bound * (1.0 + 1e-9) + 1e-12);
}
