#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nlhj/levy.hpp"

using namespace nlhj;

TEST_CASE("h_alpha_sigma") {
  CHECK(h_alpha_sigma(0.0, 1.0, 0.5) == doctest::Approx(2.0));
  CHECK(h_alpha_sigma(1.0, 1.0, 0.5) == doctest::Approx(1.6931).epsilon(1e-4));
  CHECK(h_alpha_sigma(2.0, 1.0, 0.3) == 1.0);
  CHECK_THROWS_AS(h_alpha_sigma(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(fractional_measure(2.0).validate(1), std::invalid_argument);
  CHECK_THROWS_AS(crossed_measure(0.5, 0.5).validate(1), std::invalid_argument);
  CHECK_THROWS_AS(finite_measure({{{0.1, 0.0}, -1.0}}, 0.5).validate(1), std::invalid_argument);
  CHECK(fractional_constant(1, 1.0) == doctest::Approx(1.0 / std::acos(-1.0)));
}

TEST_CASE("finite measure passes through") {
  auto g = make_grid(1, 64);
  auto q = discretize(finite_measure({{{0.25, 0.0}, 1.0}, {{-0.25, 0.0}, 1.0}}, 0.5), g);
  CHECK(q.atoms.size() == 2);
  CHECK(q.near_second_moment() == 0.0);
  CHECK(q.total_mass() == doctest::Approx(2.0));
}

TEST_CASE("fractional quadrature keeps the tail mass") {
  // Mass of |z|^{-1-s} beyond the near ball is 2 r^{-s} / s on the line.
  for (double s : {0.5, 1.0, 1.5}) {
    auto g = make_grid(1, 128);
    auto q = discretize(fractional_measure(s), g);
    const double analytic = 2.0 * std::pow(q.r_near, -s) / s;
    CHECK(q.total_mass() + q.dropped_tail_mass == doctest::Approx(analytic).epsilon(1e-9));
    auto m = q.first_moment();
    CHECK(std::abs(m[0]) < 1e-12);
  }
}

TEST_CASE("near moments and atom mass") {
  auto g = make_grid(1, 512);
  auto q = discretize(fractional_measure(0.5), g, 0.01);
  // The near ball is rounded to whole cells.
  CHECK(std::abs(q.r_near - 0.01) <= g.h() / 2.0);
  const double r = q.r_near;
  CHECK(q.near_second_moment() == doctest::Approx(2.0 * std::pow(r, 1.5) / 1.5).epsilon(1e-12));
  CHECK(q.atom_mass() + q.far_tail_mass + q.dropped_tail_mass ==
        doctest::Approx(2.0 * std::pow(r, -0.5) / 0.5).epsilon(1e-9));
  CHECK(q.atom_mass() == doctest::Approx(2.0 * (std::pow(r, -0.5) - std::pow(4.0, -0.5)) / 0.5).epsilon(0.02));
  CHECK_THROWS_AS(discretize(fractional_measure(0.5), g, g.h() / 4.0), std::invalid_argument);
}

TEST_CASE("moment bounds with a fitted constant") {
  auto g = make_grid(1, 256);
  auto q = discretize(fractional_measure(0.5), g);
  auto rep = check_moment_bounds(q, 0.5, {0.0, 0.5, 1.0, 2.0}, {0.05, 0.1, 0.25, 0.5});
  CHECK(rep.pass);
  CHECK(rep.fitted_cr > 0.0);
  auto strict = check_moment_bounds(q, 0.5, {0.0, 2.0}, {0.1}, rep.fitted_cr * 0.5);
  CHECK_FALSE(strict.pass);
}

TEST_CASE("censoring") {
  auto g = make_grid(1, 100);
  auto q = discretize(finite_measure({{{0.05, 0.0}, 1.0}, {{-0.05, 0.0}, 1.0}}, 0.5), g);
  auto dom = ball_domain(g, {0.505, 0.0}, 0.2);
  auto same = censor(q, dom, 50);
  CHECK(same.atoms.size() == 2);

  // Node 0.655 sits 0.05 from the boundary; the outward atom lands outside.
  auto cut = censor(discretize(finite_measure({{{0.1, 0.0}, 1.0}, {{-0.1, 0.0}, 1.0}}, 0.5), g), dom, 65);
  REQUIRE(cut.atoms.size() == 1);
  CHECK(cut.atoms[0].offset[0] < 0.0);
}

TEST_CASE("push-forward") {
  auto g = make_grid(1, 64);
  auto q = discretize(fractional_measure(0.5), g);
  auto same = push_forward(q, JumpFunction::identity(), 3);
  CHECK(same.atoms.size() == q.atoms.size());
  CHECK(same.total_mass() == doctest::Approx(q.total_mass()));

  auto zero = push_forward(q, JumpFunction::scaled(GridField(g, 0.0)), 3);
  CHECK(zero.total_mass() == 0.0);
  CHECK(zero.near_second_moment() == 0.0);

  auto twice = JumpFunction::scaled(GridField(g, 2.0));
  CHECK(twice.cj() == 2.0);
  CHECK(check_j1(twice, g, q));
}

TEST_CASE("covering property") {
  auto g1 = make_grid(1, 64);
  auto full = covering_check(discretize(fractional_measure(0.5), g1), JumpFunction::identity(), g1, 8, 1);
  CHECK(full.covered);
  CHECK(full.n_star == 1);

  auto g2 = make_grid(2, 16);
  auto cross = covering_check(discretize(crossed_measure(0.5, 0.5), g2), JumpFunction::identity(), g2, 8, 1);
  CHECK(cross.covered);
  CHECK(cross.n_star == 2);

  auto orbit = covering_check(discretize(finite_measure({{{0.5, 0.0}, 1.0}, {{-0.5, 0.0}, 1.0}}, 0.5), g1),
                              JumpFunction::identity(), g1, 8, 1);
  CHECK_FALSE(orbit.covered);
  CHECK(orbit.n_star == -1);
  REQUIRE_FALSE(orbit.history.empty());
  CHECK(orbit.history.back() == 2);
}
