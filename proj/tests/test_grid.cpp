#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlhj/grid.hpp"

using namespace nlhj;

TEST_CASE("grid construction") {
  auto g = make_grid(1, 64);
  CHECK(g.size() == 64);
  CHECK(g.h() == doctest::Approx(0.015625));
  CHECK(make_grid(2, 32).size() == 1024);
  CHECK_THROWS_WITH_AS(make_grid(1, 4), doctest::Contains("too coarse"), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 16), std::invalid_argument);
}

TEST_CASE("cell-centred nodes and periodic indexing") {
  auto g = make_grid(2, 8);
  auto p = g.point(g.index(0, 0));
  CHECK(p[0] == doctest::Approx(0.0625));
  CHECK(p[1] == doctest::Approx(0.0625));
  CHECK(g.shifted(g.index(0, 3), -1, 0) == g.index(7, 3));
  CHECK(g.shifted(g.index(5, 7), 0, 2) == g.index(5, 1));
  CHECK(g.nearest({0.99, 0.01}) == g.index(7, 0));
  CHECK(periodic_distance({0.95, 0.0}, {0.05, 0.0}, 1) == doctest::Approx(0.1));
}

TEST_CASE("ball domain distance") {
  // n = 15 puts nodes exactly on 0.5 and 0.7.
  auto g = make_grid(1, 15);
  auto d = ball_domain(g, {0.5, 0.0}, 0.2);
  CHECK(d.dist[7] == doctest::Approx(0.2));
  CHECK(d.dist[10] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  auto g20 = make_grid(1, 10);
  auto d20 = ball_domain(g20, {0.5, 0.0}, 0.2);
  CHECK(d20.dist[5] == doctest::Approx(0.15));
  CHECK(d20.contains(5));
  CHECK_THROWS_AS(ball_domain(g, {0.5, 0.0}, 0.5), std::invalid_argument);
}

TEST_CASE("one-sided gradients") {
  auto g = make_grid(1, 64);
  auto lin = sample(g, [](const Vec& x) { return 3.0 * x[0]; });
  auto s = one_sided_gradients(lin, 20);
  CHECK(s.minus[0] == doctest::Approx(3.0));
  CHECK(s.plus[0] == doctest::Approx(3.0));

  auto c = one_sided_gradients(GridField(g, 2.5), 7);
  CHECK(c.minus[0] == 0.0);
  CHECK(c.plus[0] == 0.0);

  // Crest of the cosine on node 0.
  auto g256 = make_grid(1, 256);
  const double h = g256.h();
  auto u = sample(g256, [h](const Vec& x) { return std::cos(2.0 * std::numbers::pi * (x[0] - h / 2.0)); });
  auto q = one_sided_gradients(u, 0);
  const double expected = (1.0 - std::cos(2.0 * std::numbers::pi * h)) / h;
  CHECK(q.minus[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(q.plus[0] == doctest::Approx(-expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.0771).epsilon(1e-3));
}

TEST_CASE("field helpers") {
  auto g = make_grid(1, 8);
  GridField u(g, std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7});
  auto s = shift_field(u, 2);
  CHECK(s[2] == 0.0);
  CHECK(s[1] == 7.0);
  CHECK(u.mean() == doctest::Approx(3.5));
  CHECK(u.sup_norm() == 7.0);
  CHECK_THROWS_AS(GridField(g, std::vector<double>(5)), std::invalid_argument);
  auto z = snap_offset({0.26, -0.01}, 0.125);
  CHECK(z[0] == 2);
  CHECK(z[1] == 0);
}
