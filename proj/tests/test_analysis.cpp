#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlhj/analysis.hpp"

using namespace nlhj;

TEST_CASE("modulus of continuity") {
  auto g = make_grid(1, 64);
  auto table = modulus_of_continuity(GridField(g, 4.0), default_radii(g));
  for (const auto& p : table) CHECK(p.omega == 0.0);

  auto tent = sample(g, [](const Vec& x) { return std::min(x[0], 1.0 - x[0]); });
  auto t2 = modulus_of_continuity(tent, {2 * g.h(), 8 * g.h()});
  CHECK(t2[0].omega == doctest::Approx(2 * g.h()));
  CHECK(t2[1].omega == doctest::Approx(8 * g.h()));

  auto g2 = make_grid(2, 16);
  auto plane = sample(g2, [](const Vec& x) { return std::sin(2.0 * std::numbers::pi * x[1]); });
  CHECK(modulus_of_continuity(plane, {0.5}).front().omega > 1.5);
}

TEST_CASE("holder_fit on exact data") {
  std::vector<OmegaPoint> power, lip;
  for (double r = 0.01; r <= 0.5; r *= 1.3) {
    power.push_back({r, 3.0 * std::pow(r, 0.6)});
    lip.push_back({r, r});
  }
  auto fit = holder_fit(power, 0.01, 0.5);
  CHECK(fit.gamma == doctest::Approx(0.6));
  CHECK(fit.seminorm == doctest::Approx(3.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(holder_fit(lip, 0.01, 0.5).gamma == doctest::Approx(1.0));
  CHECK_THROWS_AS(holder_fit(power, 0.2, 0.3), std::invalid_argument);
}

TEST_CASE("oscillation") {
  auto g = make_grid(1, 64);
  const double h = g.h();
  auto c = sample(g, [h](const Vec& x) { return std::cos(2.0 * std::numbers::pi * (x[0] - h / 2.0)); });
  CHECK(oscillation(c) == doctest::Approx(2.0));
  CHECK(oscillation(GridField(g, 1.5)) == 0.0);
  auto dom = ball_domain(g, {0.25, 0.0}, 0.1);
  CHECK(oscillation(c, dom) < 2.0);

  auto flat = oscillation_stability({0.1, 0.05}, {GridField(g, 1.0), GridField(g, 2.0)});
  CHECK(flat.ratio == 1.0);
  CHECK(flat.pass);
  auto grow = oscillation_stability({0.1, 0.05}, {c, sample(g, [](const Vec& x) { return 3.0 * x[0]; })});
  CHECK_FALSE(grow.pass);
}

TEST_CASE("default fit window") {
  auto g = make_grid(1, 256);
  auto [lo, hi] = default_fit_range(g);
  CHECK(lo == doctest::Approx(4.0 / 256));
  CHECK(hi == 0.125);
  auto r = default_radii(g);
  CHECK(r.front() == doctest::Approx(2 * g.h()));
  CHECK(r.back() == doctest::Approx(0.5));
}
