#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlhj/nonlocal.hpp"

using namespace nlhj;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridField cosine(const PeriodicGrid& g, int k) {
  return sample(g, [k](const Vec& x) { return std::cos(kTwoPi * k * x[0]); });
}

double rel_error(const GridField& a, const GridField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e / b.sup_norm();
}
}  // namespace

TEST_CASE("constants are annihilated") {
  auto g = make_grid(1, 128);
  auto q = discretize(fractional_measure(1.0), g);
  GridField c(g, 3.25);
  auto dom = ball_domain(g, {0.5, 0.0}, 0.3);
  CHECK(eval_operator(c, 10, q) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(eval_censored(c, 64, q, dom) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(eval_levy_ito(c, 10, q, JumpFunction::scaled(GridField(g, 2.0))) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(spectral_fractional(c, 0.5).sup_norm() < 1e-12);
}

TEST_CASE("stencil is monotone and symmetric") {
  auto g = make_grid(1, 64);
  auto st = make_stencil(discretize(fractional_measure(1.5), g), g);
  double left = 0.0, right = 0.0;
  for (const auto& e : st.entries) {
    CHECK(e.weight >= 0.0);
    // the n/2 offset is its own mirror image
    if (std::abs(e.di) == g.n() / 2) continue;
    (e.di < 0 ? left : right) += e.weight;
  }
  CHECK(left == doctest::Approx(right).epsilon(1e-12));
}

TEST_CASE("quadrature against the spectral oracle") {
  auto g = make_grid(1, 512);
  auto u = cosine(g, 1);
  auto q = discretize(fractional_measure(1.0, true), g);
  GridField quad(g);
  for (std::size_t x = 0; x < g.size(); ++x) quad[x] = eval_operator(u, x, q);
  GridField exact = sample(g, [](const Vec& x) { return -kTwoPi * std::cos(kTwoPi * x[0]); });
  CHECK(rel_error(quad, exact) <= 0.02);
}

TEST_CASE("spectral multiplier") {
  auto g = make_grid(1, 256);
  auto s = spectral_fractional(cosine(g, 1), 0.5);
  CHECK(s[0] / std::cos(kTwoPi * g.point(0)[0]) == doctest::Approx(-2.5066).epsilon(1e-4));
  auto s2 = spectral_fractional(cosine(g, 2), 1.5);
  CHECK(s2[3] / std::cos(2.0 * kTwoPi * g.point(3)[0]) == doctest::Approx(-std::pow(2.0 * kTwoPi, 1.5)));
  CHECK_THROWS_AS(spectral_fractional(GridField(make_grid(2, 8)), 1.0), std::invalid_argument);
}

TEST_CASE("convolution operator agrees with the stencil") {
  for (int dim : {1, 2}) {
    auto g = make_grid(dim, dim == 1 ? 128 : 24);
    auto q = discretize(fractional_measure(0.7), g);
    auto op = make_convolution_operator(q, g);
    auto u = sample(g, [](const Vec& x) { return std::sin(kTwoPi * x[0]) + 0.3 * std::cos(2.0 * kTwoPi * x[1]); });
    auto fast = op->apply(u);
    auto st = make_stencil(q, g);
    for (std::size_t x = 0; x < g.size(); x += 7) CHECK(fast[x] == doctest::Approx(st.apply(u, x)).epsilon(1e-10));
    CHECK(op->stiffness() == doctest::Approx(st.stiffness()));
  }
}

TEST_CASE("censored operator") {
  auto g = make_grid(1, 100);
  auto q = discretize(finite_measure({{{0.05, 0.0}, 1.0}, {{-0.05, 0.0}, 2.0}, {{0.13, 0.0}, 0.5}}, 0.5), g);
  auto u = sample(g, [](const Vec& x) { return x[0] * x[0]; });
  auto dom = ball_domain(g, {0.505, 0.0}, 0.2);
  // Every atom from the centre stays inside: censoring is a no-op.
  CHECK(eval_censored(u, 50, q, dom) == doctest::Approx(eval_operator(u, 50, q)));
  // Brute force at node 0.625: the +0.13 atom lands at 0.755, outside.
  const std::size_t x = 62;
  double brute = 1.0 * (u[67] - u[x]) + 2.0 * (u[57] - u[x]);
  CHECK(eval_censored(u, x, q, dom) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("Levy-Ito operator") {
  auto g = make_grid(1, 512);
  auto u = cosine(g, 1);
  auto q = discretize(fractional_measure(1.0, true), g);
  for (std::size_t x : {0u, 100u, 300u}) {
    CHECK(eval_levy_ito(u, x, q, JumpFunction::identity()) == doctest::Approx(eval_operator(u, x, q)));
  }
  auto twice = JumpFunction::scaled(GridField(g, 2.0));
  double err = 0.0, scale = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    double ref = 2.0 * eval_operator(u, x, q);
    err = std::max(err, std::abs(eval_levy_ito(u, x, q, twice) - ref));
    scale = std::max(scale, std::abs(ref));
  }
  CHECK(err / scale <= 0.03);

  auto gx = sample(g, [](const Vec& x) { return 1.5 + 0.5 * std::cos(kTwoPi * x[0]); });
  auto jump = JumpFunction::scaled(gx);
  auto op = make_levy_ito_operator(q, jump, g);
  auto field = op->apply(u);
  for (std::size_t x : {5u, 200u, 411u}) CHECK(field[x] == doctest::Approx(eval_levy_ito(u, x, q, jump)));
}
