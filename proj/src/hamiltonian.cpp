#include "nlhj/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nlhj {

namespace {

// Shared by eval_h and numerical_h so that the two agree bit-for-bit on
// smooth inputs.
double magnitude_from_square(double s) { return std::sqrt(s); }

double power(double q, double e) {
  if (q == 0.0) return e == 0.0 ? 1.0 : 0.0;
  // small integer exponents dominate the solver's inner loop
  if (e == 0.0) return 1.0;
  if (e == 1.0) return q;
  if (e == 2.0) return q * q;
  if (e == 3.0) return q * q * q;
  return std::pow(q, e);
}

void check_grid(const GridField& g, const PeriodicGrid& grid, const char* name) {
  if (!(g.grid == grid)) throw std::invalid_argument(std::string("hamiltonian field on wrong grid: ") + name);
  if (!g.all_finite()) throw std::invalid_argument(std::string("hamiltonian field not finite: ") + name);
}

}  // namespace

void HamiltonianSpec::validate() const {
  check_grid(b, grid, "b");
  check_grid(f, grid, "f");
  if (!(b.min() > 0.0)) throw std::invalid_argument("b must be bounded below by b0 > 0");
  if (!(m > 0.0)) throw std::invalid_argument("exponent m must be positive");
  if (a1) {
    check_grid(*a1, grid, "a1");
    if (!(l > 0.0 && l < m)) throw std::invalid_argument("lower-order exponent l must lie in (0, m)");
  }
  if (a2) {
    check_grid((*a2)[0], grid, "a2");
    check_grid((*a2)[1], grid, "a2");
    if (!(m > 1.0)) throw std::invalid_argument("drift term requires m > 1");
  }
  if (!(theta >= 0.0 && theta < m)) throw std::invalid_argument("theta must lie in [0, m)");
  if (!(A >= 0.0)) throw std::invalid_argument("blow-up amplitude A must be nonnegative");
}

void HamiltonianSpec::validate_for_scheme() const {
  validate();
  if (m < 1.0) throw std::invalid_argument("upwind scheme requires m >= 1");
  if (a1) {
    if (a1->min() < 0.0) throw std::invalid_argument("upwind scheme requires a1 >= 0");
    if (l < 1.0) throw std::invalid_argument("upwind scheme requires l >= 1 when a1 is present");
  }
}

HamiltonianSpec power_hamiltonian(const PeriodicGrid& grid, double b, double m, GridField f) {
  HamiltonianSpec h;
  h.grid = grid;
  h.b = GridField(grid, b);
  h.m = m;
  h.f = std::move(f);
  h.validate();
  return h;
}

double eval_h(const HamiltonianSpec& spec, std::size_t x, const Vec& p) {
  const int dim = spec.grid.dim();
  double s = p[0] * p[0];
  if (dim == 2) s += p[1] * p[1];
  double q = magnitude_from_square(s);
  double v = spec.b[x] * power(q, spec.m);
  if (spec.a1) v += (*spec.a1)[x] * power(q, spec.l);
  if (spec.a2) {
    for (int k = 0; k < dim; ++k) v += (*spec.a2)[static_cast<std::size_t>(k)][x] * p[static_cast<std::size_t>(k)];
  }
  return v - spec.f[x];
}

double upwind_magnitude(const Vec& p_minus, const Vec& p_plus, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    double a = std::max(p_minus[kk], 0.0);
    double c = std::min(p_plus[kk], 0.0);
    // At a smooth point one term is zero, so the sum matches eval_h exactly.
    s += a * a + c * c;
  }
  return magnitude_from_square(s);
}

double numerical_h(const HamiltonianSpec& spec, std::size_t x, const Vec& p_minus, const Vec& p_plus) {
  const int dim = spec.grid.dim();
  double q = upwind_magnitude(p_minus, p_plus, dim);
  double v = spec.b[x] * power(q, spec.m);
  if (spec.a1) v += (*spec.a1)[x] * power(q, spec.l);
  if (spec.a2) {
    for (int k = 0; k < dim; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      double a = (*spec.a2)[kk][x];
      v += a * (a > 0.0 ? p_minus[kk] : p_plus[kk]);
    }
  }
  return v - spec.f[x];
}

double flux_lipschitz(const HamiltonianSpec& spec, std::size_t x, double q) {
  const int dim = spec.grid.dim();
  double radial = spec.b[x] * spec.m * power(q, spec.m - 1.0);
  if (spec.a1) radial += std::abs((*spec.a1)[x]) * spec.l * power(q, spec.l - 1.0);
  double L = radial * std::sqrt(2.0 * dim);
  if (spec.a2) {
    for (int k = 0; k < dim; ++k) L += std::abs((*spec.a2)[static_cast<std::size_t>(k)][x]);
  }
  return L;
}

StructureReport check_structure(const HamiltonianSpec& spec, std::size_t sample_count, std::uint64_t seed,
                                std::optional<double> A_override) {
  spec.validate();
  StructureReport rep;
  rep.samples = sample_count;
  const auto& grid = spec.grid;
  const int dim = grid.dim();
  const double m = spec.m;
  const double b0 = spec.b0();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> node(0, grid.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_direction = [&] {
    Vec d{gauss(rng), dim == 2 ? gauss(rng) : 0.0};
    double r = norm(d, dim);
    if (r == 0.0) return Vec{1.0, 0.0};
    return Vec{d[0] / r, d[1] / r};
  };
  auto random_p = [&] {
    double mag = std::pow(10.0, -2.0 + 3.5 * unit(rng));
    Vec d = random_direction();
    return Vec{mag * d[0], mag * d[1]};
  };
  auto add = [](const Vec& a, const Vec& b) { return Vec{a[0] + b[0], a[1] + b[1]}; };

  // (H1): fit on the first half, score on the second.
  std::size_t half = std::max<std::size_t>(1, sample_count / 2);
  struct H1Sample {
    std::size_t x, y;
    Vec p, q;
  };
  auto draw_h1 = [&](bool zero_q, bool same_x) {
    H1Sample s{node(rng), 0, random_p(), {0.0, 0.0}};
    s.y = same_x ? s.x : node(rng);
    if (!same_x && unit(rng) < 0.5) {
      // neighbours resolve the local slope
      s.y = grid.shifted(s.x, 1, 0);
      if (unit(rng) < 0.5) s.p = {0.0, 0.0};
    }
    if (!zero_q) {
      double pn = norm(s.p, dim);
      if (pn < 0.1) s.p = {0.1 * s.p[0] / std::max(pn, 1e-300), 0.1 * s.p[1] / std::max(pn, 1e-300)};
      if (norm(s.p, dim) == 0.0) s.p = {0.1, 0.0};
      Vec d = random_direction();
      double qn = 0.1 * norm(s.p, dim) * unit(rng);
      s.q = {qn * d[0], qn * d[1]};
    }
    return s;
  };
  for (std::size_t i = 0; i < half; ++i) {
    auto s = draw_h1(true, false);
    double d = periodic_distance(grid.point(s.x), grid.point(s.y), dim);
    if (d == 0.0) continue;
    double ratio = (eval_h(spec, s.y, s.p) - eval_h(spec, s.x, s.p)) / (d * (1.0 + std::pow(norm(s.p, dim), m)));
    rep.zeta1_slope = std::max(rep.zeta1_slope, ratio);
    auto t = draw_h1(false, true);
    double qn = norm(t.q, dim);
    if (qn == 0.0) continue;
    double ratio2 = (eval_h(spec, t.x, add(t.p, t.q)) - eval_h(spec, t.x, t.p)) / (qn * std::pow(norm(t.p, dim), m - 1.0));
    rep.zeta2_slope = std::max(rep.zeta2_slope, ratio2);
  }
  rep.h1_worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = half; i < sample_count; ++i) {
    auto s = draw_h1(unit(rng) < 0.5, false);
    double d = periodic_distance(grid.point(s.x), grid.point(s.y), dim);
    double pn = norm(s.p, dim);
    double lhs = eval_h(spec, s.y, add(s.p, s.q)) - eval_h(spec, s.x, s.p);
    double rhs = rep.zeta1_slope * d * (1.0 + std::pow(pn, m)) + rep.zeta2_slope * norm(s.q, dim) * std::pow(pn, m - 1.0);
    rep.h1_worst_margin = std::max(rep.h1_worst_margin, lhs - rhs);
  }

  // (H2)
  rep.A_used = A_override.value_or(spec.H0());
  rep.h2_worst_margin = -std::numeric_limits<double>::infinity();
  rep.A_fit = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    std::size_t x = node(rng);
    Vec p = random_p();
    double mu = 1e-3 + (1.0 - 1e-3) * unit(rng);
    double pm = std::pow(norm(p, dim), m);
    double lhs = eval_h(spec, x, p) - mu * eval_h(spec, x, {p[0] / mu, p[1] / mu});
    double rhs = (1.0 - mu) * (b0 * (1.0 - m) * pm + rep.A_used);
    rep.h2_worst_margin = std::max(rep.h2_worst_margin, lhs - rhs);
    rep.A_fit = std::max(rep.A_fit, lhs / (1.0 - mu) - b0 * (1.0 - m) * pm);
  }
  rep.h2_pass = rep.h2_worst_margin <= 0.0;

  // numerical_h monotonicity and consistency
  rep.consistency_exact = true;
  for (std::size_t i = 0; i < sample_count; ++i) {
    std::size_t x = node(rng);
    Vec pm{2.0 * gauss(rng), dim == 2 ? 2.0 * gauss(rng) : 0.0};
    Vec pp{2.0 * gauss(rng), dim == 2 ? 2.0 * gauss(rng) : 0.0};
    auto k = static_cast<std::size_t>(dim == 2 && unit(rng) < 0.5 ? 1 : 0);
    double eps = std::pow(10.0, -6.0 + 6.0 * unit(rng));
    double base = numerical_h(spec, x, pm, pp);
    Vec pm2 = pm;
    pm2[k] += eps;
    Vec pp2 = pp;
    pp2[k] += eps;
    if (numerical_h(spec, x, pm2, pp) < base) ++rep.monotonicity_violations;
    if (numerical_h(spec, x, pm, pp2) > base) ++rep.monotonicity_violations;
    if (numerical_h(spec, x, pm, pm) != eval_h(spec, x, pm)) rep.consistency_exact = false;
  }
  rep.pass = rep.h2_pass && rep.monotonicity_violations == 0 && rep.consistency_exact;
  return rep;
}

}  // namespace nlhj
