#include "nlhj/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nlhj/nonlocal.hpp"
#include "nlhj/parallel.hpp"

namespace nlhj {

void BarrierParams::validate() const {
  if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("barrier radius must lie in (0, 0.5)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("barrier exponent must lie in (0, 1]");
  if (!(C1 >= 0.0)) throw std::invalid_argument("C1 must be nonnegative");
  if (!(C2 >= 0.0)) throw std::invalid_argument("C2 must be nonnegative");
}

BallCoords eval_d0_dr_rho(const BarrierParams& params, const Vec& x, int dim) {
  double d0 = periodic_distance(x, params.x0, dim);
  if (d0 > params.r * (1.0 + 1e-12)) throw std::invalid_argument("point outside the barrier ball");
  BallCoords c;
  c.d0 = d0;
  c.dr = std::max(0.0, params.r - d0);
  c.rho = std::min(c.d0, c.dr) / 4.0;
  return c;
}

double eval_w1(const BarrierParams& p, const Vec& x, int dim) {
  double d0 = periodic_distance(x, p.x0, dim);
  if (d0 < p.r) return p.C1 * std::pow(d0, p.gamma);
  return p.C1 * std::pow(p.r, p.gamma);
}

double eval_w2(const BarrierParams& p, const Vec& x, int dim) {
  double d0 = periodic_distance(x, p.x0, dim);
  if (d0 < p.r) return p.C1 * (std::pow(p.r, p.gamma) - std::pow(p.r - d0, p.gamma));
  return p.C1 * std::pow(p.r, p.gamma) + p.C2;
}

double eval_w(const BarrierParams& p, const Vec& x, int dim) { return eval_w1(p, x, dim) + eval_w2(p, x, dim); }

GridField sample_w(const BarrierParams& params, const PeriodicGrid& grid) {
  return sample(grid, [&](const Vec& x) { return eval_w(params, x, grid.dim()); });
}

double gamma0_boundary(double sigma, double m, double theta) {
  return std::min((m - sigma) / m, (m - theta) / m);
}

double gamma0_interior(double sigma, double m, double theta) {
  double tilde;
  if (sigma > 1.0) {
    tilde = (m - sigma) / (m - 1.0);
  } else if (sigma == 1.0) {
    tilde = 1.0 - 1e-3;  // any exponent below 1 is admissible here
  } else {
    tilde = 1.0;
  }
  return std::min(tilde, (m - theta) / m);
}

void BarrierReport::write_csv(std::ostream& os, int dim) const {
  os << (dim == 1 ? "x" : "x,y") << ",d0,dr,rho,lhs,rhs,margin,lhs_fd\n";
  os.precision(17);
  for (const auto& r : rows) {
    os << r.x[0];
    if (dim == 2) os << ',' << r.x[1];
    os << ',' << r.d0 << ',' << r.dr << ',' << r.rho << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << ','
       << r.lhs_fd << '\n';
  }
}

BarrierProblem::BarrierProblem(BarrierSetup setup) : setup_(std::move(setup)) {
  auto& s = setup_;
  const auto& grid = s.grid;
  const int dim = grid.dim();
  const double h = grid.h();
  BarrierParams p = s.params;
  p.C1 = 1.0;
  p.validate();
  if (s.mode == BarrierMode::levy_ito && !s.jump) throw std::invalid_argument("Levy-Ito barrier needs a jump function");
  // gamma = 1 is certified slightly below 1 when C2 = 0.
  gamma_ = (p.C2 == 0.0 && p.gamma >= 1.0) ? 1.0 - 1e-3 : p.gamma;
  p.gamma = gamma_;
  s.params.gamma = gamma_;

  const double cj = s.mode == BarrierMode::levy_ito ? s.jump->cj() : 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double d0 = periodic_distance(grid.point(i), p.x0, dim);
    if (d0 <= 0.0 || d0 >= p.r) continue;
    if (p.r - d0 < 2.0 * h) continue;
    points_.push_back(i);
    BallCoords c{d0, p.r - d0, std::min(d0, p.r - d0) / (4.0 * cj)};
    coords_.push_back(c);
    grad_hat_.push_back(gamma_ * (std::pow(c.d0, gamma_ - 1.0) + std::pow(c.dr, gamma_ - 1.0)));
    rhs_.push_back(s.A * std::pow(c.rho, -s.theta));
  }
  if (points_.empty()) throw std::invalid_argument("barrier ball holds no test points on this grid");

  GridField w_hat = sample_w(p, grid);
  GridField outside(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    outside[i] = periodic_distance(grid.point(i), p.x0, dim) < p.r ? 0.0 : 1.0;
  }
  for (std::size_t t = 0; t < points_.size(); ++t) {
    auto g = one_sided_gradients(w_hat, points_[t]);
    Vec c{0.5 * (g.minus[0] + g.plus[0]), 0.5 * (g.minus[1] + g.plus[1])};
    grad_fd_.push_back(norm(c, dim));
  }

  const std::size_t T = points_.size();
  switch (s.mode) {
    case BarrierMode::full: {
      // x-independent measure: the sup over xi is a single evaluation.
      auto op = make_convolution_operator(s.measure, grid);
      GridField a = op->apply(w_hat);
      GridField b = op->apply(outside);
      I_hat_.assign(1, std::vector<double>(T));
      I_out_.assign(1, std::vector<double>(T));
      for (std::size_t t = 0; t < T; ++t) {
        I_hat_[0][t] = a[points_[t]];
        I_out_[0][t] = b[points_[t]];
      }
      break;
    }
    case BarrierMode::censored: {
      Domain dom = ball_domain(grid, p.x0, p.r);
      I_hat_.assign(1, std::vector<double>(T));
      I_out_.assign(1, std::vector<double>(T));
      parallel_for(T, [&](std::size_t t) {
        Stencil st = make_stencil(censor(s.measure, dom, points_[t]), grid);
        I_hat_[0][t] = st.apply(w_hat, points_[t]);
        I_out_[0][t] = st.apply(outside, points_[t]);
      });
      break;
    }
    case BarrierMode::levy_ito: {
      // xi over every node: B_1(x) covers the unit torus.
      const std::size_t N = grid.size();
      I_hat_.assign(N, std::vector<double>(T));
      I_out_.assign(N, std::vector<double>(T));
      parallel_for(N, [&](std::size_t xi) {
        Stencil st = make_stencil(push_forward(s.measure, *s.jump, xi), grid);
        double ma = st.tail_mean(w_hat);
        double mb = st.tail_mean(outside);
        for (std::size_t t = 0; t < T; ++t) {
          I_hat_[xi][t] = st.apply(w_hat, points_[t], ma);
          I_out_[xi][t] = st.apply(outside, points_[t], mb);
        }
      });
      break;
    }
  }
}

double BarrierProblem::sup_I(std::size_t t, double C1) const {
  const double C2 = setup_.params.C2;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < I_hat_.size(); ++k) best = std::max(best, C1 * I_hat_[k][t] + C2 * I_out_[k][t]);
  return best;
}

BarrierReport BarrierProblem::verify(double C1) const {
  BarrierReport rep;
  rep.C1 = C1;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const auto& s = setup_;
  for (std::size_t t = 0; t < points_.size(); ++t) {
    BarrierRow row;
    row.x = s.grid.point(points_[t]);
    row.d0 = coords_[t].d0;
    row.dr = coords_[t].dr;
    row.rho = coords_[t].rho;
    double I = sup_I(t, C1);
    row.lhs = -I + s.b0 * std::pow(C1 * grad_hat_[t], s.m);
    row.lhs_fd = -I + s.b0 * std::pow(C1 * grad_fd_[t], s.m);
    row.rhs = rhs_[t];
    row.margin = row.lhs - row.rhs;
    rep.min_margin = std::min(rep.min_margin, row.margin);
    rep.rows.push_back(row);
  }
  rep.pass = rep.min_margin >= 0.0;
  return rep;
}

C1Selection BarrierProblem::select_C1(int max_doublings) const {
  const auto& s = setup_;
  C1Selection sel;
  sel.base = std::pow(s.A, 1.0 / s.m) + std::pow(s.params.C2, 1.0 / s.m) + 1.0;
  double C1 = sel.base;
  for (int k = 0; k <= max_doublings; ++k) {
    BarrierReport rep = verify(C1);
    if (rep.pass) {
      sel.C1 = C1;
      sel.doublings = k;
      sel.constant = C1 / sel.base;
      sel.report = std::move(rep);
      return sel;
    }
    C1 *= 2.0;
  }
  std::ostringstream msg;
  msg << "select_C1: no passing C1 after " << max_doublings << " doublings (last C1 = " << C1 / 2.0
      << "); the quadrature is probably mis-scaled";
  throw std::runtime_error(msg.str());
}

BoundReport BarrierProblem::bound_Iw(double C1) const {
  const auto& s = setup_;
  const double sigma = s.measure.sigma;
  const double C2 = s.params.C2;
  BoundReport rep;
  if (C2 > 0.0) {
    rep.branch = BoundReport::Branch::jump;
  } else if (sigma >= 1.0) {
    rep.branch = BoundReport::Branch::strong;
  } else {
    rep.branch = BoundReport::Branch::weak;
  }
  for (std::size_t t = 0; t < points_.size(); ++t) {
    BoundRow row;
    row.x = s.grid.point(points_[t]);
    row.rho = coords_[t].rho;
    row.measured = sup_I(t, C1);
    switch (rep.branch) {
      case BoundReport::Branch::jump:
        row.shape = (C1 + C2) * std::pow(row.rho, -sigma);
        break;
      case BoundReport::Branch::strong:
        row.shape = C1 * std::pow(row.rho, gamma_ - 1.0) * h_alpha_sigma(1.0, sigma, row.rho);
        break;
      case BoundReport::Branch::weak:
        row.shape = C1 * h_alpha_sigma(gamma_, sigma, row.rho);
        break;
    }
    rep.fitted_constant = std::max(rep.fitted_constant, row.measured / row.shape);
    rep.rows.push_back(row);
  }
  for (auto& row : rep.rows) row.bound = rep.fitted_constant * row.shape;
  return rep;
}

}  // namespace nlhj
