#pragma once

#include <ostream>
#include <vector>

#include "nlhj/grid.hpp"
#include "nlhj/hamiltonian.hpp"
#include "nlhj/nonlocal.hpp"
#include "nlhj/solver.hpp"

namespace nlhj {

/// Sign convention. The stationary problem is lambda u - I u + H = 0 and the
/// ergodic problem -I w + H(x, Dw) = -c with c = lim lambda u_lambda(x_ref).
/// Then w + c t solves u_t - I u + H = 0, so the long-time slope of the
/// evolution equals +c.
struct ErgodicResult {
  std::vector<double> lambda_seq;
  std::vector<double> c_estimates;  // lambda u_lambda(x_ref)
  std::vector<double> c_mean;       // lambda mean(u_lambda)
  std::vector<double> c_max;        // lambda max(u_lambda)
  std::vector<double> differences;  // c_estimates[k+1] - c_estimates[k]
  std::vector<double> osc_w;
  std::vector<double> residuals;    // sup |-I w_lambda + H(., Dw_lambda) + c_lambda|
  std::vector<std::size_t> steps;
  std::vector<GridField> fields;    // u_lambda per lambda
  std::size_t x_ref = 0;
  double c = 0.0;
  GridField w;
  double residual = 0.0;

  void write_csv(std::ostream& os) const;
};

std::vector<double> default_lambda_seq();

/// Warm-started discounted solves along a decreasing lambda sequence.
ErgodicResult vanishing_discount(const HamiltonianSpec& ham, const DiscreteOperator& op,
                                 const std::vector<double>& lambda_seq, const EvolutionConfig& config,
                                 std::size_t x_ref = 0);

/// sup |-I w + H_num(x, D^-w, D^+w) + c|.
double ergodic_residual(const GridField& w, double c, const HamiltonianSpec& ham, const DiscreteOperator& op);

struct LongTimeResult {
  double slope = 0.0;   // mean_x (u(T2) - u(T1)) / (T2 - T1)
  double spread = 0.0;  // max - min of the same quotient
  Trajectory trajectory;
};

LongTimeResult long_time_constant(const HamiltonianSpec& ham, const DiscreteOperator& op, const GridField& u0,
                                  double T1, double T2, EvolutionConfig config);

struct GapPoint {
  double t = 0.0;
  double gap = 0.0;
};

struct GapTable {
  std::vector<GapPoint> rows;
  double kappa_bar = 0.0;
};

/// gap(t) = max_x |u(x,t) - c t - (w(x) + kappa_bar)|, kappa_bar fitted at the
/// final snapshot as mean_x (u - c t - w).
GapTable large_time_gap(const Trajectory& trajectory, double c, const GridField& w);

}  // namespace nlhj
