#include "nlhj/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlhj/analysis.hpp"

namespace nlhj {

void ErgodicResult::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "lambda,c_estimate,c_mean_diag,osc_w\n";
  for (std::size_t k = 0; k < lambda_seq.size(); ++k) {
    os << lambda_seq[k] << ',' << c_estimates[k] << ',' << c_mean[k] << ',' << osc_w[k] << '\n';
  }
}

std::vector<double> default_lambda_seq() { return {0.1, 0.05, 0.025, 0.0125, 0.00625}; }

double ergodic_residual(const GridField& w, double c, const HamiltonianSpec& ham, const DiscreteOperator& op) {
  GridField r = discrete_residual(w, 0.0, ham, op);
  double sup = 0.0;
  for (double v : r.values) sup = std::max(sup, std::abs(v + c));
  return sup;
}

ErgodicResult vanishing_discount(const HamiltonianSpec& ham, const DiscreteOperator& op,
                                 const std::vector<double>& lambda_seq, const EvolutionConfig& config,
                                 std::size_t x_ref) {
  if (lambda_seq.empty()) throw std::invalid_argument("lambda sequence is empty");
  for (std::size_t k = 0; k < lambda_seq.size(); ++k) {
    if (!(lambda_seq[k] > 0.0)) throw std::invalid_argument("lambda values must be positive");
    if (k > 0 && !(lambda_seq[k] < lambda_seq[k - 1])) throw std::invalid_argument("lambda sequence must decrease");
  }
  if (x_ref >= op.grid().size()) throw std::invalid_argument("x_ref outside the grid");

  ErgodicResult res;
  res.lambda_seq = lambda_seq;
  res.x_ref = x_ref;
  std::optional<GridField> guess;
  double prev_lambda = 0.0;
  for (double lambda : lambda_seq) {
    if (guess) {
      // u_lambda ~ c/lambda + w: move the previous solution's constant level.
      double c_prev = prev_lambda * guess->mean();
      double lift = c_prev * (1.0 / lambda - 1.0 / prev_lambda);
      for (double& v : guess->values) v += lift;
    }
    DiscountedResult sol;
    try {
      sol = solve_discounted(lambda, ham, op, config, guess);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "vanishing_discount at lambda = " << lambda << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
    const GridField& u = sol.u;
    double c = lambda * u[x_ref];
    res.c_estimates.push_back(c);
    res.c_mean.push_back(lambda * u.mean());
    res.c_max.push_back(lambda * u.max());
    GridField w = u;
    const double ref = u[x_ref];
    for (double& v : w.values) v -= ref;
    res.osc_w.push_back(oscillation(w));
    res.residuals.push_back(ergodic_residual(w, c, ham, op));
    res.steps.push_back(sol.steps);
    res.fields.push_back(u);
    guess = u;
    prev_lambda = lambda;
  }
  for (std::size_t k = 1; k < res.c_estimates.size(); ++k) {
    res.differences.push_back(res.c_estimates[k] - res.c_estimates[k - 1]);
  }
  res.c = res.c_estimates.back();
  res.w = res.fields.back();
  const double ref = res.w[x_ref];
  for (double& v : res.w.values) v -= ref;
  res.w[x_ref] = 0.0;
  res.residual = res.residuals.back();
  return res;
}

LongTimeResult long_time_constant(const HamiltonianSpec& ham, const DiscreteOperator& op, const GridField& u0,
                                  double T1, double T2, EvolutionConfig config) {
  if (!(T1 > 0.0 && T2 > T1)) throw std::invalid_argument("long_time_constant requires 0 < T1 < T2");
  config.t_end = T2;
  config.snapshot_times.push_back(T1);
  LongTimeResult res;
  res.trajectory = evolve(u0, ham, op, config);
  const auto& tr = res.trajectory;
  auto at = [&](double t) -> const GridField& {
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      if (tr.times[k] == t) return tr.fields[k];
    }
    throw std::logic_error("snapshot missing");
  };
  const GridField& a = at(T1);
  const GridField& b = at(T2);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double q = (b[i] - a[i]) / (T2 - T1);
    sum += q;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  res.slope = sum / static_cast<double>(a.size());
  res.spread = hi - lo;
  return res;
}

GapTable large_time_gap(const Trajectory& trajectory, double c, const GridField& w) {
  GapTable table;
  if (trajectory.times.empty()) return table;
  const GridField& last = trajectory.fields.back();
  const double T = trajectory.times.back();
  double mean = 0.0;
  for (std::size_t i = 0; i < last.size(); ++i) mean += last[i] - c * T - w[i];
  table.kappa_bar = mean / static_cast<double>(last.size());
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const double t = trajectory.times[k];
    const GridField& u = trajectory.fields[k];
    double gap = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) gap = std::max(gap, std::abs(u[i] - c * t - (w[i] + table.kappa_bar)));
    table.rows.push_back({t, gap});
  }
  return table;
}

}  // namespace nlhj
