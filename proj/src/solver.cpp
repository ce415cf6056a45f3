#include "nlhj/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nlhj {

void EvolutionConfig::validate() const {
  if (!(cfl_factor > 0.0 && cfl_factor <= 1.0)) throw std::invalid_argument("cfl_factor must lie in (0, 1]");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

void Trajectory::write_history_csv(std::ostream& os) const {
  os.precision(17);
  os << "t,sup_norm,inf_norm\n";
  for (std::size_t i = 0; i < step_times.size(); ++i) {
    os << step_times[i] << ',' << sup_history[i] << ',' << inf_history[i] << '\n';
  }
}

void Trajectory::write_field_csv(std::ostream& os, const GridField& field) {
  os.precision(17);
  const auto& g = field.grid;
  os << (g.dim() == 1 ? "x,u\n" : "x,y,u\n");
  for (std::size_t i = 0; i < field.size(); ++i) {
    Vec p = g.point(i);
    os << p[0] << ',';
    if (g.dim() == 2) os << p[1] << ',';
    os << field[i] << '\n';
  }
}

namespace {

// Neighbour tables and scratch buffers for one grid.
class Scheme {
 public:
  Scheme(const HamiltonianSpec& ham, const DiscreteOperator& op, double lambda)
      : ham_(ham), op_(op), lambda_(lambda), grid_(op.grid()) {
    if (!(ham.grid == grid_)) throw std::invalid_argument("hamiltonian and operator live on different grids");
    ham.validate_for_scheme();
    const std::size_t N = grid_.size();
    dim_ = grid_.dim();
    for (int k = 0; k < dim_; ++k) {
      int di = k == 0 ? 1 : 0;
      int dj = k == 1 ? 1 : 0;
      minus_[k].resize(N);
      plus_[k].resize(N);
      for (std::size_t x = 0; x < N; ++x) {
        minus_[k][x] = grid_.shifted(x, -di, -dj);
        plus_[k][x] = grid_.shifted(x, di, dj);
      }
    }
    Iu_.resize(N);
  }

  const PeriodicGrid& grid() const { return grid_; }

  // rhs = -lambda u + I u - H_num; qmax[x] = max(qmax[x], upwind magnitude).
  void rhs(const GridField& u, std::vector<double>& out, std::vector<double>& qmax) {
    op_.apply(u, Iu_);
    const double inv_h = 1.0 / grid_.h();
    const std::size_t N = u.size();
    for (std::size_t x = 0; x < N; ++x) {
      Vec pm{0.0, 0.0};
      Vec pp{0.0, 0.0};
      const double ux = u[x];
      for (int k = 0; k < dim_; ++k) {
        pm[static_cast<std::size_t>(k)] = (ux - u[minus_[k][x]]) * inv_h;
        pp[static_cast<std::size_t>(k)] = (u[plus_[k][x]] - ux) * inv_h;
      }
      qmax[x] = std::max(qmax[x], upwind_magnitude(pm, pp, dim_));
      out[x] = -lambda_ * ux + Iu_[x] - numerical_h(ham_, x, pm, pp);
    }
  }

  double dt(const std::vector<double>& qmax, double cfl) const {
    double L = 0.0;
    for (std::size_t x = 0; x < qmax.size(); ++x) L = std::max(L, flux_lipschitz(ham_, x, qmax[x]));
    return cfl / (lambda_ + op_.stiffness() + L / grid_.h());
  }

 private:
  const HamiltonianSpec& ham_;
  const DiscreteOperator& op_;
  double lambda_;
  PeriodicGrid grid_;
  int dim_ = 1;
  std::array<std::vector<std::size_t>, 2> minus_;
  std::array<std::vector<std::size_t>, 2> plus_;
  std::vector<double> Iu_;
};

void record(Trajectory& tr, double t, double dt, const GridField& u) {
  tr.step_times.push_back(t);
  tr.dt_history.push_back(dt);
  tr.sup_history.push_back(u.sup_norm());
  tr.inf_history.push_back(u.min());
}

}  // namespace

double monotone_dt(const std::vector<const GridField*>& fields, const HamiltonianSpec& ham,
                   const DiscreteOperator& op, double lambda, double cfl) {
  Scheme scheme(ham, op, lambda);
  std::vector<double> qmax(op.grid().size(), 0.0);
  std::vector<double> scratch(op.grid().size());
  for (const auto* f : fields) scheme.rhs(*f, scratch, qmax);
  return scheme.dt(qmax, cfl);
}

std::vector<Trajectory> evolve_coupled(const std::vector<GridField>& u0s, const HamiltonianSpec& ham,
                                       const DiscreteOperator& op, const EvolutionConfig& config,
                                       const StepObserver& observer) {
  config.validate();
  if (u0s.empty()) throw std::invalid_argument("evolve needs at least one initial field");
  for (const auto& u0 : u0s) {
    if (!(u0.grid == op.grid())) throw std::invalid_argument("initial field on a different grid");
    if (!u0.all_finite()) throw std::invalid_argument("initial field not finite");
  }
  Scheme scheme(ham, op, 0.0);
  const std::size_t N = op.grid().size();
  const std::size_t K = u0s.size();

  std::set<double> snap_set;
  for (double s : config.snapshot_times) {
    if (s < 0.0 || s > config.t_end) throw std::invalid_argument("snapshot time outside [0, t_end]");
    snap_set.insert(s);
  }
  snap_set.insert(config.t_end);
  std::vector<double> snaps(snap_set.begin(), snap_set.end());

  std::vector<GridField> u = u0s;
  std::vector<Trajectory> tr(K);
  std::vector<std::vector<double>> rhs(K, std::vector<double>(N));
  std::vector<double> qmax(N);
  std::size_t si = 0;
  double t = 0.0;
  for (std::size_t k = 0; k < K; ++k) record(tr[k], 0.0, 0.0, u[k]);
  if (snaps[0] == 0.0) {
    for (std::size_t k = 0; k < K; ++k) {
      tr[k].times.push_back(0.0);
      tr[k].fields.push_back(u[k]);
    }
    ++si;
  }

  std::size_t steps = 0;
  while (si < snaps.size()) {
    std::fill(qmax.begin(), qmax.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k) scheme.rhs(u[k], rhs[k], qmax);
    double dt = scheme.dt(qmax, config.cfl_factor);
    if (!(dt >= config.dt_floor)) {
      std::ostringstream msg;
      msg << "evolve: time step " << dt << " fell below the floor " << config.dt_floor << " at t = " << t;
      throw std::runtime_error(msg.str());
    }
    const double next = snaps[si];
    bool hit = false;
    if (t + dt >= next * (1.0 - 1e-15)) {
      dt = next - t;
      hit = true;
    }
    for (std::size_t k = 0; k < K; ++k) {
      auto& v = u[k].values;
      const auto& r = rhs[k];
      for (std::size_t x = 0; x < N; ++x) v[x] += dt * r[x];
      if (!u[k].all_finite()) {
        std::ostringstream msg;
        msg << "evolve: non-finite values at t = " << t;
        throw std::runtime_error(msg.str());
      }
    }
    t = hit ? next : t + dt;
    for (std::size_t k = 0; k < K; ++k) record(tr[k], t, dt, u[k]);
    if (observer) observer(t, u);
    if (hit) {
      for (std::size_t k = 0; k < K; ++k) {
        tr[k].times.push_back(t);
        tr[k].fields.push_back(u[k]);
      }
      ++si;
    }
    if (++steps >= config.max_steps && si < snaps.size()) {
      throw std::runtime_error("evolve: max_steps reached before t_end");
    }
  }
  return tr;
}

Trajectory evolve(const GridField& u0, const HamiltonianSpec& ham, const DiscreteOperator& op,
                  const EvolutionConfig& config, const StepObserver& observer) {
  return std::move(evolve_coupled({u0}, ham, op, config, observer).front());
}

GridField discrete_residual(const GridField& u, double lambda, const HamiltonianSpec& ham,
                            const DiscreteOperator& op) {
  Scheme scheme(ham, op, lambda);
  std::vector<double> r(u.size());
  std::vector<double> q(u.size(), 0.0);
  scheme.rhs(u, r, q);
  GridField out(u.grid);
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = -r[i];
  return out;
}

DiscountedResult solve_discounted(double lambda, const HamiltonianSpec& ham, const DiscreteOperator& op,
                                  const EvolutionConfig& config, const std::optional<GridField>& initial) {
  if (!(lambda > 0.0)) throw std::invalid_argument("discount lambda must be positive");
  if (!(config.residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  Scheme scheme(ham, op, lambda);
  const std::size_t N = op.grid().size();
  DiscountedResult res;
  res.u = initial ? *initial : GridField(op.grid());
  if (!(res.u.grid == op.grid())) throw std::invalid_argument("initial guess on a different grid");
  std::vector<double> r(N);
  std::vector<double> qmax(N);
  for (;;) {
    std::fill(qmax.begin(), qmax.end(), 0.0);
    scheme.rhs(res.u, r, qmax);
    double sup = 0.0;
    for (double v : r) sup = std::max(sup, std::abs(v));
    if (!std::isfinite(sup)) {
      std::ostringstream msg;
      msg << "solve_discounted(lambda = " << lambda << "): non-finite residual";
      throw std::runtime_error(msg.str());
    }
    res.residual = sup;
    if (sup < config.residual_tol) break;
    if (res.steps >= config.max_steps) {
      std::ostringstream msg;
      msg << "solve_discounted(lambda = " << lambda << "): no convergence after " << res.steps
          << " steps, residual " << sup;
      throw std::runtime_error(msg.str());
    }
    double dt = scheme.dt(qmax, config.cfl_factor);
    for (std::size_t x = 0; x < N; ++x) res.u[x] += dt * r[x];
    ++res.steps;
  }
  // A residual of size eps moves the fixed point by at most eps / lambda.
  double bound = ham.H0() / lambda + config.residual_tol / lambda;
  if (res.u.sup_norm() > bound) {
    std::ostringstream msg;
    msg << "solve_discounted(lambda = " << lambda << "): |u|_inf = " << res.u.sup_norm()
        << " exceeds H0/lambda = " << ham.H0() / lambda;
    throw std::logic_error(msg.str());
  }
  return res;
}

ComparisonReport comparison_harness(const std::vector<std::pair<GridField, GridField>>& pairs,
                                    const HamiltonianSpec& ham, const DiscreteOperator& op,
                                    const EvolutionConfig& config) {
  ComparisonReport rep;
  auto kappa = [](const GridField& a, const GridField& b) {
    double k = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) k = std::max(k, a[i] - b[i]);
    return k;
  };
  for (const auto& [u0, v0] : pairs) {
    ComparisonPairResult pr;
    pr.kappa_initial = kappa(u0, v0);
    double prev = pr.kappa_initial;
    pr.max_violation = std::max(0.0, prev);
    auto obs = [&](double, const std::vector<GridField>& f) {
      double k = kappa(f[0], f[1]);
      pr.kappa_increase = std::max(pr.kappa_increase, k - prev);
      pr.max_violation = std::max(pr.max_violation, k);
      prev = k;
      ++pr.steps;
    };
    evolve_coupled({u0, v0}, ham, op, config, obs);
    pr.kappa_final = prev;
    rep.max_violation = std::max(rep.max_violation, pr.max_violation);
    rep.max_kappa_increase = std::max(rep.max_kappa_increase, pr.kappa_increase);
    rep.pairs.push_back(pr);
  }
  return rep;
}

}  // namespace nlhj
