#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nlhj/analysis.hpp"
#include "nlhj/barrier.hpp"
#include "nlhj/ergodic.hpp"
#include "nlhj/nonlocal.hpp"
#include "nlhj/solver.hpp"

namespace nlhj::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const json& section(const json& cfg, const char* key) {
  static const json empty = json::object();
  auto it = cfg.find(key);
  if (it == cfg.end() || it->is_null()) return empty;
  if (!it->is_object()) throw ConfigError(std::string(key) + ": expected an object");
  return *it;
}

const json& experiment_params(const json& cfg, const std::string& name) {
  return section(section(cfg, "experiment"), name.c_str());
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

double threshold(const json& cfg, const char* key, double fallback) {
  return get_or<double>(section(cfg, "thresholds"), key, fallback);
}

std::uint64_t seed_of(const json& cfg) { return get_or<std::uint64_t>(cfg, "seed", 0); }

Check make_check(std::string criterion, std::string name, double value, double thr, std::string cmp) {
  bool ok = false;
  if (cmp == "<=") ok = value <= thr;
  else if (cmp == ">=") ok = value >= thr;
  else if (cmp == "==") ok = value == thr;
  if (!std::isfinite(value)) ok = false;
  return {std::move(criterion), std::move(name), value, thr, std::move(cmp), ok};
}

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  os.precision(17);
  return os;
}

std::vector<double> lambda_seq_of(const json& params) {
  auto seq = get_or<std::vector<double>>(params, "lambda_seq", default_lambda_seq());
  if (seq.empty()) throw ConfigError("lambda_seq: empty");
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (!(seq[k] > 0.0)) throw ConfigError("lambda_seq: values must be positive");
    if (k > 0 && !(seq[k] < seq[k - 1])) throw ConfigError("lambda_seq: must be strictly decreasing");
  }
  return seq;
}

EvolutionConfig evolution_of(const json& params) {
  EvolutionConfig c;
  c.cfl_factor = get_or(params, "cfl", c.cfl_factor);
  c.residual_tol = get_or(params, "residual_tol", c.residual_tol);
  c.max_steps = get_or<std::size_t>(params, "max_steps", c.max_steps);
  return c;
}

std::unique_ptr<DiscreteOperator> operator_of(const json& cfg, const PeriodicGrid& grid,
                                              const QuadratureMeasure& q) {
  if (cfg.contains("jump") && !cfg["jump"].is_null()) {
    auto jump = parse_jump(cfg, grid);
    if (jump.kind() != JumpFunction::Kind::identity) return make_levy_ito_operator(q, jump, grid);
  }
  return make_convolution_operator(q, grid);
}

// true when H(x, p) = b|p|^m - f0 with f0 constant: the exact-solution branch.
std::optional<double> constant_rhs(const HamiltonianSpec& H) {
  if (H.a1 || H.a2) return std::nullopt;
  if (H.f.max() != H.f.min()) return std::nullopt;
  return H.f[0];
}

double bound_excess(const Trajectory& tr, double H0, double u0_norm) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.step_times.size(); ++k) {
    worst = std::max(worst, tr.sup_history[k] - (H0 * tr.step_times[k] + u0_norm));
  }
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    worst = std::max(worst, tr.fields[k].sup_norm() - (H0 * tr.times[k] + u0_norm));
  }
  return worst;
}

double discounted_bound_excess(const ErgodicResult& er, double H0) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < er.lambda_seq.size(); ++k) {
    worst = std::max(worst, er.fields[k].sup_norm() - H0 / er.lambda_seq[k]);
  }
  return worst;
}

json to_json(const std::vector<double>& v) { return json(v); }

// ---------------------------------------------------------------- experiments

Summary operator_oracle(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  const auto grid = parse_grid(cfg);
  if (grid.dim() != 1) throw ConfigError("operator-oracle: the spectral oracle is 1D only");
  const json& p = experiment_params(cfg, "operator-oracle");
  const auto sigmas = get_or<std::vector<double>>(p, "sigmas", {0.5, 1.0, 1.5});
  const auto modes = get_or<std::vector<int>>(p, "modes", {1, 2, 3, 4});
  const json& mcfg = section(cfg, "measure");
  const bool exact = get_or(mcfg, "exact_constant", true);

  auto t0 = std::chrono::steady_clock::now();
  auto csv = open_csv(out, "operator_oracle.csv");
  csv << "sigma,k,rel_error\n";
  double worst = 0.0;
  for (double sigma : sigmas) {
    const auto q = discretize(fractional_measure(sigma, exact, 1), grid);
    const auto st = make_stencil(q, grid);
    for (int k : modes) {
      auto u = sample(grid, [k](const Vec& x) { return std::cos(kTwoPi * k * x[0]); });
      auto ref = spectral_fractional(u, sigma);
      double err = 0.0;
      for (std::size_t x = 0; x < grid.size(); ++x) err = std::max(err, std::abs(st.apply(u, x) - ref[x]));
      double rel = err / ref.sup_norm();
      worst = std::max(worst, rel);
      csv << sigma << ',' << k << ',' << rel << '\n';
    }
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.checks.push_back(make_check("C1", "max_rel_error", worst, threshold(cfg, "operator_rel_error", 0.02), "<="));
  s.checks.push_back(make_check("C1", "runtime_s", elapsed, threshold(cfg, "operator_runtime_s", 10.0), "<="));

  // Levy-Ito push-forward through j = g(x) z scales a fractional measure by g(x)^sigma.
  if (cfg.contains("jump") && get_or<std::string>(cfg["jump"], "kind", "identity") == "scaled") {
    const auto jump = parse_jump(cfg, grid);
    auto lcsv = open_csv(out, "levy_ito.csv");
    lcsv << "sigma,rel_error\n";
    double lworst = 0.0;
    auto u = sample(grid, [](const Vec& x) { return std::cos(kTwoPi * x[0]); });
    for (double sigma : sigmas) {
      const auto q = discretize(fractional_measure(sigma, exact, 1), grid);
      const auto base = make_stencil(q, grid);
      double err = 0.0, scale = 0.0;
      for (std::size_t x = 0; x < grid.size(); ++x) {
        double ref = std::pow(jump.factor()[x], sigma) * base.apply(u, x);
        err = std::max(err, std::abs(eval_levy_ito(u, x, q, jump) - ref));
        scale = std::max(scale, std::abs(ref));
      }
      lworst = std::max(lworst, err / scale);
      lcsv << sigma << ',' << err / scale << '\n';
    }
    s.checks.push_back(
        make_check("C9", "levy_ito_rel_error", lworst, threshold(cfg, "levy_ito_rel_error", 0.03), "<="));
  }
  details["sigmas"] = sigmas;
  details["exact_constant"] = exact;
  return s;
}

struct BarrierCase {
  double sigma = 0.5;
  double m = 2.0;
  double theta = 0.0;
};

double gamma_for(const json& p, const BarrierCase& c) {
  auto it = p.find("gamma");
  if (it == p.end() || it->is_null() || (it->is_string() && *it == "boundary")) {
    return gamma0_boundary(c.sigma, c.m, c.theta);
  }
  if (it->is_string() && *it == "interior") return gamma0_interior(c.sigma, c.m, c.theta);
  if (it->is_number()) return it->get<double>();
  throw ConfigError("barrier.gamma: expected \"boundary\", \"interior\" or a number");
}

BarrierMode mode_of(const std::string& s) {
  if (s == "full") return BarrierMode::full;
  if (s == "censored") return BarrierMode::censored;
  if (s == "levy_ito") return BarrierMode::levy_ito;
  throw ConfigError("barrier.mode: unknown mode '" + s + "'");
}

Summary barrier(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  const auto grid = parse_grid(cfg);
  const auto H = parse_hamiltonian(cfg, grid);
  const json& p = experiment_params(cfg, "barrier");
  const auto mode = mode_of(get_or<std::string>(p, "mode", "full"));
  const std::string crit = mode == BarrierMode::levy_ito ? "C9" : "C2";

  std::vector<BarrierCase> cases;
  if (p.contains("cases")) {
    for (const auto& c : p["cases"]) {
      cases.push_back({get_or(c, "sigma", 0.5), get_or(c, "m", 2.0), get_or(c, "theta", 0.0)});
    }
  } else {
    cases.push_back({parse_measure_spec(cfg, grid.dim()).sigma, H.m, H.theta});
  }
  if (cases.empty()) throw ConfigError("barrier.cases: empty");

  BarrierSetup base;
  base.grid = grid;
  base.mode = mode;
  if (mode == BarrierMode::levy_ito) base.jump = parse_jump(cfg, grid);
  auto x0 = get_or<std::vector<double>>(p, "x0", {0.5, 0.5});
  if (x0.size() != 2) throw ConfigError("barrier.x0: expected two coordinates");
  base.params.x0 = {x0[0], x0[1]};
  base.params.r = get_or(p, "r", 0.25);
  base.params.C2 = get_or(p, "C2", 1.0);
  base.A = get_or(p, "A", H.A);
  base.b0 = H.b0();
  const int max_doublings = get_or(p, "max_doublings", 60);
  const double a_scale = get_or(p, "a_scaling", 16.0);
  const bool forced = p.contains("C1") && !p["C1"].is_null();
  const double forced_C1 = forced ? get_or(p, "C1", 0.0) : 0.0;

  auto table = open_csv(out, "barrier.csv");
  table << "case,sigma,m,theta,gamma,C1,doublings,min_margin,C1_scaled,ratio,ratio_limit\n";
  int worst_doublings = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  json rows = json::array();
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    auto spec = parse_measure_spec(cfg, grid.dim());
    spec.sigma = c.sigma;
    if (spec.kind != MeasureKind::finite) spec.orders = {c.sigma, c.sigma};
    if (spec.kind == MeasureKind::fractional && get_or(section(cfg, "measure"), "exact_constant", false)) {
      spec.constant = fractional_constant(grid.dim(), c.sigma);
    }
    BarrierSetup setup = base;
    setup.measure = discretize(spec, grid);
    setup.m = c.m;
    setup.theta = c.theta;
    setup.params.gamma = gamma_for(p, c);
    if (setup.params.gamma > gamma0_interior(c.sigma, c.m, c.theta) + 1e-12) {
      throw ConfigError("barrier.gamma exceeds the admissible exponent");
    }
    BarrierProblem problem(setup);

    BarrierReport rep;
    int doublings = 0;
    double C1 = 0.0, scaled = std::nan(""), ratio = std::nan(""), limit = 2.0 * std::pow(a_scale, 1.0 / c.m);
    if (forced) {
      rep = problem.verify(forced_C1);
      C1 = forced_C1;
    } else {
      auto sel = problem.select_C1(max_doublings);
      rep = sel.report;
      C1 = sel.C1;
      doublings = sel.doublings;
      if (a_scale > 0.0) {
        BarrierSetup big = setup;
        big.A *= a_scale;
        scaled = BarrierProblem(big).select_C1(max_doublings).C1;
        ratio = scaled / C1;
        worst_ratio = std::max(worst_ratio, ratio / limit);
      }
    }
    worst_doublings = std::max(worst_doublings, doublings);
    worst_margin = std::min(worst_margin, rep.min_margin);
    table << k << ',' << c.sigma << ',' << c.m << ',' << c.theta << ',' << problem.gamma() << ',' << C1 << ','
          << doublings << ',' << rep.min_margin << ',' << scaled << ',' << ratio << ',' << limit << '\n';
    auto rcsv = open_csv(out, "barrier_case" + std::to_string(k) + ".csv");
    rep.write_csv(rcsv, grid.dim());
    rows.push_back({{"sigma", c.sigma}, {"m", c.m}, {"theta", c.theta}, {"gamma", problem.gamma()}, {"C1", C1},
                    {"doublings", doublings}, {"min_margin", rep.min_margin}, {"test_points", rep.rows.size()}});
  }
  if (!forced) {
    s.checks.push_back(make_check(crit, "max_doublings", worst_doublings, threshold(cfg, "barrier_doublings", 30),
                                  "<="));
  }
  s.checks.push_back(make_check(crit, "min_margin", worst_margin, 0.0, ">="));
  if (!forced && a_scale > 0.0) {
    s.checks.push_back(make_check(crit, "a_scaling_ratio_over_limit", worst_ratio, 1.0, "<="));
  }
  details["cases"] = rows;
  return s;
}

Summary regularity(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  const auto grid = parse_grid(cfg);
  const auto H = parse_hamiltonian(cfg, grid);
  const auto q = parse_measure(cfg, grid);
  const auto op = operator_of(cfg, grid, q);
  const json& p = experiment_params(cfg, "regularity");
  const auto er = vanishing_discount(H, *op, lambda_seq_of(p), evolution_of(p));

  auto [lo, hi] = default_fit_range(grid);
  lo = get_or(p, "fit_lo", lo);
  hi = get_or(p, "fit_hi", hi);
  const auto radii = default_radii(grid);
  auto ocsv = open_csv(out, "omega.csv");
  ocsv << "lambda,r,omega\n";
  auto fcsv = open_csv(out, "regularity.csv");
  fcsv << "lambda,gamma_est,seminorm_est,r2,osc_w\n";
  double g_min = std::numeric_limits<double>::infinity(), r2_min = g_min;
  std::vector<double> seminorms;
  json fits = json::array();
  for (std::size_t k = 0; k < er.lambda_seq.size(); ++k) {
    const auto table = modulus_of_continuity(er.fields[k], radii);
    for (const auto& pt : table) ocsv << er.lambda_seq[k] << ',' << pt.r << ',' << pt.omega << '\n';
    const auto fit = holder_fit(table, lo, hi);
    g_min = std::min(g_min, fit.gamma);
    r2_min = std::min(r2_min, fit.r2);
    seminorms.push_back(fit.seminorm);
    fcsv << er.lambda_seq[k] << ',' << fit.gamma << ',' << fit.seminorm << ',' << fit.r2 << ',' << er.osc_w[k]
         << '\n';
    fits.push_back({{"lambda", er.lambda_seq[k]}, {"gamma_est", fit.gamma}, {"seminorm_est", fit.seminorm},
                    {"r2", fit.r2}});
  }
  double mean = 0.0;
  for (double v : seminorms) mean += v / static_cast<double>(seminorms.size());
  double spread = 0.0;
  for (double v : seminorms) spread = std::max(spread, std::abs(v / mean - 1.0));
  const auto osc = oscillation_stability(er.lambda_seq, er.fields);

  const double g0 = gamma0_boundary(q.sigma, H.m, H.theta);
  const double slack = threshold(cfg, "gamma_slack", 0.1);
  s.checks.push_back(make_check("C5", "gamma_est_min", g_min, g0 - slack, ">="));
  s.checks.push_back(make_check("C5", "r2_min", r2_min, threshold(cfg, "r2_min", 0.95), ">="));
  s.checks.push_back(
      make_check("C5", "seminorm_variation", spread, threshold(cfg, "seminorm_variation", 0.2), "<="));
  s.checks.push_back(make_check("C5", "osc_ratio", osc.ratio, threshold(cfg, "osc_ratio", 1.25), "<="));
  details["gamma0"] = g0;
  details["fits"] = fits;
  details["osc_w"] = to_json(er.osc_w);
  return s;
}

Summary ergodic(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  const auto grid = parse_grid(cfg);
  const auto H = parse_hamiltonian(cfg, grid);
  const auto q = parse_measure(cfg, grid);
  const auto op = operator_of(cfg, grid, q);
  const json& p = experiment_params(cfg, "ergodic");
  const auto ecfg = evolution_of(p);
  const auto er = vanishing_discount(H, *op, lambda_seq_of(p), ecfg);
  {
    auto csv = open_csv(out, "ergodic.csv");
    er.write_csv(csv);
    auto wcsv = open_csv(out, "corrector.csv");
    Trajectory::write_field_csv(wcsv, er.w);
  }

  const double T1 = get_or(p, "T1", 10.0), T2 = get_or(p, "T2", 20.0);
  const GridField u0 = p.contains("u0") ? parse_field(p["u0"], grid, "u0") : GridField(grid, 0.0);
  const auto lt = long_time_constant(H, *op, u0, T1, T2, ecfg);
  {
    auto csv = open_csv(out, "long_time.csv");
    lt.trajectory.write_history_csv(csv);
  }

  const double tol_c = threshold(cfg, "slope_vs_c", 1e-2);
  s.checks.push_back(make_check("C6", "slope_minus_c", std::abs(lt.slope - er.c), tol_c, "<="));
  int violations = 0;
  for (std::size_t k = 1; k < er.differences.size(); ++k) {
    double a = std::abs(er.differences[k - 1]), b = std::abs(er.differences[k]);
    if (b >= a && b > 1e-12) ++violations;
  }
  s.checks.push_back(make_check("C6", "difference_increases", violations, 0, "=="));

  const double bound_tol = threshold(cfg, "bound_tol", 1e-6);
  s.checks.push_back(make_check("C3", "discounted_bound_excess", discounted_bound_excess(er, H.H0()), bound_tol, "<="));
  s.checks.push_back(
      make_check("C3", "evolution_bound_excess", bound_excess(lt.trajectory, H.H0(), u0.sup_norm()), bound_tol, "<="));

  if (auto f0 = constant_rhs(H)) {
    const double exact_tol = threshold(cfg, "exact_tol", 1e-8);
    s.checks.push_back(make_check("C6", "c_minus_f0", std::abs(er.c - *f0), exact_tol, "<="));
    double du = 0.0;
    for (std::size_t k = 0; k < er.lambda_seq.size(); ++k) {
      for (double v : er.fields[k].values) du = std::max(du, std::abs(v - *f0 / er.lambda_seq[k]));
    }
    s.checks.push_back(make_check("C3", "u_lambda_minus_f0_over_lambda", du, exact_tol, "<="));
    double dv = 0.0;
    for (std::size_t k = 0; k < lt.trajectory.times.size(); ++k) {
      const double t = lt.trajectory.times[k];
      const auto& u = lt.trajectory.fields[k];
      for (std::size_t i = 0; i < u.size(); ++i) dv = std::max(dv, std::abs(u[i] - (u0[i] + *f0 * t)));
    }
    s.checks.push_back(make_check("C3", "evolve_minus_f0_t", dv, exact_tol, "<="));
  }
  details["c"] = er.c;
  details["slope"] = lt.slope;
  details["slope_spread"] = lt.spread;
  details["c_estimates"] = to_json(er.c_estimates);
  details["ergodic_residual"] = er.residual;
  return s;
}

Summary ltb(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  auto t0 = std::chrono::steady_clock::now();
  const auto grid = parse_grid(cfg);
  const auto H = parse_hamiltonian(cfg, grid);
  const auto q = parse_measure(cfg, grid);
  const auto op = operator_of(cfg, grid, q);
  const json& p = experiment_params(cfg, "ltb");
  EvolutionConfig ecfg = evolution_of(p);
  const auto er = vanishing_discount(H, *op, lambda_seq_of(p), ecfg);

  const double T = get_or(p, "T", 40.0);
  const double every = get_or(p, "snapshot_every", 0.05);
  const double t_mono = get_or(p, "monotone_after", 2.0);
  if (!(T > 0.0) || !(every > 0.0)) throw ConfigError("ltb: T and snapshot_every must be positive");
  const GridField u0 = p.contains("u0") ? parse_field(p["u0"], grid, "u0") : GridField(grid, 0.0);
  ecfg.t_end = T;
  ecfg.snapshot_times.push_back(0.0);
  const auto count = static_cast<long>(std::floor(T / every + 1e-9));
  for (long k = 1; k <= count; ++k) ecfg.snapshot_times.push_back(static_cast<double>(k) * every);
  ecfg.snapshot_times.push_back(T / 4.0);
  std::sort(ecfg.snapshot_times.begin(), ecfg.snapshot_times.end());
  ecfg.snapshot_times.erase(std::unique(ecfg.snapshot_times.begin(), ecfg.snapshot_times.end()),
                            ecfg.snapshot_times.end());
  const auto tr = evolve(u0, H, *op, ecfg);
  const auto gap = large_time_gap(tr, er.c, er.w);

  auto csv = open_csv(out, "gap.csv");
  csv << "t,gap\n";
  for (const auto& r : gap.rows) csv << r.t << ',' << r.gap << '\n';
  auto hcsv = open_csv(out, "history.csv");
  tr.write_history_csv(hcsv);

  double g_quarter = std::nan(""), g_end = gap.rows.back().gap;
  for (const auto& r : gap.rows) {
    if (r.t == T / 4.0) g_quarter = r.gap;
  }
  // Largest per-step increase of the gap between consecutive snapshots after t_mono.
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < gap.rows.size(); ++k) {
    if (gap.rows[k - 1].t < t_mono) continue;
    auto first = std::upper_bound(tr.step_times.begin(), tr.step_times.end(), gap.rows[k - 1].t);
    auto last = std::upper_bound(tr.step_times.begin(), tr.step_times.end(), gap.rows[k].t);
    double steps = std::max<double>(1.0, static_cast<double>(last - first));
    worst = std::max(worst, (gap.rows[k].gap - gap.rows[k - 1].gap) / steps);
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  s.checks.push_back(make_check("C7", "gap_ratio", g_end / g_quarter, threshold(cfg, "gap_ratio", 0.1), "<="));
  s.checks.push_back(
      make_check("C7", "gap_increase_per_step", worst, threshold(cfg, "gap_increase_per_step", 1e-6), "<="));
  s.checks.push_back(make_check("C7", "runtime_s", elapsed, threshold(cfg, "ltb_runtime_s", 300.0), "<="));
  s.checks.push_back(make_check("C3", "evolution_bound_excess", bound_excess(tr, H.H0(), u0.sup_norm()),
                                threshold(cfg, "bound_tol", 1e-6), "<="));
  details["c"] = er.c;
  details["kappa_bar"] = gap.kappa_bar;
  details["gap_quarter"] = g_quarter;
  details["gap_end"] = g_end;
  details["steps"] = tr.step_times.size();
  return s;
}

Summary covering(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  const auto grid = parse_grid(cfg);
  const auto q = parse_measure(cfg, grid);
  const auto jump = cfg.contains("jump") ? parse_jump(cfg, grid) : JumpFunction::identity();
  const json& p = experiment_params(cfg, "covering");
  const int max_iter = get_or(p, "max_iter", 8);
  if (!p.contains("expect_n_star")) throw ConfigError("covering.expect_n_star: required (-1 for failure)");
  const int expect = p["expect_n_star"].get<int>();
  const auto res = covering_check(q, jump, grid, max_iter, seed_of(cfg));

  auto csv = open_csv(out, "covering.csv");
  csv << "iteration,reachable\n";
  for (std::size_t k = 0; k < res.history.size(); ++k) csv << k << ',' << res.history[k] << '\n';
  s.checks.push_back(make_check("C8", "n_star", res.covered ? res.n_star : -1, expect, "=="));
  details["covered"] = res.covered;
  details["grid_resolution_limited"] = res.grid_resolution_limited;
  details["tested_points"] = res.tested.size();
  return s;
}

GridField random_smooth(const PeriodicGrid& grid, int modes, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(modes) * 4);
  for (auto& v : a) v = N(rng);
  return sample(grid, [&](const Vec& x) {
    double v = 0.0;
    for (int k = 1; k <= modes; ++k) {
      const double* c = &a[static_cast<std::size_t>(k - 1) * 4];
      double amp = 1.0 / k;
      v += amp * (c[0] * std::cos(kTwoPi * k * x[0]) + c[1] * std::sin(kTwoPi * k * x[0]));
      if (grid.dim() == 2) v += amp * (c[2] * std::cos(kTwoPi * k * x[1]) + c[3] * std::sin(kTwoPi * k * x[1]));
    }
    return v;
  });
}

Summary comparison(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  const auto grid = parse_grid(cfg);
  const auto H = parse_hamiltonian(cfg, grid);
  const auto q = parse_measure(cfg, grid);
  const auto op = operator_of(cfg, grid, q);
  const json& p = experiment_params(cfg, "comparison");
  const int ordered = get_or(p, "pairs", 20);
  const int arbitrary = get_or(p, "arbitrary_pairs", 5);
  const int modes = get_or(p, "modes", 4);
  EvolutionConfig ecfg = evolution_of(p);
  ecfg.t_end = get_or(p, "T", 5.0);

  std::mt19937_64 rng(seed_of(cfg));
  std::vector<std::pair<GridField, GridField>> ord, arb;
  for (int k = 0; k < ordered; ++k) {
    auto u = random_smooth(grid, modes, rng);
    auto d = random_smooth(grid, modes, rng);
    const double lo = d.min();
    GridField v = u;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += d[i] - lo;
    ord.emplace_back(std::move(u), std::move(v));
  }
  for (int k = 0; k < arbitrary; ++k) {
    auto u = random_smooth(grid, modes, rng);
    auto v = random_smooth(grid, modes, rng);
    arb.emplace_back(std::move(u), std::move(v));
  }
  const auto r_ord = comparison_harness(ord, H, *op, ecfg);
  const auto r_arb = arb.empty() ? ComparisonReport{} : comparison_harness(arb, H, *op, ecfg);

  auto csv = open_csv(out, "comparison.csv");
  csv << "pair,kind,max_violation,kappa_initial,kappa_final,kappa_increase,steps\n";
  auto dump = [&](const ComparisonReport& r, const char* kind, std::size_t offset) {
    for (std::size_t k = 0; k < r.pairs.size(); ++k) {
      const auto& c = r.pairs[k];
      csv << offset + k << ',' << kind << ',' << c.max_violation << ',' << c.kappa_initial << ',' << c.kappa_final
          << ',' << c.kappa_increase << ',' << c.steps << '\n';
    }
  };
  dump(r_ord, "ordered", 0);
  dump(r_arb, "arbitrary", r_ord.pairs.size());

  const double tol = threshold(cfg, "comparison_tol", 1e-8);
  s.checks.push_back(make_check("C4", "ordered_max_violation", r_ord.max_violation, tol, "<="));
  s.checks.push_back(make_check("C4", "kappa_increase_per_step",
                                std::max(r_ord.max_kappa_increase, r_arb.max_kappa_increase), tol, "<="));
  details["pairs"] = ordered;
  details["arbitrary_pairs"] = arbitrary;
  return s;
}

Summary structure(const json& cfg, const fs::path& out, json& details) {
  Summary s;
  const auto grid = parse_grid(cfg);
  auto H = parse_hamiltonian(cfg, grid);
  const json& p = experiment_params(cfg, "structure");
  const auto samples = get_or<std::size_t>(p, "samples", 10000);
  const auto ms = get_or<std::vector<double>>(p, "m_values", {H.m});

  auto csv = open_csv(out, "structure.csv");
  csv << "m,zeta1_slope,zeta2_slope,h1_worst_margin,A_used,A_fit,h2_worst_margin,monotonicity_violations,"
         "consistency_exact\n";
  double h2 = -std::numeric_limits<double>::infinity();
  double viol = 0.0, inconsistent = 0.0;
  json rows = json::array();
  for (double m : ms) {
    H.m = m;
    H.validate();
    const auto rep = check_structure(H, samples, seed_of(cfg));
    h2 = std::max(h2, rep.h2_worst_margin);
    viol += static_cast<double>(rep.monotonicity_violations);
    if (!rep.consistency_exact) inconsistent += 1.0;
    csv << m << ',' << rep.zeta1_slope << ',' << rep.zeta2_slope << ',' << rep.h1_worst_margin << ','
        << rep.A_used << ',' << rep.A_fit << ',' << rep.h2_worst_margin << ',' << rep.monotonicity_violations
        << ',' << (rep.consistency_exact ? 1 : 0) << '\n';
    rows.push_back({{"m", m}, {"zeta1_slope", rep.zeta1_slope}, {"zeta2_slope", rep.zeta2_slope},
                    {"A_fit", rep.A_fit}});
  }
  s.checks.push_back(make_check("C10", "h2_worst_margin", h2, 0.0, "<="));
  s.checks.push_back(make_check("C10", "monotonicity_violations", viol, 0.0, "=="));
  s.checks.push_back(make_check("C10", "consistency_failures", inconsistent, 0.0, "=="));
  details["fits"] = rows;
  return s;
}

using Runner = Summary (*)(const json&, const fs::path&, json&);

Runner find_runner(const std::string& name) {
  if (name == "operator-oracle") return operator_oracle;
  if (name == "barrier") return barrier;
  if (name == "regularity") return regularity;
  if (name == "ergodic") return ergodic;
  if (name == "ltb") return ltb;
  if (name == "covering") return covering;
  if (name == "comparison") return comparison;
  if (name == "structure") return structure;
  return nullptr;
}

}  // namespace

bool Summary::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json Summary::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["pass"] = pass();
  j["runtime_s"] = runtime_s;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"criterion", c.criterion}, {"check", c.name}, {"value", c.value},
                           {"threshold", c.threshold}, {"comparison", c.comparison}, {"pass", c.pass}});
  }
  return j;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"operator-oracle", "barrier",  "regularity", "ergodic",
                                              "ltb",             "covering", "comparison", "structure"};
  return names;
}

json load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path.string());
  try {
    json cfg = json::parse(is);
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
    static const std::vector<std::string> known{"grid", "measure", "jump", "hamiltonian",
                                                "experiment", "thresholds", "seed", "description"};
    for (const auto& [key, _] : cfg.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown key '" + key + "'");
    }
    return cfg;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

PeriodicGrid parse_grid(const json& cfg) {
  const json& g = section(cfg, "grid");
  const int dim = get_or(g, "dim", 1);
  const int n = get_or(g, "n", 256);
  if (dim != 1 && dim != 2) throw ConfigError("grid.dim: must be 1 or 2");
  if (n < 8) throw ConfigError("grid.n: must be at least 8");
  return make_grid(dim, n);
}

LevyMeasureSpec parse_measure_spec(const json& cfg, int dim) {
  const json& m = section(cfg, "measure");
  const auto kind = get_or<std::string>(m, "kind", "fractional");
  const double sigma = get_or(m, "sigma", 1.0);
  const bool exact = get_or(m, "exact_constant", false);
  LevyMeasureSpec spec;
  try {
    if (kind == "fractional") {
      spec = fractional_measure(sigma, exact, dim);
      if (!exact && m.contains("constant")) spec.constant = m["constant"].get<double>();
    } else if (kind == "halfspace_fractional") {
      spec = halfspace_measure(sigma, get_or(m, "axis", 0), get_or(m, "constant", 1.0));
    } else if (kind == "crossed") {
      auto orders = get_or<std::vector<double>>(m, "orders", {sigma, sigma});
      if (orders.size() != 2) throw ConfigError("measure.orders: expected two exponents");
      spec = crossed_measure(orders[0], orders[1], get_or(m, "constant", 1.0));
      spec.sigma = sigma;
    } else if (kind == "finite") {
      std::vector<FiniteAtom> atoms;
      for (const auto& a : m.at("atoms")) {
        auto off = a.at("offset").get<std::vector<double>>();
        if (off.empty() || off.size() > 2) throw ConfigError("measure.atoms: offset needs 1 or 2 coordinates");
        atoms.push_back({{off[0], off.size() > 1 ? off[1] : 0.0}, a.at("mass").get<double>()});
      }
      spec = finite_measure(std::move(atoms), sigma);
    } else {
      throw ConfigError("measure.kind: unknown kind '" + kind + "'");
    }
    spec.validate(dim);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
  return spec;
}

QuadratureMeasure parse_measure(const json& cfg, const PeriodicGrid& grid) {
  const json& m = section(cfg, "measure");
  std::optional<double> r_cut;
  if (m.contains("r_cut") && !m["r_cut"].is_null()) r_cut = m["r_cut"].get<double>();
  return discretize(parse_measure_spec(cfg, grid.dim()), grid, r_cut, get_or(m, "r_max", 4.0));
}

GridField parse_field(const json& j, const PeriodicGrid& grid, const std::string& what) {
  if (j.is_number()) return GridField(grid, j.get<double>());
  if (!j.is_object()) throw ConfigError(what + ": expected a number or a profile object");
  const auto profile = get_or<std::string>(j, "profile", "constant");
  const double amp = get_or(j, "amplitude", 1.0);
  const double offset = get_or(j, "offset", 0.0);
  const int mode = get_or(j, "mode", 1);
  const int axis = get_or(j, "axis", 0);
  if (axis < 0 || axis >= grid.dim()) throw ConfigError(what + ".axis: outside the grid dimension");
  if (profile == "constant") return GridField(grid, get_or(j, "value", offset));
  if (profile == "cosine") {
    return sample(grid, [=](const Vec& x) { return offset + amp * std::cos(kTwoPi * mode * x[axis]); });
  }
  if (profile == "sine") {
    return sample(grid, [=](const Vec& x) { return offset + amp * std::sin(kTwoPi * mode * x[axis]); });
  }
  throw ConfigError(what + ".profile: unknown profile '" + profile + "'");
}

JumpFunction parse_jump(const json& cfg, const PeriodicGrid& grid) {
  const json& j = section(cfg, "jump");
  const auto kind = get_or<std::string>(j, "kind", "identity");
  if (kind == "identity") return JumpFunction::identity();
  if (kind == "scaled") {
    if (!j.contains("g")) throw ConfigError("jump.g: required for scaled jumps");
    auto g = parse_field(j["g"], grid, "jump.g");
    if (!(g.min() > 0.0)) throw ConfigError("jump.g: must be positive");
    return JumpFunction::scaled(std::move(g));
  }
  throw ConfigError("jump.kind: unknown kind '" + kind + "'");
}

HamiltonianSpec parse_hamiltonian(const json& cfg, const PeriodicGrid& grid) {
  const json& h = section(cfg, "hamiltonian");
  HamiltonianSpec H;
  H.grid = grid;
  H.b = h.contains("b") ? parse_field(h["b"], grid, "hamiltonian.b") : GridField(grid, 1.0);
  H.m = get_or(h, "m", 2.0);
  H.f = h.contains("f") ? parse_field(h["f"], grid, "hamiltonian.f") : GridField(grid, 0.0);
  if (h.contains("a1") && !h["a1"].is_null()) {
    H.a1 = parse_field(h["a1"], grid, "hamiltonian.a1");
    H.l = get_or(h, "l", 1.0);
  }
  if (h.contains("a2") && !h["a2"].is_null()) {
    const auto& a = h["a2"];
    if (!a.is_array() || a.size() != static_cast<std::size_t>(grid.dim())) {
      throw ConfigError("hamiltonian.a2: expected one field per dimension");
    }
    std::array<GridField, 2> comps{GridField(grid, 0.0), GridField(grid, 0.0)};
    for (int k = 0; k < grid.dim(); ++k) comps[k] = parse_field(a[k], grid, "hamiltonian.a2");
    H.a2 = comps;
  }
  H.theta = get_or(h, "theta", 0.0);
  H.A = get_or(h, "A", 1.0);
  try {
    H.validate();
    H.validate_for_scheme();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("hamiltonian: ") + e.what());
  }
  return H;
}

Summary run_experiment(const json& cfg, const std::string& experiment, const fs::path& out) {
  Runner fn = find_runner(experiment);
  if (!fn) throw ConfigError("unknown experiment '" + experiment + "'");
  auto report = validate_config(cfg);
  if (!report.ok()) throw ConfigError(report.errors.front());
  fs::create_directories(out);
  auto t0 = std::chrono::steady_clock::now();
  json details = json::object();
  Summary s = fn(cfg, out, details);
  s.experiment = experiment;
  s.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json j = s.to_json();
  j["details"] = details;
  std::ofstream os(out / "summary.json");
  os << std::setw(2) << j << '\n';
  return s;
}

int run(const fs::path& config, const std::string& experiment, const fs::path& out, std::ostream& log) {
  try {
    const json cfg = load_config(config);
    const Summary s = run_experiment(cfg, experiment, out);
    for (const auto& c : s.checks) {
      log << (c.pass ? "[PASS] " : "[FAIL] ") << c.criterion << ' ' << c.name << " = " << c.value << ' '
          << c.comparison << ' ' << c.threshold << '\n';
    }
    return s.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
}

ValidationReport validate_config(const json& cfg) {
  ValidationReport rep;
  auto guard = [&](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      rep.errors.push_back(std::string(field) + ": " + e.what());
    }
  };
  PeriodicGrid grid;
  guard("grid", [&] { grid = parse_grid(cfg); });
  if (!rep.ok()) return rep;

  double sigma = 1.0;
  guard("measure", [&] { sigma = parse_measure_spec(cfg, grid.dim()).sigma; });
  std::optional<HamiltonianSpec> H;
  guard("hamiltonian", [&] { H = parse_hamiltonian(cfg, grid); });
  guard("jump", [&] {
    if (cfg.contains("jump")) parse_jump(cfg, grid);
  });
  if (H) {
    if (!(H->m > std::max(1.0, sigma))) {
      rep.errors.push_back("hamiltonian.m: superlinear experiments need m > max(1, sigma)");
    }
    if (!(H->theta >= 0.0 && H->theta < H->m)) rep.errors.push_back("hamiltonian.theta: must lie in [0, m)");
    const double gb = gamma0_boundary(sigma, H->m, H->theta);
    const double gi = gamma0_interior(sigma, H->m, H->theta);
    rep.derived = {{"sigma", sigma}, {"gamma0_boundary", gb}, {"gamma0_interior", gi}, {"H0", H->H0()}};
    const json& bp = experiment_params(cfg, "barrier");
    if (bp.contains("gamma") && bp["gamma"].is_number() && bp["gamma"].get<double>() > gi + 1e-12) {
      rep.errors.push_back("experiment.barrier.gamma: exceeds gamma0");
    }
  }
  for (const char* name : {"regularity", "ergodic", "ltb"}) {
    const json& p = experiment_params(cfg, name);
    guard(name, [&] { lambda_seq_of(p); });
  }
  return rep;
}

int validate(const fs::path& config, std::ostream& log) {
  try {
    const json cfg = load_config(config);
    const auto rep = validate_config(cfg);
    json j = {{"valid", rep.ok()}, {"errors", rep.errors}, {"derived", rep.derived}};
    log << std::setw(2) << j << '\n';
    return rep.ok() ? 0 : 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace nlhj::cli
