#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "nlhj/grid.hpp"
#include "nlhj/hamiltonian.hpp"
#include "nlhj/nonlocal.hpp"

namespace nlhj {

struct EvolutionConfig {
  double cfl_factor = 0.9;
  double t_end = 1.0;
  std::vector<double> snapshot_times;
  double residual_tol = 1e-8;
  std::size_t max_steps = 50'000'000;
  double dt_floor = 1e-9;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GridField> fields;
  // one entry per step, taken after the step
  std::vector<double> step_times;
  std::vector<double> dt_history;
  std::vector<double> sup_history;
  std::vector<double> inf_history;

  /// t, sup_norm, inf_norm at t = 0 and after every step.
  void write_history_csv(std::ostream& os) const;
  static void write_field_csv(std::ostream& os, const GridField& field);
};

/// Called after every accepted step with the current time and fields.
using StepObserver = std::function<void(double t, const std::vector<GridField>& fields)>;

/// Largest monotone time step for the current fields:
/// cfl / (lambda + stiffness + max_x L_H(x)/h), with L_H from the upwind
/// magnitudes of every field at x.
double monotone_dt(const std::vector<const GridField*>& fields, const HamiltonianSpec& ham,
                   const DiscreteOperator& op, double lambda, double cfl);

/// u_t = I u - H_num(x, D^-u, D^+u), forward Euler.
Trajectory evolve(const GridField& u0, const HamiltonianSpec& ham, const DiscreteOperator& op,
                  const EvolutionConfig& config, const StepObserver& observer = {});

/// Several initial data advanced with one shared time step sequence, so the
/// discrete scheme is identical for all of them.
std::vector<Trajectory> evolve_coupled(const std::vector<GridField>& u0s, const HamiltonianSpec& ham,
                                       const DiscreteOperator& op, const EvolutionConfig& config,
                                       const StepObserver& observer = {});

struct DiscountedResult {
  GridField u;
  double residual = 0.0;
  std::size_t steps = 0;
};

/// Pseudo-time iteration for lambda u - I u + H_num = 0 until the residual
/// sup norm drops below config.residual_tol.
DiscountedResult solve_discounted(double lambda, const HamiltonianSpec& ham, const DiscreteOperator& op,
                                  const EvolutionConfig& config,
                                  const std::optional<GridField>& initial = std::nullopt);

/// Residual field lambda u - I u + H_num(x, D^-u, D^+u).
GridField discrete_residual(const GridField& u, double lambda, const HamiltonianSpec& ham,
                            const DiscreteOperator& op);

struct ComparisonPairResult {
  double max_violation = 0.0;   // max over t of max_x (u - v), ordered pairs only
  double kappa_increase = 0.0;  // largest step-to-step increase of kappa(t) = max_x (u - v)
  double kappa_initial = 0.0;
  double kappa_final = 0.0;
  std::size_t steps = 0;
};

struct ComparisonReport {
  std::vector<ComparisonPairResult> pairs;
  double max_violation = 0.0;
  double max_kappa_increase = 0.0;
};

/// Evolves each (u0, v0) pair together and tracks kappa(t). max_violation
/// is meaningful when u0 <= v0.
ComparisonReport comparison_harness(const std::vector<std::pair<GridField, GridField>>& pairs,
                                    const HamiltonianSpec& ham, const DiscreteOperator& op,
                                    const EvolutionConfig& config);

}  // namespace nlhj
