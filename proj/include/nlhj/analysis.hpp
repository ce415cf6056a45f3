#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nlhj/grid.hpp"

namespace nlhj {

struct OmegaPoint {
  double r = 0.0;
  double omega = 0.0;
};

/// Log-spaced multiples of h between 2h and 0.5.
std::vector<double> default_radii(const PeriodicGrid& grid);

/// omega(r) = max |u(x) - u(y)| over node pairs at periodic distance <= r.
/// Exhaustive in 1D; axis and diagonal shifts in 2D.
std::vector<OmegaPoint> modulus_of_continuity(const GridField& field, const std::vector<double>& radii);

struct HolderFit {
  double gamma = 0.0;
  double seminorm = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least squares of log omega on log r over r in [r_lo, r_hi].
HolderFit holder_fit(const std::vector<OmegaPoint>& table, double r_lo, double r_hi);

/// Default fit window [4h, 1/8] (diameter 1 of the unit torus over 8).
std::pair<double, double> default_fit_range(const PeriodicGrid& grid);

double oscillation(const GridField& field, const std::optional<Domain>& region = std::nullopt);

struct OscillationReport {
  std::vector<double> lambdas;
  std::vector<double> osc;
  double ratio = 1.0;  // max / min, 1 when every oscillation vanishes
  bool pass = false;
};

/// osc(u_lambda - u_lambda(x_ref)) per lambda, ratio max/min <= limit.
OscillationReport oscillation_stability(const std::vector<double>& lambdas, const std::vector<GridField>& fields,
                                        double limit = 1.25);

}  // namespace nlhj
