#include "nlhj/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace nlhj {

std::vector<double> default_radii(const PeriodicGrid& grid) {
  const int n = grid.n();
  std::set<int> mult;
  for (double s = 2.0; s <= n / 2.0; s *= 1.15) mult.insert(static_cast<int>(std::lround(s)));
  mult.insert(n / 2);
  std::vector<double> radii;
  for (int s : mult) {
    if (s >= 2 && s <= n / 2) radii.push_back(s * grid.h());
  }
  return radii;
}

std::vector<OmegaPoint> modulus_of_continuity(const GridField& field, const std::vector<double>& radii) {
  const auto& g = field.grid;
  const int n = g.n();
  const double h = g.h();
  // Largest difference per shift, tagged with the shift length.
  std::vector<std::pair<double, double>> by_dist;
  auto scan = [&](int di, int dj) {
    double d = 0.0;
    for (std::size_t x = 0; x < field.size(); ++x) {
      d = std::max(d, std::abs(field[g.shifted(x, di, dj)] - field[x]));
    }
    double len = h * std::hypot(static_cast<double>(di), static_cast<double>(dj));
    by_dist.emplace_back(len, d);
  };
  for (int s = 1; s <= n / 2; ++s) {
    scan(s, 0);
    if (g.dim() == 2) {
      scan(0, s);
      scan(s, s);
      scan(s, -s);
    }
  }
  std::sort(by_dist.begin(), by_dist.end());
  std::vector<OmegaPoint> out;
  for (double r : radii) {
    double w = 0.0;
    for (const auto& [len, d] : by_dist) {
      if (len > r * (1.0 + 1e-12)) break;
      w = std::max(w, d);
    }
    out.push_back({r, w});
  }
  return out;
}

HolderFit holder_fit(const std::vector<OmegaPoint>& table, double r_lo, double r_hi) {
  std::vector<double> X, Y;
  for (const auto& p : table) {
    if (p.r < r_lo * (1.0 - 1e-12) || p.r > r_hi * (1.0 + 1e-12)) continue;
    if (!(p.omega > 0.0)) throw std::invalid_argument("holder_fit: omega vanishes in the fit range");
    X.push_back(std::log(p.r));
    Y.push_back(std::log(p.omega));
  }
  if (X.size() < 4) throw std::invalid_argument("holder_fit: fewer than 4 points in the fit range");
  const double k = static_cast<double>(X.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  HolderFit fit;
  fit.points = X.size();
  fit.gamma = sxy / sxx;
  fit.seminorm = std::exp(my - fit.gamma * mx);
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::pair<double, double> default_fit_range(const PeriodicGrid& grid) { return {4.0 * grid.h(), 1.0 / 8.0}; }

double oscillation(const GridField& field, const std::optional<Domain>& region) {
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (region && !region->contains(i)) continue;
    hi = std::max(hi, field[i]);
    lo = std::min(lo, field[i]);
  }
  return hi >= lo ? hi - lo : 0.0;
}

OscillationReport oscillation_stability(const std::vector<double>& lambdas, const std::vector<GridField>& fields,
                                        double limit) {
  if (lambdas.size() != fields.size()) throw std::invalid_argument("one field per lambda required");
  OscillationReport rep;
  rep.lambdas = lambdas;
  for (const auto& f : fields) rep.osc.push_back(oscillation(f));
  if (rep.osc.empty()) {
    rep.pass = true;
    return rep;
  }
  double hi = *std::max_element(rep.osc.begin(), rep.osc.end());
  double lo = *std::min_element(rep.osc.begin(), rep.osc.end());
  if (hi == 0.0) {
    rep.ratio = 1.0;
  } else {
    rep.ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  rep.pass = rep.ratio <= limit;
  return rep;
}

}  // namespace nlhj
