#include "nlhj/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nlhj {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// int_a^b z^{-1-s} dz
double power_integral_neg(double a, double b, double s) {
  return (std::pow(a, -s) - std::pow(b, -s)) / s;
}

// int_a^b z^{-s} dz
double power_integral(double a, double b, double s) {
  if (std::abs(s - 1.0) < 1e-14) return std::log(b / a);
  return (std::pow(b, 1.0 - s) - std::pow(a, 1.0 - s)) / (1.0 - s);
}

// Exact integrals of C z^{-1-s} against the hat functions centred at j*h,
// j = j0..jmax, restricted to [j0*h, jmax*h]. Index k of the result holds the
// weight for node j0 + k.
std::vector<double> hat_weights(double c, double s, double h, int j0, int jmax) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(jmax - j0 + 1));
  const double lo_cut = j0 * h;
  const double hi_cut = jmax * h;
  for (int j = j0; j <= jmax; ++j) {
    double mid = j * h;
    double weight = 0.0;
    double a = std::max((j - 1) * h, lo_cut);
    if (mid > a) {
      weight += (power_integral(a, mid, s) - (j - 1) * h * power_integral_neg(a, mid, s)) / h;
    }
    double b = std::min((j + 1) * h, hi_cut);
    if (b > mid) {
      weight += ((j + 1) * h * power_integral_neg(mid, b, s) - power_integral(mid, b, s)) / h;
    }
    w.push_back(c * weight);
  }
  return w;
}

bool lattice_aligned(double v, int n) {
  double t = v * n;
  return std::abs(t - std::round(t)) < 1e-9;
}

void push_pair(std::vector<Atom>& atoms, const Vec& z, double w) {
  atoms.push_back({z, w});
  atoms.push_back({{-z[0], -z[1]}, w});
}

}  // namespace

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::fractional:
      return "fractional";
    case MeasureKind::halfspace_fractional:
      return "halfspace_fractional";
    case MeasureKind::crossed:
      return "crossed";
    case MeasureKind::finite:
      return "finite";
  }
  return "unknown";
}

double fractional_constant(int dim, double s) {
  return s * std::pow(2.0, s - 1.0) * std::tgamma((dim + s) / 2.0) /
         (std::pow(kPi, dim / 2.0) * std::tgamma(1.0 - s / 2.0));
}

LevyMeasureSpec fractional_measure(double sigma, bool exact_constant, int dim) {
  LevyMeasureSpec spec;
  spec.kind = MeasureKind::fractional;
  spec.sigma = sigma;
  spec.orders = {sigma, sigma};
  spec.constant = exact_constant ? fractional_constant(dim, sigma) : 1.0;
  return spec;
}

LevyMeasureSpec halfspace_measure(double sigma, int axis, double constant) {
  LevyMeasureSpec spec;
  spec.kind = MeasureKind::halfspace_fractional;
  spec.sigma = sigma;
  spec.orders = {sigma, sigma};
  spec.constant = constant;
  spec.axis = axis;
  return spec;
}

LevyMeasureSpec crossed_measure(double s1, double s2, double constant) {
  LevyMeasureSpec spec;
  spec.kind = MeasureKind::crossed;
  spec.sigma = std::max(s1, s2);
  spec.orders = {s1, s2};
  spec.constant = constant;
  return spec;
}

LevyMeasureSpec finite_measure(std::vector<FiniteAtom> atoms, double declared_sigma) {
  LevyMeasureSpec spec;
  spec.kind = MeasureKind::finite;
  spec.sigma = declared_sigma;
  spec.orders = {declared_sigma, declared_sigma};
  spec.atoms = std::move(atoms);
  return spec;
}

void LevyMeasureSpec::validate(int dim) const {
  if (!(sigma > 0.0 && sigma < 2.0)) throw std::invalid_argument("measure order sigma must lie in (0, 2)");
  if (kind == MeasureKind::crossed && dim != 2) throw std::invalid_argument("crossed measure requires dim 2");
  if (kind == MeasureKind::halfspace_fractional && (axis < 0 || axis >= dim)) {
    throw std::invalid_argument("halfspace axis out of range");
  }
  for (double s : orders) {
    if (kind != MeasureKind::finite && !(s > 0.0 && s <= sigma + 1e-15)) {
      throw std::invalid_argument("kernel order must lie in (0, sigma]");
    }
  }
  for (const auto& a : atoms) {
    if (a.mass < 0.0) throw std::invalid_argument("finite measure masses must be nonnegative");
  }
  if (!(constant > 0.0)) throw std::invalid_argument("normalizing constant must be positive");
}

bool LevyMeasureSpec::in_support(const Vec& z, int dim) const {
  double r = norm(z, dim);
  switch (kind) {
    case MeasureKind::fractional:
      return r > 0.0;
    case MeasureKind::halfspace_fractional:
      return z[axis] >= 0.0 && r > 0.0;
    case MeasureKind::crossed:
      return r > 0.0 && (z[0] == 0.0 || z[1] == 0.0);
    case MeasureKind::finite:
      return std::any_of(atoms.begin(), atoms.end(), [&](const FiniteAtom& a) {
        return a.mass > 0.0 && norm({a.offset[0] - z[0], a.offset[1] - z[1]}, dim) < 1e-12;
      });
  }
  return false;
}

double QuadratureMeasure::near_power_moment(double alpha, double lo, double hi) const {
  if (hi <= lo) return 0.0;
  double total = 0.0;
  for (const auto& t : near_terms) {
    if (t.coeff == 0.0) continue;
    double e = alpha - t.order;
    if (std::abs(e) < 1e-14) {
      total += lo > 0.0 ? t.coeff * std::log(hi / lo) : kInf;
    } else if (e < 0.0 && lo <= 0.0) {
      total += kInf;
    } else {
      double lo_term = lo > 0.0 ? std::pow(lo, e) : 0.0;
      total += t.coeff * (std::pow(hi, e) - lo_term) / e;
    }
  }
  return total;
}

double QuadratureMeasure::near_second_moment() const { return near_power_moment(2.0, 0.0, r_near); }

double QuadratureMeasure::near_first_moment() const { return near_power_moment(1.0, 0.0, r_near); }

double QuadratureMeasure::atom_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

double QuadratureMeasure::total_mass() const { return atom_mass() + far_tail_mass; }

Vec QuadratureMeasure::first_moment() const {
  Vec m{0.0, 0.0};
  if (paired) {
    for (std::size_t k = 0; k + 1 < atoms.size(); k += 2) {
      for (int d = 0; d < 2; ++d) {
        m[d] += atoms[k].weight * atoms[k].offset[d] + atoms[k + 1].weight * atoms[k + 1].offset[d];
      }
    }
    return m;
  }
  for (const auto& a : atoms) {
    m[0] += a.weight * a.offset[0];
    m[1] += a.weight * a.offset[1];
  }
  return m;
}

double h_alpha_sigma(double alpha, double sigma, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("h_alpha_sigma requires delta > 0");
  if (alpha < sigma) return std::pow(delta, alpha - sigma);
  if (alpha == sigma) return std::abs(std::log(delta)) + 1.0;
  return 1.0;
}

QuadratureMeasure discretize(const LevyMeasureSpec& spec, const PeriodicGrid& grid,
                             std::optional<double> r_cut, double r_max) {
  const int dim = grid.dim();
  spec.validate(dim);
  const double h = grid.h();
  const double cut = r_cut.value_or(h / 2.0);
  if (cut < h / 2.0 - 1e-15) throw std::invalid_argument("r_cut below h/2 leaves a singular cell");
  if (r_max > 4.0 + 1e-12) throw std::invalid_argument("r_max above 4 periods");
  if (r_max <= cut) throw std::invalid_argument("r_max must exceed r_cut");

  QuadratureMeasure q;
  q.dim = dim;
  q.sigma = spec.sigma;
  q.compensation_order = spec.sigma >= 1.0 ? 2 : 1;
  q.r_max = r_max;
  const double c = spec.constant;
  const int jmax = static_cast<int>(std::floor(r_max / h + 1e-9));

  switch (spec.kind) {
    case MeasureKind::finite: {
      q.r_near = 0.0;
      // Re-order into (+z, -z) pairs when the atom set is symmetric.
      std::vector<char> used(spec.atoms.size(), 0);
      std::vector<Atom> paired_atoms;
      bool symmetric = true;
      for (std::size_t i = 0; i < spec.atoms.size() && symmetric; ++i) {
        if (used[i]) continue;
        used[i] = 1;
        const auto& a = spec.atoms[i];
        bool found = false;
        for (std::size_t k = i + 1; k < spec.atoms.size(); ++k) {
          const auto& b = spec.atoms[k];
          if (!used[k] && b.mass == a.mass && b.offset[0] == -a.offset[0] && b.offset[1] == -a.offset[1]) {
            used[k] = 1;
            found = true;
            break;
          }
        }
        if (!found) symmetric = false;
        push_pair(paired_atoms, a.offset, a.mass);
      }
      q.paired = symmetric && !spec.atoms.empty();
      if (q.paired) {
        q.atoms = std::move(paired_atoms);
      } else {
        for (const auto& a : spec.atoms) q.atoms.push_back({a.offset, a.mass});
      }
      return q;
    }
    case MeasureKind::fractional:
    case MeasureKind::halfspace_fractional: {
      const double s = spec.orders[0];
      const bool half = spec.kind == MeasureKind::halfspace_fractional;
      if (dim == 1) {
        int j0 = std::max(1, static_cast<int>(std::lround(cut / h)));
        q.r_near = j0 * h;
        auto w = hat_weights(c, s, h, j0, jmax);
        for (int j = j0; j <= jmax; ++j) {
          double wj = w[static_cast<std::size_t>(j - j0)];
          if (half) {
            q.atoms.push_back({{j * h, 0.0}, wj});
          } else {
            push_pair(q.atoms, {j * h, 0.0}, wj);
          }
        }
        double side = half ? 1.0 : 2.0;
        q.near_terms.push_back({side * c, s});
        q.near_second_axis[0] = side * c * std::pow(q.r_near, 2.0 - s) / (2.0 - s);
        if (half && s < 1.0) q.near_drift[0] = c * std::pow(q.r_near, 1.0 - s) / (1.0 - s);
        q.far_tail_mass = side * c * std::pow(jmax * h, -s) / s;
        q.paired = !half;
      } else {
        q.r_near = cut;
        const double cell = h * h;
        const double rmax = jmax * h;
        for (int j = -jmax; j <= jmax; ++j) {
          for (int i = -jmax; i <= jmax; ++i) {
            if (i == 0 && j == 0) continue;
            Vec z{i * h, j * h};
            double r = norm(z, 2);
            if (r > rmax + 1e-12 || r < q.r_near) continue;
            double w = cell * c * std::pow(r, -2.0 - s);
            if (!half) {
              // visit each +/- pair once
              if (j < 0 || (j == 0 && i < 0)) continue;
              push_pair(q.atoms, z, w);
            } else {
              double za = z[spec.axis];
              if (za < 0.0) continue;
              q.atoms.push_back({z, za == 0.0 ? 0.5 * w : w});
            }
          }
        }
        double angular = half ? kPi : 2.0 * kPi;
        q.near_terms.push_back({angular * c, s});
        double axis_second = 0.5 * angular * c * std::pow(q.r_near, 2.0 - s) / (2.0 - s);
        q.near_second_axis = {axis_second, axis_second};
        if (half && s < 1.0) q.near_drift[spec.axis] = 2.0 * c * std::pow(q.r_near, 1.0 - s) / (1.0 - s);
        q.far_tail_mass = angular * c * std::pow(rmax, -s) / s;
        q.paired = !half;
      }
      return q;
    }
    case MeasureKind::crossed: {
      int j0 = std::max(1, static_cast<int>(std::lround(cut / h)));
      q.r_near = j0 * h;
      for (int axis = 0; axis < 2; ++axis) {
        const double s = spec.orders[static_cast<std::size_t>(axis)];
        auto w = hat_weights(c, s, h, j0, jmax);
        for (int j = j0; j <= jmax; ++j) {
          Vec z{0.0, 0.0};
          z[static_cast<std::size_t>(axis)] = j * h;
          push_pair(q.atoms, z, w[static_cast<std::size_t>(j - j0)]);
        }
        q.near_terms.push_back({2.0 * c, s});
        q.near_second_axis[static_cast<std::size_t>(axis)] = 2.0 * c * std::pow(q.r_near, 2.0 - s) / (2.0 - s);
        q.far_tail_mass += 2.0 * c * std::pow(jmax * h, -s) / s;
      }
      q.paired = true;
      return q;
    }
  }
  return q;
}

MomentReport check_moment_bounds(const QuadratureMeasure& measure, double sigma,
                                 const std::vector<double>& alphas,
                                 const std::vector<double>& deltas, std::optional<double> cr) {
  MomentReport rep;
  const int dim = measure.dim;
  for (double alpha : alphas) {
    for (double delta : deltas) {
      MomentEntry e;
      e.alpha = alpha;
      e.delta = delta;
      double sum = measure.far_tail_mass;
      for (const auto& a : measure.atoms) {
        double r = norm(a.offset, dim);
        if (r >= delta) sum += a.weight * std::min(1.0, std::pow(r, alpha));
      }
      if (delta < measure.r_near) sum += measure.near_power_moment(alpha, delta, measure.r_near);
      e.measured = sum;
      e.h_value = h_alpha_sigma(alpha, sigma, delta);
      rep.tail.push_back(e);

      if (alpha > sigma && alpha <= 2.0 && delta < 1.0) {
        MomentEntry s;
        s.alpha = alpha;
        s.delta = delta;
        double small = 0.0;
        for (const auto& a : measure.atoms) {
          double r = norm(a.offset, dim);
          if (r < delta) small += a.weight * std::pow(r, alpha);
        }
        small += measure.near_power_moment(alpha, 0.0, std::min(delta, measure.r_near));
        s.measured = small;
        s.h_value = std::pow(delta, alpha - sigma);
        rep.small_ball.push_back(s);
      }
    }
  }
  double fitted = 0.0;
  for (const auto* list : {&rep.tail, &rep.small_ball}) {
    for (const auto& e : *list) fitted = std::max(fitted, e.measured / e.h_value);
  }
  rep.fitted_cr = fitted;
  rep.cr_used = cr.value_or(fitted);
  rep.pass = true;
  for (auto* list : {&rep.tail, &rep.small_ball}) {
    for (auto& e : *list) {
      e.bound = rep.cr_used * e.h_value;
      e.pass = e.measured <= e.bound * (1.0 + 1e-12);
      rep.pass = rep.pass && e.pass;
    }
  }
  return rep;
}

QuadratureMeasure censor(const QuadratureMeasure& measure, const Domain& domain, std::size_t x) {
  const auto& grid = domain.grid;
  if (!domain.contains(x) || domain.dist[x] <= measure.r_near) {
    throw std::invalid_argument("censor: node too close to the domain boundary (d <= r_cut)");
  }
  QuadratureMeasure out = measure;
  out.atoms.clear();
  bool removed = false;
  for (const auto& a : measure.atoms) {
    auto s = snap_offset(a.offset, grid.h());
    std::size_t target = grid.shifted(x, s[0], s[1]);
    if (domain.contains(target)) {
      out.atoms.push_back(a);
    } else {
      removed = true;
    }
  }
  out.paired = measure.paired && !removed;
  std::size_t inside = static_cast<std::size_t>(std::count(domain.inside.begin(), domain.inside.end(), 1));
  if (inside < grid.size()) {
    // Mask composition with an existing mask keeps the tighter set.
    auto mask = std::make_shared<std::vector<char>>(domain.inside);
    if (measure.tail_mask) {
      for (std::size_t i = 0; i < mask->size(); ++i) (*mask)[i] = (*mask)[i] && (*measure.tail_mask)[i];
    }
    std::size_t kept = static_cast<std::size_t>(std::count(mask->begin(), mask->end(), 1));
    std::size_t prior = measure.tail_mask
                            ? static_cast<std::size_t>(std::count(measure.tail_mask->begin(), measure.tail_mask->end(), 1))
                            : grid.size();
    out.far_tail_mass = prior > 0 ? measure.far_tail_mass * static_cast<double>(kept) / static_cast<double>(prior) : 0.0;
    out.tail_mask = std::move(mask);
  }
  return out;
}

JumpFunction JumpFunction::identity() { return JumpFunction{}; }

JumpFunction JumpFunction::scaled(GridField g) {
  JumpFunction j;
  j.kind_ = Kind::scaled;
  j.grid_ = g.grid;
  j.cj_ = g.sup_norm();
  if (!g.all_finite()) throw std::invalid_argument("scaled jump factor must be bounded");
  j.g_ = std::move(g);
  return j;
}

JumpFunction JumpFunction::table(const PeriodicGrid& grid, Table fn, double cj) {
  JumpFunction j;
  j.kind_ = Kind::table;
  j.grid_ = grid;
  j.table_ = std::move(fn);
  j.cj_ = cj;
  return j;
}

Vec JumpFunction::apply(std::size_t x, const Vec& z) const {
  switch (kind_) {
    case Kind::identity:
      return z;
    case Kind::scaled:
      return {g_[x] * z[0], g_[x] * z[1]};
    case Kind::table:
      return table_(grid_.point(x), z);
  }
  return z;
}

double JumpFunction::signed_scale(std::size_t x) const {
  switch (kind_) {
    case Kind::identity:
      return 1.0;
    case Kind::scaled:
      return g_[x];
    case Kind::table: {
      Vec y = table_(grid_.point(x), {1e-6, 0.0});
      return y[0] / 1e-6;
    }
  }
  return 1.0;
}

double JumpFunction::local_scale(std::size_t x, double r) const {
  switch (kind_) {
    case Kind::identity:
      return 1.0;
    case Kind::scaled:
      return std::abs(g_[x]);
    case Kind::table: {
      double probe = r > 0.0 ? r : 1e-6;
      int dim = grid_.dim();
      double s = 0.0;
      for (int k = 0; k < dim; ++k) {
        Vec e{0.0, 0.0};
        e[static_cast<std::size_t>(k)] = probe;
        s = std::max(s, norm(table_(grid_.point(x), e), dim) / probe);
      }
      return s;
    }
  }
  return 1.0;
}

bool check_j1(const JumpFunction& jump, const PeriodicGrid& grid, const QuadratureMeasure& measure) {
  const int dim = grid.dim();
  for (std::size_t x = 0; x < grid.size(); ++x) {
    for (const auto& a : measure.atoms) {
      double lhs = norm(jump.apply(x, a.offset), dim);
      if (lhs > jump.cj() * norm(a.offset, dim) * (1.0 + 1e-12) + 1e-15) return false;
    }
  }
  return true;
}

QuadratureMeasure push_forward(const QuadratureMeasure& measure, const JumpFunction& jump, std::size_t x) {
  if (jump.kind() == JumpFunction::Kind::identity) return measure;
  const int dim = measure.dim;
  QuadratureMeasure out = measure;
  out.atoms.clear();
  const double drop_radius = 0.5 * measure.r_near;
  bool dropped = false;
  for (const auto& a : measure.atoms) {
    Vec y = jump.apply(x, a.offset);
    if (norm(y, dim) < drop_radius || norm(y, dim) == 0.0) {
      dropped = true;
      continue;
    }
    out.atoms.push_back({y, a.weight});
  }
  out.paired = measure.paired && !dropped && jump.kind() == JumpFunction::Kind::scaled;

  const double g = jump.signed_scale(x);
  const double scale = jump.local_scale(x, measure.r_near);
  if (scale == 0.0) {
    out.near_terms.clear();
    out.near_second_axis = {0.0, 0.0};
    out.near_drift = {0.0, 0.0};
    out.far_tail_mass = 0.0;
    out.r_near = 0.0;
    return out;
  }
  for (auto& t : out.near_terms) t.coeff *= std::pow(scale, t.order);
  out.r_near = measure.r_near * scale;
  for (int k = 0; k < 2; ++k) {
    out.near_second_axis[static_cast<std::size_t>(k)] *= scale * scale;
    out.near_drift[static_cast<std::size_t>(k)] *= (g < 0.0 ? -scale : scale);
  }
  return out;
}

namespace {

// Nodes of the cell containing an off-grid target, or the node itself.
void landing_nodes(const PeriodicGrid& grid, const Vec& y, std::vector<std::size_t>& out, bool& inflated) {
  const int n = grid.n();
  std::array<std::array<int, 2>, 2> cand{};
  std::array<int, 2> count{1, 1};
  for (int k = 0; k < grid.dim(); ++k) {
    double t = y[static_cast<std::size_t>(k)] * n - 0.5;
    double r = std::round(t);
    if (std::abs(t - r) < 1e-9) {
      cand[static_cast<std::size_t>(k)][0] = static_cast<int>(r);
    } else {
      double f = std::floor(t);
      cand[static_cast<std::size_t>(k)] = {static_cast<int>(f), static_cast<int>(f) + 1};
      count[static_cast<std::size_t>(k)] = 2;
      inflated = true;
    }
  }
  for (int a = 0; a < count[0]; ++a) {
    for (int b = 0; b < count[1]; ++b) {
      out.push_back(grid.dim() == 1 ? grid.index(cand[0][static_cast<std::size_t>(a)])
                                    : grid.index(cand[0][static_cast<std::size_t>(a)], cand[1][static_cast<std::size_t>(b)]));
    }
  }
}

}  // namespace

CoveringResult covering_check(const QuadratureMeasure& measure, const JumpFunction& jump,
                              const PeriodicGrid& grid, int max_iter, std::uint64_t seed) {
  if (max_iter < 1) throw std::invalid_argument("covering_check requires max_iter >= 1");
  CoveringResult res;
  const std::size_t total = grid.size();
  const int dim = grid.dim();

  // Distinct support offsets.
  std::map<std::pair<long long, long long>, Vec> uniq;
  for (const auto& a : measure.atoms) {
    if (a.weight <= 0.0) continue;
    auto key = std::make_pair(std::llround(a.offset[0] * 1e12), std::llround(a.offset[1] * 1e12));
    uniq.emplace(key, a.offset);
  }
  std::vector<Vec> support;
  support.reserve(uniq.size());
  for (const auto& [k, v] : uniq) support.push_back(v);

  if (grid.n() <= 64) {
    for (std::size_t i = 0; i < total; ++i) res.tested.push_back(i);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    res.tested.push_back(0);
    for (int k = 0; k < 16; ++k) res.tested.push_back(pick(rng));
  }

  bool aligned = jump.kind() == JumpFunction::Kind::identity;
  for (const auto& z : support) {
    for (int k = 0; k < dim; ++k) aligned = aligned && lattice_aligned(z[static_cast<std::size_t>(k)], grid.n());
  }

  // Translation invariance: with lattice-aligned identity jumps the reachable
  // sets from any node are translates of the ones from node 0.
  std::vector<std::size_t> starts = aligned ? std::vector<std::size_t>{0} : res.tested;

  int worst = 0;
  std::vector<std::size_t> worst_history;
  std::vector<std::size_t> targets;
  for (std::size_t x0 : starts) {
    std::vector<char> in_union(total, 0);
    std::vector<char> in_next(total, 0);
    std::vector<std::size_t> frontier{x0};
    in_union[x0] = 1;
    std::size_t union_size = 1;
    std::vector<std::size_t> history{1};
    int reached = union_size == total ? 0 : -1;
    for (int it = 1; it <= max_iter && reached < 0; ++it) {
      std::vector<std::size_t> next;
      for (std::size_t xi : frontier) {
        Vec p = grid.point(xi);
        for (const auto& z : support) {
          Vec y = jump.apply(xi, z);
          targets.clear();
          landing_nodes(grid, {p[0] + y[0], p[1] + y[1]}, targets, res.grid_resolution_limited);
          for (std::size_t t : targets) {
            if (!in_next[t]) {
              in_next[t] = 1;
              next.push_back(t);
            }
          }
        }
      }
      std::size_t before = union_size;
      for (std::size_t t : next) {
        in_next[t] = 0;
        if (!in_union[t]) {
          in_union[t] = 1;
          ++union_size;
        }
      }
      history.push_back(union_size);
      if (union_size == total) {
        reached = it;
        break;
      }
      // Once the union stops growing it can never grow again.
      if (union_size == before) break;
      frontier = std::move(next);
    }
    if (reached < 0) {
      res.covered = false;
      res.n_star = -1;
      res.history = std::move(history);
      return res;
    }
    if (reached >= worst) {
      worst = reached;
      worst_history = history;
    }
  }
  res.covered = true;
  res.n_star = worst;
  res.history = std::move(worst_history);
  return res;
}

}  // namespace nlhj
