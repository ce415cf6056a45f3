#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlhj/grid.hpp"

namespace nlhj {

enum class MeasureKind { fractional, halfspace_fractional, crossed, finite };

std::string to_string(MeasureKind kind);

struct FiniteAtom {
  Vec offset{0.0, 0.0};
  double mass = 0.0;
};

/// Declarative description of a Levy measure from the model catalogue.
///
/// - fractional:   C |z|^{-(N+s)} dz
/// - halfspace:    C 1{z_axis > 0} |z|^{-(N+s)} dz
/// - crossed (2D): C |z_1|^{-(1+s_1)} dz_1 x delta_0(z_2) + (1 <-> 2)
/// - finite:       sum of point masses
///
/// `sigma` is the declared order used for (M1)/(M2) and for choosing the
/// compensation form; the kernel exponents live in `orders`.
struct LevyMeasureSpec {
  MeasureKind kind = MeasureKind::fractional;
  double sigma = 1.0;
  std::array<double, 2> orders{1.0, 1.0};
  double constant = 1.0;
  int axis = 0;  // halfspace direction
  std::vector<FiniteAtom> atoms;

  bool in_support(const Vec& z, int dim) const;
  void validate(int dim) const;
};

/// Normalising constant C_{N,s} of the fractional Laplacian.
double fractional_constant(int dim, double s);

LevyMeasureSpec fractional_measure(double sigma, bool exact_constant = false, int dim = 1);
LevyMeasureSpec halfspace_measure(double sigma, int axis = 0, double constant = 1.0);
LevyMeasureSpec crossed_measure(double s1, double s2, double constant = 1.0);
LevyMeasureSpec finite_measure(std::vector<FiniteAtom> atoms, double declared_sigma);

struct Atom {
  Vec offset{0.0, 0.0};
  double weight = 0.0;
};

/// Near-origin kernel piece: int_{|z|<r} |z|^a nu(dz) = coeff r^{a-order}/(a-order).
struct PowerTerm {
  double coeff = 0.0;
  double order = 0.0;
};

/// Discretised Levy measure.
///
/// Far field is a list of atoms on lattice offsets; the singular ball
/// |z| < r_near is kept analytically through its moments and consumed as a
/// second-difference (and, for compensation order 1, drift) correction.
/// Mass beyond r_max is spread uniformly over `tail_mask` (the whole torus
/// when null).
struct QuadratureMeasure {
  int dim = 1;
  double sigma = 1.0;
  int compensation_order = 2;
  double r_near = 0.0;
  double r_max = 4.0;
  std::vector<Atom> atoms;
  std::vector<PowerTerm> near_terms;
  Vec near_second_axis{0.0, 0.0};  // int_{near} z_k^2 nu(dz)
  Vec near_drift{0.0, 0.0};        // int_{near} z nu(dz), used for order 1
  double far_tail_mass = 0.0;
  double dropped_tail_mass = 0.0;  // beyond r_max and not modelled
  bool paired = false;             // atoms stored as consecutive (+z, -z) pairs
  std::shared_ptr<const std::vector<char>> tail_mask;

  double near_second_moment() const;
  double near_first_moment() const;
  /// int_{lo <= |z| < hi} |z|^alpha over the analytic near piece, hi <= r_near.
  double near_power_moment(double alpha, double lo, double hi) const;
  double atom_mass() const;
  double total_mass() const;
  /// sum mu_k z_k, summed pairwise when the atoms are paired.
  Vec first_moment() const;
};

double h_alpha_sigma(double alpha, double sigma, double delta);

/// Quadrature of a measure spec on `grid`.
///
/// 1D power kernels use exact integrals of the kernel against piecewise-linear
/// hat functions; the near ball is rounded to a whole number of cells (at least one).
/// 2D kernels use the midpoint rule per lattice cell.
QuadratureMeasure discretize(const LevyMeasureSpec& spec, const PeriodicGrid& grid,
                             std::optional<double> r_cut = std::nullopt, double r_max = 4.0);

struct MomentEntry {
  double alpha = 0.0;
  double delta = 0.0;
  double measured = 0.0;
  double h_value = 0.0;  // h_{alpha,sigma}(delta) for M1, delta^{alpha-sigma} for M2
  double bound = 0.0;    // C_R * h_value
  bool pass = false;
};

struct MomentReport {
  std::vector<MomentEntry> tail;        // (M1)
  std::vector<MomentEntry> small_ball;  // (M2)
  double fitted_cr = 0.0;
  double cr_used = 0.0;
  bool pass = true;
};

MomentReport check_moment_bounds(const QuadratureMeasure& measure, double sigma,
                                 const std::vector<double>& alphas,
                                 const std::vector<double>& deltas,
                                 std::optional<double> cr = std::nullopt);

/// Restriction of the measure to jumps landing inside `domain` from node x.
QuadratureMeasure censor(const QuadratureMeasure& measure, const Domain& domain, std::size_t x);

/// Jump function j(x, z) of a Levy-Ito operator.
class JumpFunction {
 public:
  enum class Kind { identity, scaled, table };
  using Table = std::function<Vec(const Vec& x, const Vec& z)>;

  static JumpFunction identity();
  /// j(x, z) = g(x) z.
  static JumpFunction scaled(GridField g);
  /// Arbitrary j with declared (J1) constant.
  static JumpFunction table(const PeriodicGrid& grid, Table fn, double cj);

  Kind kind() const { return kind_; }
  double cj() const { return cj_; }
  Vec apply(std::size_t x, const Vec& z) const;
  /// Local linear scale |j(x, z)|/|z| used to push the near-origin moments.
  double local_scale(std::size_t x, double r) const;
  double signed_scale(std::size_t x) const;
  const GridField& factor() const { return g_; }

 private:
  Kind kind_ = Kind::identity;
  GridField g_;
  PeriodicGrid grid_;
  Table table_;
  double cj_ = 1.0;
};

/// Sampled check of |j(x,z)| <= C_j |z| over every node and atom offset.
bool check_j1(const JumpFunction& jump, const PeriodicGrid& grid, const QuadratureMeasure& measure);

/// Push-forward of the measure through j(x, .).
QuadratureMeasure push_forward(const QuadratureMeasure& measure, const JumpFunction& jump,
                               std::size_t x);

struct CoveringResult {
  bool covered = false;
  int n_star = -1;  // smallest n with X_0 u ... u X_n = grid, uniform over tested x
  std::vector<std::size_t> tested;
  /// reachable-set sizes per iteration (worst tested start point).
  std::vector<std::size_t> history;
  /// true when some jump target fell between nodes and was inflated to its cell
  bool grid_resolution_limited = false;
};

/// Iterated reachability of supp(nu) through j on the grid.
CoveringResult covering_check(const QuadratureMeasure& measure, const JumpFunction& jump,
                              const PeriodicGrid& grid, int max_iter, std::uint64_t seed = 0);

}  // namespace nlhj
