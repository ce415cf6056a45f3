#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "nlhj/grid.hpp"
#include "nlhj/levy.hpp"

namespace nlhj {

struct BarrierParams {
  Vec x0{0.5, 0.5};
  double r = 0.25;
  double gamma = 0.5;
  double C1 = 1.0;
  double C2 = 0.0;

  void validate() const;
};

struct BallCoords {
  double d0 = 0.0;
  double dr = 0.0;
  double rho = 0.0;
};

/// d0 = |x - x0|, dr = r - d0, rho = min(d0, dr)/4. Rejects x outside the
/// closed ball.
BallCoords eval_d0_dr_rho(const BarrierParams& params, const Vec& x, int dim);

double eval_w1(const BarrierParams& params, const Vec& x, int dim);
double eval_w2(const BarrierParams& params, const Vec& x, int dim);
double eval_w(const BarrierParams& params, const Vec& x, int dim);
GridField sample_w(const BarrierParams& params, const PeriodicGrid& grid);

/// Boundary exponent min{(m - sigma)/m, (m - theta)/m}.
double gamma0_boundary(double sigma, double m, double theta);
/// Interior exponent: 1 for sigma < 1, (m - sigma)/(m - 1) otherwise, capped
/// by the theta branch (m - theta)/m.
double gamma0_interior(double sigma, double m, double theta);

enum class BarrierMode { full, censored, levy_ito };

struct BarrierSetup {
  PeriodicGrid grid;
  QuadratureMeasure measure;
  BarrierMode mode = BarrierMode::full;
  std::optional<JumpFunction> jump;  // levy_ito only
  BarrierParams params;              // C1 is ignored; it is the search variable
  double A = 1.0;
  double b0 = 1.0;
  double m = 2.0;
  double theta = 0.0;
};

struct BarrierRow {
  Vec x{0.0, 0.0};
  double d0 = 0.0;
  double dr = 0.0;
  double rho = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double lhs_fd = 0.0;  // same LHS with a centred-difference gradient
};

struct BarrierReport {
  std::vector<BarrierRow> rows;
  double C1 = 0.0;
  double min_margin = 0.0;
  bool pass = false;

  void write_csv(std::ostream& os, int dim) const;
};

struct C1Selection {
  double C1 = 0.0;
  double base = 0.0;  // A^{1/m} + C2^{1/m} + 1
  double constant = 0.0;  // C1 / base
  int doublings = 0;
  BarrierReport report;
};

struct BoundRow {
  Vec x{0.0, 0.0};
  double rho = 0.0;
  double measured = 0.0;  // sup_xi I_xi(w, x)
  double shape = 0.0;     // bound without its constant
  double bound = 0.0;     // fitted constant * shape
};

struct BoundReport {
  std::vector<BoundRow> rows;
  double fitted_constant = 0.0;
  enum class Branch { jump, strong, weak } branch = Branch::jump;
};

/// Strict-supersolution check of w = w1 + w2 on B_r(x0):
///
///   -sup_xi I_xi(w, x) + b0 |Dw(x)|^m >= A rho(x)^{-theta}
///
/// at grid nodes other than x0 and outside the annulus dr < 2h. In Levy-Ito
/// mode rho is replaced by min(d0, dr)/(4 C_j) and xi runs over every node.
class BarrierProblem {
 public:
  explicit BarrierProblem(BarrierSetup setup);

  const BarrierSetup& setup() const { return setup_; }
  const std::vector<std::size_t>& test_points() const { return points_; }
  /// Gamma actually certified (1 is replaced by 1 - 1e-3 when C2 = 0).
  double gamma() const { return gamma_; }

  BarrierReport verify(double C1) const;
  C1Selection select_C1(int max_doublings = 60) const;
  BoundReport bound_Iw(double C1) const;

 private:
  double sup_I(std::size_t t, double C1) const;

  BarrierSetup setup_;
  double gamma_ = 0.5;
  std::vector<std::size_t> points_;
  std::vector<BallCoords> coords_;
  std::vector<double> grad_hat_;  // |D w| / C1, closed form
  std::vector<double> grad_fd_;   // centred-difference counterpart
  std::vector<double> rhs_;
  // I_xi applied to w(C1 = 1, C2 = 0) and to the outside indicator,
  // one row per xi family member, one column per test point.
  std::vector<std::vector<double>> I_hat_;
  std::vector<std::vector<double>> I_out_;
};

}  // namespace nlhj
