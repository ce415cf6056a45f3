#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nlhj/grid.hpp"
#include "nlhj/levy.hpp"

namespace nlhj {

struct StencilEntry {
  int di = 0;
  int dj = 0;
  double weight = 0.0;
};

/// Monotone difference form of a discretised operator at one node:
///
///   I u(x) = sum_s w_s (u(x + s) - u(x)) + tail (mean_mask u - u(x)),
///
/// with every w_s >= 0. Atom offsets are snapped to the nearest node; the
/// near-origin second moment becomes a +-1 second difference per axis and any
/// first-order drift is upwinded into a +-1 entry.
struct Stencil {
  PeriodicGrid grid;
  std::vector<StencilEntry> entries;
  double tail_mass = 0.0;
  std::shared_ptr<const std::vector<char>> tail_mask;
  /// sum mu_k |z_k - snapped(z_k)|, diagnostic for sub-cell offsets.
  double rounding_error = 0.0;

  double weight_sum() const;
  /// Diagonal magnitude: the coefficient multiplying -u(x).
  double stiffness() const { return weight_sum() + tail_mass; }
  double tail_mean(const GridField& u) const;
  double apply(const GridField& u, std::size_t x, double mean) const;
  double apply(const GridField& u, std::size_t x) const;
};

Stencil make_stencil(const QuadratureMeasure& measure, const PeriodicGrid& grid);

double eval_operator(const GridField& field, std::size_t x, const QuadratureMeasure& measure);
double eval_censored(const GridField& field, std::size_t x, const QuadratureMeasure& measure,
                     const Domain& domain);
double eval_levy_ito(const GridField& field, std::size_t x, const QuadratureMeasure& measure,
                     const JumpFunction& jump);

/// -(-Delta)^{s/2} u through the Fourier multiplier -(2 pi |k|)^s (1D only).
GridField spectral_fractional(const GridField& field, double sigma);

/// Whole-field evaluation of a discrete nonlocal operator.
class DiscreteOperator {
 public:
  virtual ~DiscreteOperator() = default;
  virtual const PeriodicGrid& grid() const = 0;
  virtual void apply(const GridField& u, std::span<double> out) const = 0;
  /// Largest diagonal magnitude over nodes; drives the monotone time step.
  virtual double stiffness() const = 0;

  GridField apply(const GridField& u) const;
};

/// x-independent operator evaluated by FFT convolution.
std::unique_ptr<DiscreteOperator> make_convolution_operator(const QuadratureMeasure& measure,
                                                            const PeriodicGrid& grid);

/// Node-dependent operator from one stencil per node, direct summation.
std::unique_ptr<DiscreteOperator> make_direct_operator(std::vector<Stencil> stencils);

/// Levy-Ito operator: node x uses the push-forward of the measure through j(x, .).
std::unique_ptr<DiscreteOperator> make_levy_ito_operator(const QuadratureMeasure& measure,
                                                         const JumpFunction& jump,
                                                         const PeriodicGrid& grid);

}  // namespace nlhj
