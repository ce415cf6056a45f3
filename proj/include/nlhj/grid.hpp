#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlhj {

/// A point or displacement on the torus. Unused coordinates are zero in 1D.
using Vec = std::array<double, 2>;

double norm(const Vec& v, int dim);
double dot(const Vec& a, const Vec& b, int dim);

/// Minimum-image distance on the unit torus.
double periodic_distance(const Vec& a, const Vec& b, int dim);

/// Uniform cell-centred grid on the unit torus T^dim, dim in {1, 2}.
///
/// Node (i, j) sits at ((i + 0.5) h, (j + 0.5) h) with h = 1/n. Linear
/// indices run over the first axis fastest.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  PeriodicGrid(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const;

  std::array<int, 2> coords(std::size_t idx) const;
  std::size_t index(int i, int j = 0) const;
  Vec point(std::size_t idx) const;

  /// Index of the node reached from `idx` by an integer lattice shift.
  std::size_t shifted(std::size_t idx, int di, int dj = 0) const;

  /// Nearest node to an arbitrary point (periodic wrap).
  std::size_t nearest(const Vec& x) const;

  bool operator==(const PeriodicGrid&) const = default;

 private:
  int dim_ = 1;
  int n_ = 8;
  double h_ = 0.125;
};

PeriodicGrid make_grid(int dim, int n);

/// One scalar per grid node.
struct GridField {
  PeriodicGrid grid;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(const PeriodicGrid& g, double fill = 0.0);
  GridField(const PeriodicGrid& g, std::vector<double> v);

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  std::size_t size() const { return values.size(); }

  double max() const;
  double min() const;
  double sup_norm() const;
  double mean() const;
  bool all_finite() const;
};

GridField sample(const PeriodicGrid& grid, const std::function<double(const Vec&)>& fn);

/// Open ball on the torus with its distance-to-boundary function.
struct Domain {
  PeriodicGrid grid;
  std::vector<char> inside;
  std::vector<double> dist;
  Vec center{0.0, 0.0};
  double radius = 0.0;

  bool contains(std::size_t idx) const { return inside[idx] != 0; }
  /// Whole-torus domain: every node inside, distance +inf.
  static Domain whole(const PeriodicGrid& grid);
};

Domain ball_domain(const PeriodicGrid& grid, const Vec& center, double radius);

struct OneSidedGradients {
  Vec minus{0.0, 0.0};
  Vec plus{0.0, 0.0};
};

/// Backward and forward difference quotients at a node, periodic wrap.
OneSidedGradients one_sided_gradients(const GridField& field, std::size_t idx);

/// Lattice shift of the node nearest to x + z, for x a node.
std::array<int, 2> snap_offset(const Vec& z, double h);

/// Field translated by an integer lattice shift: out(x) = u(x - shift).
GridField shift_field(const GridField& field, int di, int dj = 0);

}  // namespace nlhj
