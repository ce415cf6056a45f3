#include "nlhj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlhj {

double norm(const Vec& v, int dim) {
  return dim == 1 ? std::abs(v[0]) : std::hypot(v[0], v[1]);
}

double dot(const Vec& a, const Vec& b, int dim) {
  return dim == 1 ? a[0] * b[0] : a[0] * b[0] + a[1] * b[1];
}

namespace {

double axis_image_distance(double a, double b) {
  double best = std::numeric_limits<double>::infinity();
  for (int m = -1; m <= 1; ++m) {
    best = std::min(best, std::abs(a - b + m));
  }
  return best;
}

int wrap(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

double periodic_distance(const Vec& a, const Vec& b, int dim) {
  // Inputs are expected to live in [0, 1); fold first so the three-image
  // rule stays exact for displaced points.
  Vec d{};
  for (int k = 0; k < dim; ++k) {
    double fa = a[k] - std::floor(a[k]);
    double fb = b[k] - std::floor(b[k]);
    d[k] = axis_image_distance(fa, fb);
  }
  return norm(d, dim);
}

PeriodicGrid::PeriodicGrid(int dim, int n) : dim_(dim), n_(n), h_(1.0 / n) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (n < 8) {
    throw std::invalid_argument("grid too coarse: n = " + std::to_string(n) + " < 8");
  }
}

std::size_t PeriodicGrid::size() const {
  return dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
}

std::array<int, 2> PeriodicGrid::coords(std::size_t idx) const {
  if (dim_ == 1) return {static_cast<int>(idx), 0};
  return {static_cast<int>(idx % n_), static_cast<int>(idx / n_)};
}

std::size_t PeriodicGrid::index(int i, int j) const {
  i = wrap(i, n_);
  if (dim_ == 1) return static_cast<std::size_t>(i);
  j = wrap(j, n_);
  return static_cast<std::size_t>(j) * n_ + i;
}

Vec PeriodicGrid::point(std::size_t idx) const {
  auto c = coords(idx);
  Vec p{(c[0] + 0.5) * h_, 0.0};
  if (dim_ == 2) p[1] = (c[1] + 0.5) * h_;
  return p;
}

std::size_t PeriodicGrid::shifted(std::size_t idx, int di, int dj) const {
  auto c = coords(idx);
  return index(c[0] + di, c[1] + dj);
}

std::size_t PeriodicGrid::nearest(const Vec& x) const {
  auto node = [&](double v) {
    double f = v - std::floor(v);
    return static_cast<int>(std::lround(f * n_ - 0.5));
  };
  return dim_ == 1 ? index(node(x[0])) : index(node(x[0]), node(x[1]));
}

PeriodicGrid make_grid(int dim, int n) { return PeriodicGrid(dim, n); }

GridField::GridField(const PeriodicGrid& g, double fill) : grid(g), values(g.size(), fill) {}

GridField::GridField(const PeriodicGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("field length does not match grid point count");
  }
}

double GridField::max() const { return *std::max_element(values.begin(), values.end()); }
double GridField::min() const { return *std::min_element(values.begin(), values.end()); }

double GridField::sup_norm() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double GridField::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

bool GridField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

GridField sample(const PeriodicGrid& grid, const std::function<double(const Vec&)>& fn) {
  GridField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = fn(grid.point(i));
  return f;
}

Domain Domain::whole(const PeriodicGrid& grid) {
  Domain d;
  d.grid = grid;
  d.inside.assign(grid.size(), 1);
  d.dist.assign(grid.size(), std::numeric_limits<double>::infinity());
  d.radius = std::numeric_limits<double>::infinity();
  return d;
}

Domain ball_domain(const PeriodicGrid& grid, const Vec& center, double radius) {
  if (!(radius > 0.0) || radius >= 0.5) {
    throw std::invalid_argument("ball radius must lie in (0, 0.5) to fit in one period");
  }
  Domain d;
  d.grid = grid;
  d.center = center;
  d.radius = radius;
  d.inside.resize(grid.size());
  d.dist.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r = periodic_distance(grid.point(i), center, grid.dim());
    d.inside[i] = r < radius ? 1 : 0;
    d.dist[i] = std::max(0.0, radius - r);
  }
  return d;
}

OneSidedGradients one_sided_gradients(const GridField& field, std::size_t idx) {
  const auto& g = field.grid;
  OneSidedGradients out;
  double u = field[idx];
  for (int k = 0; k < g.dim(); ++k) {
    int di = k == 0 ? 1 : 0;
    int dj = k == 1 ? 1 : 0;
    out.minus[k] = (u - field[g.shifted(idx, -di, -dj)]) / g.h();
    out.plus[k] = (field[g.shifted(idx, di, dj)] - u) / g.h();
  }
  return out;
}

std::array<int, 2> snap_offset(const Vec& z, double h) {
  return {static_cast<int>(std::lround(z[0] / h)), static_cast<int>(std::lround(z[1] / h))};
}

GridField shift_field(const GridField& field, int di, int dj) {
  GridField out(field.grid);
  for (std::size_t i = 0; i < field.size(); ++i) {
    out[field.grid.shifted(i, di, dj)] = field[i];
  }
  return out;
}

}  // namespace nlhj
