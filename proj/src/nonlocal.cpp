#include "nlhj/nonlocal.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "nlhj/parallel.hpp"

namespace nlhj {

namespace {

int fold(int d, int n) {
  int r = d % n;
  if (r < 0) r += n;
  return r > n / 2 ? r - n : r;
}

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftBuffers {
  int dim = 1;
  int n = 8;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftBuffers(int d, int nn) : dim(d), n(nn) {
    real_size = d == 1 ? static_cast<std::size_t>(nn) : static_cast<std::size_t>(nn) * nn;
    complex_size = d == 1 ? static_cast<std::size_t>(nn / 2 + 1) : static_cast<std::size_t>(nn) * (nn / 2 + 1);
    real = fftw_alloc_real(real_size);
    spec = fftw_alloc_complex(complex_size);
    std::lock_guard lock(planner_mutex());
    if (d == 1) {
      forward = fftw_plan_dft_r2c_1d(nn, real, spec, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(nn, spec, real, FFTW_ESTIMATE);
    } else {
      forward = fftw_plan_dft_r2c_2d(nn, nn, real, spec, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_2d(nn, nn, spec, real, FFTW_ESTIMATE);
    }
  }
  ~FftBuffers() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;
};

}  // namespace

double Stencil::weight_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.weight;
  return s;
}

double Stencil::tail_mean(const GridField& u) const {
  if (tail_mass == 0.0) return 0.0;
  if (!tail_mask) return u.mean();
  double s = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if ((*tail_mask)[i]) {
      s += u[i];
      ++k;
    }
  }
  return k ? s / static_cast<double>(k) : 0.0;
}

double Stencil::apply(const GridField& u, std::size_t x, double mean) const {
  const double ux = u[x];
  double acc = 0.0;
  for (const auto& e : entries) acc += e.weight * (u[grid.shifted(x, e.di, e.dj)] - ux);
  if (tail_mass != 0.0) acc += tail_mass * (mean - ux);
  return acc;
}

double Stencil::apply(const GridField& u, std::size_t x) const { return apply(u, x, tail_mean(u)); }

Stencil make_stencil(const QuadratureMeasure& measure, const PeriodicGrid& grid) {
  if (measure.dim != grid.dim()) throw std::invalid_argument("measure and grid dimensions differ");
  const int n = grid.n();
  const int dim = grid.dim();
  const double h = grid.h();
  const std::size_t width = static_cast<std::size_t>(n);
  std::vector<double> dense(grid.size(), 0.0);
  auto slot = [&](int di, int dj) -> double& {
    std::size_t i = static_cast<std::size_t>(fold(di, n) + n) % width;
    std::size_t j = dim == 1 ? 0 : static_cast<std::size_t>(fold(dj, n) + n) % width;
    return dense[j * width + i];
  };

  Stencil st;
  st.grid = grid;
  for (const auto& a : measure.atoms) {
    auto s = snap_offset(a.offset, h);
    if (dim == 1) s[1] = 0;
    slot(s[0], s[1]) += a.weight;
    Vec snapped{s[0] * h, s[1] * h};
    st.rounding_error += a.weight * norm({a.offset[0] - snapped[0], a.offset[1] - snapped[1]}, dim);
  }

  // First-order term: for order 1 the near ball carries the drift; for order 2
  // the compensator -<Du, z> 1{|z| <= 1} acts on the far atoms.
  Vec beta{0.0, 0.0};
  if (measure.compensation_order == 1) {
    beta = measure.near_drift;
  } else {
    auto add = [&](const Atom& a) {
      if (norm(a.offset, dim) <= 1.0) {
        beta[0] -= a.weight * a.offset[0];
        beta[1] -= a.weight * a.offset[1];
      }
    };
    if (measure.paired) {
      for (std::size_t k = 0; k + 1 < measure.atoms.size(); k += 2) {
        Vec pair{0.0, 0.0};
        for (std::size_t m = k; m < k + 2; ++m) {
          const auto& a = measure.atoms[m];
          if (norm(a.offset, dim) <= 1.0) {
            pair[0] -= a.weight * a.offset[0];
            pair[1] -= a.weight * a.offset[1];
          }
        }
        beta[0] += pair[0];
        beta[1] += pair[1];
      }
    } else {
      for (const auto& a : measure.atoms) add(a);
    }
  }
  for (int k = 0; k < dim; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    int di = k == 0 ? 1 : 0;
    int dj = k == 1 ? 1 : 0;
    double m2 = measure.near_second_axis[kk];
    if (m2 != 0.0) {
      slot(di, dj) += 0.5 * m2 / (h * h);
      slot(-di, -dj) += 0.5 * m2 / (h * h);
    }
    if (std::abs(beta[kk]) > 1e-14 * (1.0 + measure.total_mass())) {
      if (beta[kk] > 0.0) {
        slot(di, dj) += beta[kk] / h;
      } else {
        slot(-di, -dj) += -beta[kk] / h;
      }
    }
  }

  for (std::size_t idx = 0; idx < dense.size(); ++idx) {
    if (dense[idx] == 0.0) continue;
    int i = static_cast<int>(idx % width);
    int j = static_cast<int>(idx / width);
    if (i == 0 && j == 0) continue;  // self-jumps cancel
    st.entries.push_back({fold(i, n), fold(j, n), dense[idx]});
  }
  st.tail_mass = measure.far_tail_mass;
  st.tail_mask = measure.tail_mask;
  return st;
}

double eval_operator(const GridField& field, std::size_t x, const QuadratureMeasure& measure) {
  return make_stencil(measure, field.grid).apply(field, x);
}

double eval_censored(const GridField& field, std::size_t x, const QuadratureMeasure& measure,
                     const Domain& domain) {
  return make_stencil(censor(measure, domain, x), field.grid).apply(field, x);
}

double eval_levy_ito(const GridField& field, std::size_t x, const QuadratureMeasure& measure,
                     const JumpFunction& jump) {
  return make_stencil(push_forward(measure, jump, x), field.grid).apply(field, x);
}

GridField spectral_fractional(const GridField& field, double sigma) {
  if (field.grid.dim() != 1) throw std::invalid_argument("spectral oracle is 1D only");
  const int n = field.grid.n();
  FftBuffers fft(1, n);
  std::copy(field.values.begin(), field.values.end(), fft.real);
  fftw_execute(fft.forward);
  for (std::size_t k = 0; k < fft.complex_size; ++k) {
    double mult = -std::pow(2.0 * std::numbers::pi * static_cast<double>(k), sigma) / n;
    fft.spec[k][0] *= mult;
    fft.spec[k][1] *= mult;
  }
  fftw_execute(fft.backward);
  GridField out(field.grid);
  std::copy(fft.real, fft.real + n, out.values.begin());
  return out;
}

GridField DiscreteOperator::apply(const GridField& u) const {
  GridField out(u.grid);
  apply(u, out.values);
  return out;
}

namespace {

class ConvolutionOperator final : public DiscreteOperator {
 public:
  ConvolutionOperator(const Stencil& st) : grid_(st.grid), fft_(st.grid.dim(), st.grid.n()) {
    if (st.tail_mask) throw std::invalid_argument("convolution operator needs a translation-invariant tail");
    stiffness_ = st.stiffness();
    weight_sum_ = st.weight_sum();
    tail_ = st.tail_mass;
    // Kernel k(y) with (k * u)(x) = sum_s w_s u(x + s): place w_s at -s.
    std::fill(fft_.real, fft_.real + fft_.real_size, 0.0);
    for (const auto& e : st.entries) fft_.real[grid_.index(-e.di, -e.dj)] += e.weight;
    fftw_execute(fft_.forward);
    const double scale = 1.0 / static_cast<double>(fft_.real_size);
    kernel_.resize(fft_.complex_size);
    for (std::size_t k = 0; k < fft_.complex_size; ++k) {
      kernel_[k] = {fft_.spec[k][0] * scale, fft_.spec[k][1] * scale};
    }
  }

  const PeriodicGrid& grid() const override { return grid_; }
  double stiffness() const override { return stiffness_; }

  void apply(const GridField& u, std::span<double> out) const override {
    std::lock_guard lock(mutex_);
    std::copy(u.values.begin(), u.values.end(), fft_.real);
    fftw_execute(fft_.forward);
    for (std::size_t k = 0; k < fft_.complex_size; ++k) {
      std::complex<double> v(fft_.spec[k][0], fft_.spec[k][1]);
      v *= kernel_[k];
      fft_.spec[k][0] = v.real();
      fft_.spec[k][1] = v.imag();
    }
    fftw_execute(fft_.backward);
    const double mean = tail_ != 0.0 ? u.mean() : 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      out[i] = fft_.real[i] - weight_sum_ * u[i] + tail_ * (mean - u[i]);
    }
  }

 private:
  PeriodicGrid grid_;
  mutable FftBuffers fft_;
  mutable std::mutex mutex_;
  std::vector<std::complex<double>> kernel_;
  double stiffness_ = 0.0;
  double weight_sum_ = 0.0;
  double tail_ = 0.0;
};

class DirectOperator final : public DiscreteOperator {
 public:
  explicit DirectOperator(std::vector<Stencil> stencils) : stencils_(std::move(stencils)) {
    if (stencils_.empty()) throw std::invalid_argument("direct operator needs one stencil per node");
    grid_ = stencils_.front().grid;
    if (stencils_.size() != grid_.size()) throw std::invalid_argument("direct operator needs one stencil per node");
    for (const auto& s : stencils_) stiffness_ = std::max(stiffness_, s.stiffness());
  }

  const PeriodicGrid& grid() const override { return grid_; }
  double stiffness() const override { return stiffness_; }

  void apply(const GridField& u, std::span<double> out) const override {
    // Stencils sharing a mask share its mean.
    std::vector<double> means(stencils_.size(), 0.0);
    const std::vector<char>* last_mask = nullptr;
    double last_mean = 0.0;
    bool have = false;
    for (std::size_t i = 0; i < stencils_.size(); ++i) {
      const auto& s = stencils_[i];
      if (s.tail_mass == 0.0) continue;
      if (!have || s.tail_mask.get() != last_mask) {
        last_mask = s.tail_mask.get();
        last_mean = s.tail_mean(u);
        have = true;
      }
      means[i] = last_mean;
    }
    parallel_for(
        stencils_.size(), [&](std::size_t i) { out[i] = stencils_[i].apply(u, i, means[i]); }, 4096);
  }

 private:
  PeriodicGrid grid_;
  std::vector<Stencil> stencils_;
  double stiffness_ = 0.0;
};

}  // namespace

std::unique_ptr<DiscreteOperator> make_convolution_operator(const QuadratureMeasure& measure,
                                                            const PeriodicGrid& grid) {
  return std::make_unique<ConvolutionOperator>(make_stencil(measure, grid));
}

std::unique_ptr<DiscreteOperator> make_direct_operator(std::vector<Stencil> stencils) {
  return std::make_unique<DirectOperator>(std::move(stencils));
}

std::unique_ptr<DiscreteOperator> make_levy_ito_operator(const QuadratureMeasure& measure,
                                                         const JumpFunction& jump,
                                                         const PeriodicGrid& grid) {
  if (jump.kind() == JumpFunction::Kind::identity) return make_convolution_operator(measure, grid);
  std::vector<Stencil> stencils(grid.size());
  parallel_for(grid.size(), [&](std::size_t x) { stencils[x] = make_stencil(push_forward(measure, jump, x), grid); });
  return make_direct_operator(std::move(stencils));
}

}  // namespace nlhj
