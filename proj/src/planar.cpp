#include "kssim/planar.hpp"

#include "kssim/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace kssim {
namespace {

// the FFTW planner is not thread safe
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

PlanarGrid::PlanarGrid(double half_width, int n) : half_width_(half_width), n_(n) {
  if (!(half_width > 0.0)) throw ConfigError("planar grid: half width must be positive");
  if (n < 8 || n % 2 != 0) throw ConfigError("planar grid: N must be even and >= 8");
  dx_ = 2.0 * half_width / n;
  dxi_ = std::numbers::pi / half_width;

  x1_.resize(real_size());
  x2_.resize(real_size());
  r2_.resize(real_size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t id = static_cast<std::size_t>(i) * n + j;
      x1_[id] = -half_width + i * dx_;
      x2_[id] = -half_width + j * dx_;
      r2_[id] = x1_[id] * x1_[id] + x2_[id] * x2_[id];
    }
  }

  const int hn = half_n();
  k1_.resize(spec_size());
  k2_.resize(spec_size());
  ksq_.resize(spec_size());
  hw_.resize(spec_size());
  mask_.resize(spec_size());
  const double cut = n / 3.0;
  for (int i = 0; i < n; ++i) {
    const int m1 = i < n / 2 ? i : i - n;
    for (int j = 0; j < hn; ++j) {
      const std::size_t id = static_cast<std::size_t>(i) * hn + j;
      const double xi1 = m1 * dxi_;
      const double xi2 = j * dxi_;
      k1_[id] = (i == n / 2) ? 0.0 : xi1;
      k2_[id] = (j == n / 2) ? 0.0 : xi2;
      ksq_[id] = xi1 * xi1 + xi2 * xi2;
      hw_[id] = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      mask_[id] = (std::abs(m1) < cut && j < cut) ? 1.0 : 0.0;
    }
  }

  std::vector<double> rbuf(real_size());
  std::vector<Complex> cbuf(spec_size());
  auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
  std::lock_guard lock(planner_mutex());
  plan_forward_ = fftw_plan_dft_r2c_2d(n, n, rbuf.data(), cptr, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_inverse_ = fftw_plan_dft_c2r_2d(n, n, cptr, rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
}

PlanarGrid::~PlanarGrid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
}

void PlanarGrid::forward(std::span<const double> in, std::span<Complex> out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_forward_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void PlanarGrid::inverse(std::span<const Complex> in, std::span<double> out) const {
  // c2r overwrites its input
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inverse_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double norm = 1.0 / static_cast<double>(real_size());
  for (double& v : out) v *= norm;
}

Spectrum PlanarGrid::forward(std::span<const double> in) const {
  Spectrum out(spec_size());
  forward(in, out);
  return out;
}

std::vector<double> PlanarGrid::inverse(std::span<const Complex> in) const {
  std::vector<double> out(real_size());
  inverse(in, out);
  return out;
}

GridPtr make_planar_grid(double half_width, int n) {
  return std::make_shared<const PlanarGrid>(half_width, n);
}

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->real_size(), 0.0) {}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->real_size()) throw ConfigError("field: size mismatch with grid");
}

Field Field::from_spectrum(GridPtr grid, std::span<const Complex> spec) {
  Field f(grid, grid->inverse(spec));
  f.spec_.emplace(spec.begin(), spec.end());
  return f;
}

Field Field::from_function(GridPtr grid, const std::function<double(double, double)>& fn) {
  std::vector<double> v(grid->real_size());
  const auto x1 = grid->x1();
  const auto x2 = grid->x2();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(x1[i], x2[i]);
  return Field(std::move(grid), std::move(v));
}

const Spectrum& Field::spectrum() const {
  if (!spec_) spec_ = grid_->forward(values_);
  return *spec_;
}

Field& Field::operator+=(const Field& o) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  if (spec_ && o.spec_) {
    for (std::size_t i = 0; i < spec_->size(); ++i) (*spec_)[i] += (*o.spec_)[i];
  } else {
    spec_.reset();
  }
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  if (spec_ && o.spec_) {
    for (std::size_t i = 0; i < spec_->size(); ++i) (*spec_)[i] -= (*o.spec_)[i];
  } else {
    spec_.reset();
  }
  return *this;
}

Field& Field::operator*=(double c) {
  for (double& v : values_) v *= c;
  if (spec_) {
    for (Complex& z : *spec_) z *= c;
  }
  return *this;
}

State zero_state(const GridPtr& grid) { return State{Field(grid), Field(grid)}; }

double integral(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().dx() * f.grid().dx();
}

double sup_norm(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s = std::max(s, std::abs(v));
  return s;
}

Field product(const Field& a, const Field& b) {
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] * b.values()[i];
  return Field(a.grid_ptr(), std::move(v));
}

Field derivative(const Field& f, int axis) {
  const auto& g = f.grid();
  const auto k = axis == 0 ? g.k1() : g.k2();
  Spectrum s = f.spectrum();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= Complex(0.0, k[i]);
  return Field::from_spectrum(f.grid_ptr(), s);
}

VecField gradient(const Field& f) { return {derivative(f, 0), derivative(f, 1)}; }

Field laplacian(const Field& f) {
  const auto ksq = f.grid().ksq();
  Spectrum s = f.spectrum();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -ksq[i];
  return Field::from_spectrum(f.grid_ptr(), s);
}

Field divergence(const VecField& v) {
  const auto& g = v.x1.grid();
  const auto& a = v.x1.spectrum();
  const auto& b = v.x2.spectrum();
  Spectrum s(a.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = Complex(0.0, g.k1()[i]) * a[i] + Complex(0.0, g.k2()[i]) * b[i];
  }
  return Field::from_spectrum(v.x1.grid_ptr(), s);
}

Field band_limited(const Field& f) {
  const auto mask = f.grid().band_mask();
  Spectrum s = f.spectrum();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= mask[i];
  return Field::from_spectrum(f.grid_ptr(), s);
}

bool all_finite(const Field& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace kssim
