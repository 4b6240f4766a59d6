#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace kssim {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

// Periodic box [-L, L)^2 with N x N nodes and real-to-complex FFTs.
// Spectra are raw DFT coefficients on the half plane m2 >= 0; the
// continuum transform is dx^2 times these (up to a unimodular phase).
class PlanarGrid {
 public:
  PlanarGrid(double half_width, int n);
  ~PlanarGrid();
  PlanarGrid(const PlanarGrid&) = delete;
  PlanarGrid& operator=(const PlanarGrid&) = delete;

  double half_width() const { return half_width_; }
  int n() const { return n_; }
  int half_n() const { return n_ / 2 + 1; }
  double dx() const { return dx_; }
  double dxi() const { return dxi_; }  // wavenumber spacing pi / L
  std::size_t real_size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t spec_size() const { return static_cast<std::size_t>(n_) * half_n(); }

  std::span<const double> x1() const { return x1_; }
  std::span<const double> x2() const { return x2_; }
  std::span<const double> radius_sq() const { return r2_; }
  // derivative multipliers (Nyquist entries zeroed)
  std::span<const double> k1() const { return k1_; }
  std::span<const double> k2() const { return k2_; }
  std::span<const double> ksq() const { return ksq_; }
  // 1 on the self-conjugate columns, 2 elsewhere
  std::span<const double> half_weight() const { return hw_; }
  // 1 inside the 2/3 band, 0 outside
  std::span<const double> band_mask() const { return mask_; }

  void forward(std::span<const double> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<double> out) const;
  Spectrum forward(std::span<const double> in) const;
  std::vector<double> inverse(std::span<const Complex> in) const;

 private:
  double half_width_;
  int n_;
  double dx_;
  double dxi_;
  std::vector<double> x1_, x2_, r2_;
  std::vector<double> k1_, k2_, ksq_, hw_, mask_;
  void* plan_forward_ = nullptr;
  void* plan_inverse_ = nullptr;
};

using GridPtr = std::shared_ptr<const PlanarGrid>;
GridPtr make_planar_grid(double half_width, int n);

// Real scalar field on the grid with a lazily computed spectrum.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);
  static Field from_spectrum(GridPtr grid, std::span<const Complex> spec);
  static Field from_function(GridPtr grid, const std::function<double(double, double)>& f);

  const PlanarGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  const Spectrum& spectrum() const;
  bool empty() const { return !grid_; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double c);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double c, Field a) { return a *= c; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
  mutable std::optional<Spectrum> spec_;
};

struct VecField {
  Field x1, x2;
};

// Perturbation pair: cell density and reduced chemical field.
struct State {
  Field density;
  Field chem;
};

State zero_state(const GridPtr& grid);

// integral of f over the box
double integral(const Field& f);
double sup_norm(const Field& f);
Field product(const Field& a, const Field& b);
Field derivative(const Field& f, int axis);
VecField gradient(const Field& f);
Field laplacian(const Field& f);
Field divergence(const VecField& v);
// zero the top third of the modes
Field band_limited(const Field& f);
bool all_finite(const Field& f);

}  // namespace kssim
