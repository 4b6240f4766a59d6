#include "kssim/errors.hpp"
#include "kssim/linops.hpp"
#include "kssim/modes.hpp"

#include <doctest.h>

#include <cmath>

using namespace kssim;

namespace {
// covers the largest planar box used below
const RadialProfile& profile() {
  static const RadialProfile prof = [] {
    ModelParams p;
    p.time_scale = 0.02;
    return solve_profile(p, profile_grid_for(p, 32.0));
  }();
  return prof;
}

// Weighted relative error between the radial mode operator and the planar
// density operator, sampled on the positive x1 axis where cell centres and
// planar nodes coincide.
double cross_check(int mode, double half_width, int n) {
  const RadialProfile& prof = profile();
  const GridPtr grid = make_planar_grid(half_width, n);
  const LinearizedSystem sys = make_linearized_system(prof.params, prof, grid);
  auto radial = [mode](double r) { return mode == 0 ? (1 - r * r) * std::exp(-r * r) : r * r * std::exp(-r * r); };
  const Field g = Field::from_function(grid, [&](double x, double y) {
    const double r2 = x * x + y * y;
    if (mode == 0) return radial(std::sqrt(r2));
    return r2 > 0.0 ? radial(std::sqrt(r2)) * (x * x - y * y) / r2 : 0.0;
  });
  const Field planar = density_operator(g, sys);

  const double dx = grid->dx();
  const double h = 2.0 * dx / 31.0;  // (i + 1/2) h hits odd multiples of dx
  const int cells = static_cast<int>(std::lround(10.0 / h));
  std::vector<double> centers(cells);
  Eigen::VectorXd values(cells);
  for (int i = 0; i < cells; ++i) {
    centers[i] = (i + 0.5) * h;
    values[i] = radial(centers[i]);
  }
  const Eigen::VectorXd out = apply_mode_operator(mode, prof, centers, values);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double r = centers[i];
    const double j = r / dx;
    if (r > 6.0 || std::abs(j - std::round(j)) > 1e-9) continue;
    const std::size_t id = static_cast<std::size_t>(n / 2 + std::lround(j)) * n + n / 2;
    const double w = std::pow(1.0 + r * r, 4.0) * r;
    num += w * std::pow(planar.values()[id] - out[i], 2);
    den += w * std::pow(planar.values()[id], 2);
  }
  return std::sqrt(num / den);
}
}  // namespace

TEST_CASE("mass mode and conservation at m = 0") {
  ModeOptions opt;
  opt.cells = 400;
  const OperatorMatrix op = assemble_mode_operator(0, profile(), opt);
  const SpectrumReport rep = spectrum(op);
  double smallest = 1e300;
  for (const auto& z : rep.eigenvalues) smallest = std::min(smallest, std::abs(z));
  CHECK(smallest < 1e-6);
  const Eigen::MatrixXd a = op.unconjugated();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += op.weights[i] * a(i, j);
    CHECK(std::abs(s) < 1e-8);
  }
}

TEST_CASE("deflation removes only the mass mode") {
  ModeOptions opt;
  opt.cells = 400;
  const SpectrumReport full = spectrum(assemble_mode_operator(0, profile(), opt));
  opt.deflate = true;
  const SpectrumReport defl = spectrum(assemble_mode_operator(0, profile(), opt));
  CHECK(defl.eigenvalues.size() + 1 == full.eigenvalues.size());
  CHECK(defl.gap == doctest::Approx(full.gap).epsilon(1e-6));
  CHECK(defl.gap > 0.9);
}

TEST_CASE("leading eigenvalues per mode are grid stable") {
  for (int m : {1, 2}) {
    ModeOptions coarse, fine;
    coarse.cells = 300;
    fine.cells = 600;
    const SpectrumReport a = spectrum(assemble_mode_operator(m, profile(), coarse));
    const SpectrumReport b = spectrum(assemble_mode_operator(m, profile(), fine));
    CHECK(spectral_drift(b, a, -2.0) < 1e-3);
    CHECK(b.gap > 0.9);
  }
  ModeOptions opt;
  opt.cells = 600;
  // translation mode sits near -mu
  CHECK(spectrum(assemble_mode_operator(1, profile(), opt)).eigenvalues.front().real() ==
        doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("radial block matches the planar operator, m = 0") {
  CHECK(cross_check(0, 8.0, 256) < 1e-6);
}

TEST_CASE("radial block matches the planar operator, m = 2") {
  // the planar side carries periodic-image error of order L^-3
  CHECK(cross_check(2, 32.0, 512) < 5e-6);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(assemble_mode_operator(-1, profile()), ConfigError);
  ModeOptions opt;
  opt.cells = 50;
  opt.deflate = true;
  CHECK_THROWS_AS(assemble_mode_operator(1, profile(), opt), ConfigError);
}
