#include "kssim/planar.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace kssim;

namespace {
constexpr double pi = std::numbers::pi;

Field gaussian(const GridPtr& g, double width = 1.0) {
  return Field::from_function(g, [width](double x, double y) { return std::exp(-0.5 * (x * x + y * y) / (width * width)); });
}

double max_diff(const Field& a, const Field& b) { return sup_norm(a - b); }
}  // namespace

TEST_CASE("grid geometry") {
  const GridPtr g = make_planar_grid(8.0, 64);
  CHECK(g->dx() == doctest::Approx(0.25));
  CHECK(g->dxi() == doctest::Approx(pi / 8.0));
  CHECK(g->x1()[0] == doctest::Approx(-8.0));
  CHECK(g->real_size() == 64u * 64u);
  CHECK(g->spec_size() == 64u * 33u);
}

TEST_CASE("Gaussian integral and zero mode") {
  const GridPtr g = make_planar_grid(12.0, 96);
  const Field f = gaussian(g, 1.3);
  const double exact = 2.0 * pi * 1.3 * 1.3;
  CHECK(integral(f) == doctest::Approx(exact).epsilon(1e-13));
  CHECK(f.spectrum()[0].real() * g->dx() * g->dx() == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("forward and inverse transforms round-trip") {
  const GridPtr g = make_planar_grid(10.0, 64);
  const Field f = Field::from_function(g, [](double x, double y) { return std::exp(-(x - 1) * (x - 1) - y * y) * (1 + x * y); });
  const Field back = Field::from_spectrum(g, f.spectrum());
  CHECK(max_diff(f, back) < 1e-14);
}

TEST_CASE("spectral derivatives of a Gaussian") {
  const GridPtr g = make_planar_grid(12.0, 128);
  const Field f = gaussian(g);
  const VecField grad = gradient(f);
  const Field dx_exact = Field::from_function(g, [](double x, double y) { return -x * std::exp(-0.5 * (x * x + y * y)); });
  const Field lap_exact =
      Field::from_function(g, [](double x, double y) { return (x * x + y * y - 2.0) * std::exp(-0.5 * (x * x + y * y)); });
  CHECK(max_diff(grad.x1, dx_exact) < 1e-12);
  CHECK(max_diff(laplacian(f), lap_exact) < 1e-11);
  CHECK(max_diff(divergence(grad), lap_exact) < 1e-11);
}

TEST_CASE("band limiting is a projection") {
  const GridPtr g = make_planar_grid(6.0, 64);
  const Field f = Field::from_function(g, [](double x, double y) { return std::exp(-4 * (x * x + y * y)); });
  const Field once = band_limited(f);
  CHECK(max_diff(band_limited(once), once) < 1e-15);
  CHECK(max_diff(once, f) > 1e-6);
}

TEST_CASE("arithmetic keeps the grid and invalidates spectra") {
  const GridPtr g = make_planar_grid(6.0, 32);
  Field a = gaussian(g);
  const double s0 = a.spectrum()[0].real();
  a *= 2.0;
  CHECK(a.spectrum()[0].real() == doctest::Approx(2.0 * s0));
  const Field b = a - 2.0 * gaussian(g);
  CHECK(sup_norm(b) == 0.0);
  CHECK(all_finite(a));
  CHECK(product(a, a).values()[0] == doctest::Approx(a.values()[0] * a.values()[0]));
}

TEST_CASE("zero state") {
  const GridPtr g = make_planar_grid(6.0, 32);
  const State z = zero_state(g);
  CHECK(sup_norm(z.density) == 0.0);
  CHECK(sup_norm(z.chem) == 0.0);
}
