#include "kssim/radial.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace kssim;

TEST_CASE("grid layout") {
  const RadialGrid g = make_radial_grid(5.0, 100);
  CHECK(g.size() == 101);
  CHECK(g.h == doctest::Approx(0.05));
  CHECK(g.r.back() == doctest::Approx(5.0));
}

TEST_CASE("Simpson weights integrate cubics exactly") {
  const RadialGrid g = make_radial_grid(2.0, 16);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = 1.0 + g.r[i] * g.r[i] * g.r[i];
  CHECK(g.integrate(f) == doctest::Approx(2.0 + 4.0).epsilon(1e-14));
}

TEST_CASE("integrate_r of a Gaussian") {
  const RadialGrid g = make_radial_grid(12.0, 2400);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::exp(-g.r[i] * g.r[i]);
  CHECK(g.integrate_r(f) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("cumulative integral is sixth order") {
  auto err = [](int n) {
    const RadialGrid g = make_radial_grid(3.0, n);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::cos(g.r[i]);
    const auto c = cumulative_integral(f, g.h, Parity::Even);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(c[i] - std::sin(g.r[i])));
    return e;
  };
  const double coarse = err(30);
  const double fine = err(60);
  CHECK(fine < 1e-9);
  CHECK(std::log2(coarse / fine) > 5.5);
}

TEST_CASE("interpolation honours parity") {
  const RadialGrid g = make_radial_grid(4.0, 400);
  std::vector<double> s(g.size()), c(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    s[i] = std::sin(g.r[i]);
    c[i] = std::cos(g.r[i]);
  }
  for (double x : {0.003, 0.0171, 1.2345, 3.99}) {
    CHECK(interpolate_uniform(s, g.h, Parity::Odd, x) == doctest::Approx(std::sin(x)).epsilon(1e-11));
    CHECK(interpolate_uniform(c, g.h, Parity::Even, x) == doctest::Approx(std::cos(x)).epsilon(1e-11));
  }
}

TEST_CASE("Lagrange interval weights") {
  const std::vector<double> two{0.0, 1.0};
  const auto w = lagrange_interval_weights(two, 0.0, 1.0);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
  // Simpson from three points
  const std::vector<double> three{0.0, 1.0, 2.0};
  const auto s = lagrange_interval_weights(three, 0.0, 2.0);
  CHECK(s[0] == doctest::Approx(1.0 / 3));
  CHECK(s[1] == doctest::Approx(4.0 / 3));
  CHECK(s[2] == doctest::Approx(1.0 / 3));
}

TEST_CASE("tail check flags slowly decaying integrands") {
  const RadialGrid g = make_radial_grid(10.0, 1000);
  std::vector<double> fast(g.size()), slow(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    fast[i] = std::exp(-g.r[i] * g.r[i]);
    slow[i] = std::exp(-0.3 * g.r[i]);
  }
  CHECK_FALSE(integrate_with_tail_check(g, fast).warning);
  CHECK(integrate_with_tail_check(g, slow).warning);
}
