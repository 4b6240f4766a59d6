#include "kssim/fieldops.hpp"
#include "kssim/norms.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace kssim;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("potential gradient inverts the Laplacian") {
  const GridPtr g = make_planar_grid(10.0, 128);
  const Field phi = Field::from_function(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
  const VecField out = potential_gradient(laplacian(phi));
  const VecField expect = gradient(phi);
  CHECK(sup_norm(out.x1 + expect.x1) < 1e-8);
  CHECK(sup_norm(out.x2 + expect.x2) < 1e-8);
}

TEST_CASE("radial mean-zero density against the radial Poisson oracle") {
  // g = (1 - r^2) e^{-r^2}: int_0^r g t dt = r^2 e^{-r^2} / 2
  const GridPtr g = make_planar_grid(10.0, 128);
  const Field dens = Field::from_function(g, [](double x, double y) {
    const double r2 = x * x + y * y;
    return (1.0 - r2) * std::exp(-r2);
  });
  const VecField out = potential_gradient(dens);
  const Field expect = Field::from_function(g, [](double x, double y) { return -0.5 * x * std::exp(-(x * x + y * y)); });
  CHECK(sup_norm(out.x1 - expect) < 1e-7);
}

TEST_CASE("Poisson multiplier identities") {
  const GridPtr g = make_planar_grid(12.0, 128);
  const Field dens = SampleBank(3, 1).sample(0, g);
  const VecField grad = potential_gradient(dens);
  // curl free
  CHECK(sup_norm(derivative(grad.x2, 0) - derivative(grad.x1, 1)) < 1e-10);
  // -Laplacian of the potential returns the density
  CHECK(sup_norm(laplacian(newtonian_potential(dens)) + dens) < 1e-10 * sup_norm(dens));
  // |grad kappa * g|_{H1 dot} = |g^|_{L2}
  const double lhs = std::hypot(homogeneous_norm(grad.x1, 1.0), homogeneous_norm(grad.x2, 1.0));
  CHECK(lhs == doctest::Approx(homogeneous_norm(dens, 0.0)).epsilon(1e-12));
  // divergence form round trip
  CHECK(sup_norm(potential_divergence(gradient(dens)) + dens) < 1e-10 * sup_norm(dens));
}

TEST_CASE("potential gradient is linear") {
  const GridPtr g = make_planar_grid(12.0, 64);
  const SampleBank bank(5, 2);
  const Field a = bank.sample(0, g), b = bank.sample(1, g);
  const VecField lhs = potential_gradient(2.0 * a + (-3.0) * b);
  const VecField ga = potential_gradient(a), gb = potential_gradient(b);
  CHECK(sup_norm(lhs.x1 - (2.0 * ga.x1 + (-3.0) * gb.x1)) < 1e-12);
}

TEST_CASE("sample banks are reproducible and mean-zero on request") {
  const GridPtr g = make_planar_grid(12.0, 64);
  const SampleBank a(11, 4), b(11, 4), c(12, 4);
  CHECK(sup_norm(a.sample(2, g) - b.sample(2, g)) == 0.0);
  CHECK(sup_norm(a.sample(2, g) - c.sample(2, g)) > 0.0);
  for (const Field& f : a.generate(g)) CHECK(std::abs(integral(f)) < 1e-12 * lp_norm(f, 1.0));
  SampleRecipe r;
  r.mean_zero = false;
  CHECK(std::abs(integral(SampleBank(11, 1, r).sample(0, g))) > 1e-3);
}

TEST_CASE("Poisson estimates on a bank") {
  const GridPtr g = make_planar_grid(16.0, 128);
  const auto bank = SampleBank(21, 20).generate(g);
  const auto reps = check_poisson_estimates(bank, 4.0, 0.5, 4.0);
  REQUIRE(reps.size() == 4);
  for (const auto& r : reps) CHECK(r.pass);
  CHECK(reps[0].constants.at("max_ratio") == doctest::Approx(2.0 * pi).epsilon(1e-12));
  CHECK_THROWS(check_poisson_estimates(bank, 2.0, 0.5, 4.0));
  CHECK_THROWS(check_poisson_estimates(bank, 4.0, 1.5, 4.0));
}

TEST_CASE("Ladyzhenskaya ratio is dilation invariant") {
  const GridPtr g = make_planar_grid(16.0, 256);
  double ref = 0.0;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const Field f = Field::from_function(g, [lambda](double x, double y) {
      return std::exp(-lambda * lambda * (x * x + y * y));
    });
    const double r = ladyzhenskaya_ratio(f);
    if (ref == 0.0) ref = r;
    CHECK(r == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("interpolation inequality holds with constant one") {
  const GridPtr g = make_planar_grid(16.0, 128);
  const auto reps = check_ladyzhenskaya_and_interp(SampleBank(8, 20).generate(g), 7);
  for (const auto& r : reps) CHECK(r.pass);
  CHECK(reps[1].constants.at("max_ratio") <= 1.0 + 1e-10);
}

TEST_CASE("nonzero mass breaks the weighted L2 Poisson bound only slowly") {
  const GrowthReport rep = nonzero_mass_poisson_growth(8.0, 64, 2, 4.0);
  REQUIRE(rep.ratios.size() == 3);
  CHECK(rep.ratios[1] > rep.ratios[0]);
  CHECK(rep.ratios[2] > rep.ratios[1]);
  CHECK(rep.min_growth > 1.05);
}

TEST_CASE("truncation monitoring") {
  const GridPtr g = make_planar_grid(4.0, 64);
  const Field wide = Field::from_function(g, [](double x, double y) { return std::exp(-0.05 * (x * x + y * y)); });
  CHECK(potential_gradient_checked(wide).truncation_warning);
  const Field narrow = Field::from_function(g, [](double x, double y) { return std::exp(-4.0 * (x * x + y * y)); });
  CHECK_FALSE(potential_gradient_checked(narrow).truncation_warning);
  CHECK(outside_fraction(narrow) < 1e-10);
}
