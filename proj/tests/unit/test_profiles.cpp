#include "kssim/errors.hpp"
#include "kssim/profiles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace kssim;

namespace {
ModelParams params(double mu, double eps) {
  ModelParams p;
  p.drift = mu;
  p.time_scale = eps;
  return p;
}

RadialProfile solve(double mu, double eps) {
  const ModelParams p = params(mu, eps);
  return solve_profile(p, profile_grid_for(p, default_box_half_width(mu)));
}

double at(const RadialProfile& prof, const std::vector<double>& f, double r, Parity parity) {
  return interpolate_uniform(f, prof.grid.h, parity, r);
}
}  // namespace

// Oracle: scipy DOP853 shooting on the radial ODE with rtol 1e-13, started
// from the Taylor expansion at r = 1e-4 (independent of the fixed-point map).
TEST_CASE("profiles against the shooting oracle") {
  struct Ref {
    double mu, eps, mass, p_at_1, dp_at_2;
  };
  for (const Ref& ref : {Ref{0.5, 0.005, 17.830575257762, -1.331026666108, -1.334184306712},
                         Ref{1.0, 0.005, 14.699004988896, -1.279520583579, -1.135278418049},
                         Ref{1.0, 0.02, 14.736001381988, -1.277281404479, -1.109994703952},
                         Ref{2.0, 0.02, 11.147031826235, -1.182439387244, -0.824997739792},
                         Ref{1.0, 0.0, 14.686693273878, -1.280268693755, -1.143850560685}}) {
    CAPTURE(ref.mu);
    CAPTURE(ref.eps);
    const RadialProfile prof = solve(ref.mu, ref.eps);
    CHECK(profile_mass(prof) == doctest::Approx(ref.mass).epsilon(1e-9));
    CHECK(at(prof, prof.potential, 1.0, Parity::Even) == doctest::Approx(ref.p_at_1).epsilon(1e-10));
    CHECK(at(prof, prof.dpotential, 2.0, Parity::Odd) == doctest::Approx(ref.dp_at_2).epsilon(1e-10));
  }
}

TEST_CASE("density at the origin and residual") {
  const RadialProfile prof = solve(1.0, 0.02);
  CHECK(prof.density[0] == 8.0);
  CHECK(prof.potential[0] == 0.0);
  CHECK(prof.residual <= 1e-11);
  CHECK(prof.iterations < 50);
}

TEST_CASE("quartic Taylor coefficient") {
  for (double mu : {0.5, 1.0, 2.0}) {
    const RadialProfile prof = solve(mu, 0.02);
    CHECK(quartic_coefficient(prof) == doctest::Approx(1.0 + 0.25 * mu * 1.02).epsilon(1e-4));
  }
}

TEST_CASE("stationary equation holds pointwise") {
  const RadialProfile prof = solve(1.0, 0.02);
  for (std::size_t i = 1; i < prof.grid.size(); i += 97) {
    const double r = prof.grid.r[i];
    const double rhs = -prof.density[i] - prof.params.drift * prof.params.time_scale * r * prof.dpotential[i];
    CHECK(prof.lap_potential[i] == doctest::Approx(rhs).epsilon(1e-12));
    const double q = 8.0 * std::exp(prof.potential[i] - 0.5 * prof.params.drift * r * r);
    CHECK(prof.density[i] == doctest::Approx(q).epsilon(1e-13));
  }
}

TEST_CASE("closed form limit") {
  const RadialGrid g = make_radial_grid(10.0, 1000);
  const RadialProfile lim = closed_form_limit(g);
  for (std::size_t i = 0; i < g.size(); i += 111) {
    const double r = g.r[i];
    CHECK(lim.potential[i] == doctest::Approx(-2.0 * std::log1p(r * r)));
    CHECK(lim.density[i] == doctest::Approx(8.0 / ((1 + r * r) * (1 + r * r))));
  }
  // mass 8 pi minus the tail beyond r_max
  CHECK(profile_mass(lim) == doctest::Approx(8.0 * std::numbers::pi * 100.0 / 101.0).epsilon(1e-8));
}

TEST_CASE("mass decreases with the drift") {
  double prev = 8.0 * std::numbers::pi;
  for (double mu : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double m = profile_mass(solve(mu, 0.01));
    CHECK(m < prev);
    CHECK(m > 0.0);
    prev = m;
  }
}

TEST_CASE("lifting to the plane") {
  const ModelParams p = params(1.0, 0.02);
  const GridPtr grid = make_planar_grid(8.0, 64);
  const RadialProfile prof = solve_profile(p, profile_grid_for(p, 8.0));
  const PlanarProfile lifted = lift_to_plane(prof, grid);
  const auto q = lifted.density.values();
  const auto r2 = grid->radius_sq();
  for (std::size_t i = 0; i < q.size(); i += 301) {
    const double r = std::sqrt(r2[i]);
    CHECK(q[i] == doctest::Approx(at(prof, prof.density, r, Parity::Even)).epsilon(1e-14));
  }
  const RadialProfile short_prof = solve_profile(p, make_radial_grid(9.0, 900));
  CHECK_THROWS_AS(lift_to_plane(short_prof, grid), DomainCoverageError);
}

TEST_CASE("solver reports divergence") {
  const ModelParams p = params(1.0, 0.02);
  ProfileOptions opt;
  opt.max_iterations = 2;
  CHECK_THROWS_AS(solve_profile(p, profile_grid_for(p, 16.0), opt), DivergenceError);
}
