#include "kssim/bounds.hpp"
#include "kssim/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace kssim;

namespace {
RadialProfile solve(double mu, double eps) {
  ModelParams p;
  p.drift = mu;
  p.time_scale = eps;
  return solve_profile(p, profile_grid_for(p, default_box_half_width(mu)));
}

const BoundReport& find(const std::vector<BoundReport>& v, const std::string& id) {
  auto it = std::find_if(v.begin(), v.end(), [&](const BoundReport& r) { return r.id == id; });
  REQUIRE(it != v.end());
  return *it;
}
}  // namespace

TEST_CASE("sandwich holds for small eps and a shift close to one") {
  const RadialProfile prof = solve(1.0, 0.005);
  for (const auto& r : check_profile_sandwich(prof, closed_form_limit(prof.grid), 0.95)) {
    CAPTURE(r.id);
    CHECK(r.pass);
    CHECK(r.worst_margin >= -bound_slack);
  }
}

TEST_CASE("sandwich with a small shift fails where the shift matters") {
  const RadialProfile prof = solve(1.0, 0.005);
  const auto reps = check_profile_sandwich(prof, closed_form_limit(prof.grid), 0.05);
  CHECK_FALSE(find(reps, "potential.shifted_upper").pass);
  CHECK_FALSE(find(reps, "radial_derivative.lower").pass);
  CHECK(find(reps, "potential.negative").pass);
}

TEST_CASE("uniform bounds produce finite constants") {
  const RadialProfile prof = solve(1.0, 0.02);
  const auto reps = check_uniform_bounds(prof, 0.9);
  for (const auto& r : reps) {
    CAPTURE(r.id);
    CHECK(r.pass);
    for (const auto& [name, v] : r.constants) CHECK(std::isfinite(v));
  }
  CHECK(find(reps, "density.gaussian_envelope").constants.at("C0") > 0.0);
}

TEST_CASE("fitted constants are stable under radial refinement") {
  ModelParams p;
  p.time_scale = 0.02;
  const double r_max = profile_grid_for(p, 16.0).r_max;
  const auto coarse = check_uniform_bounds(solve_profile(p, make_radial_grid(r_max, 4000)), 0.9);
  const auto fine = check_uniform_bounds(solve_profile(p, make_radial_grid(r_max, 8000)), 0.9);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    for (const auto& [name, v] : coarse[i].constants) {
      const double w = fine[i].constants.at(name);
      CAPTURE(name);
      CHECK(std::abs(v - w) <= 0.01 * std::max(std::abs(v), 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("deviation from the limit profile shrinks with eps") {
  const RadialProfile lim = solve(1.0, 0.0);
  const auto a = profile_deviation(solve(1.0, 0.02), lim, 0.9);
  const auto b = profile_deviation(solve(1.0, 0.01), lim, 0.9);
  CHECK(b.density < a.density);
  CHECK(b.grad_potential < a.grad_potential);
  const auto self = profile_deviation(lim, lim, 0.9);
  CHECK(self.density == 0.0);
}

TEST_CASE("convergence study validates its eps list") {
  const RadialGrid g = make_radial_grid(20.0, 2000);
  CHECK_THROWS_AS(eps_convergence_study(1.0, {0.02, 0.01}, g), ConfigError);
  CHECK_THROWS_AS(eps_convergence_study(1.0, {0.01, 0.02, 0.005}, g), ConfigError);
  CHECK_THROWS_AS(eps_convergence_study(1.0, {0.1, 0.02, 0.01}, g), ConfigError);
}

TEST_CASE("line fit") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.max_residual < 1e-14);
}
