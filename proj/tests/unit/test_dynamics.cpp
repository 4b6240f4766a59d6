#include "kssim/dynamics.hpp"
#include "kssim/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace kssim;

namespace {

const LinearizedSystem& system() {
  static const LinearizedSystem sys = [] {
    ModelParams p;
    p.time_scale = 0.02;
    const double L = default_dynamics_half_width(p.drift);
    return make_linearized_system(p, solve_profile(p, profile_grid_for(p, L)), make_planar_grid(L, 64));
  }();
  return sys;
}

double state_distance(const State& a, const State& b) {
  return l2_norm(a.density - b.density) + l2_norm(a.chem - b.chem);
}

State run(const State& init, Scheme scheme, double dt, double t_end) {
  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.scheme = scheme;
  cfg.coupling = Coupling::Linear;
  return evolve(init, system(), cfg).final_state;
}

}  // namespace

TEST_CASE("initial state has the requested X norm") {
  const auto& sys = system();
  const State st = make_initial_state(sys.grid, sys.params, 42, 1e-3);
  CHECK(state_norms(st, sys.params).x_norm == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(std::abs(integral(st.density)) < 1e-12);
}

TEST_CASE("zero state is stationary") {
  const auto& sys = system();
  const State zero = zero_state(sys.grid);
  for (Coupling c : {Coupling::Full, Coupling::Linear, Coupling::DensityOnly}) {
    const State r = rhs(zero, sys, c);
    CHECK(sup_norm(r.density) == 0.0);
    CHECK(sup_norm(r.chem) == 0.0);
  }
}

TEST_CASE("bilinear part scales quadratically") {
  const auto& sys = system();
  const State st = make_initial_state(sys.grid, sys.params, 3, 1e-2);
  auto bilinear = [&](double c) {
    const State s = scale_state(st, c);
    const State full = rhs(s, sys, Coupling::Full);
    const State lin = rhs(s, sys, Coupling::Linear);
    return l2_norm(full.density - lin.density) + l2_norm(full.chem - lin.chem);
  };
  const double slope = std::log2(bilinear(2.0) / bilinear(1.0));
  CHECK(slope == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("full evolution conserves mass") {
  const auto& sys = system();
  EvolveConfig cfg;
  cfg.t_end = 0.5;
  const Trajectory t = evolve(make_initial_state(sys.grid, sys.params, 42, 1e-3), sys, cfg);
  REQUIRE(t.stable);
  for (double m : t.mass) CHECK(std::abs(m) < 1e-12);
}

TEST_CASE("time step guard") {
  const auto& p = system().params;
  EvolveConfig cfg;
  cfg.dt = 0.01;
  CHECK_THROWS_AS(cfg.validate(p), ConfigError);
  cfg.override_dt_guard = true;
  CHECK_NOTHROW(cfg.validate(p));
  cfg = EvolveConfig{};
  cfg.record_every = 0;
  CHECK_THROWS_AS(cfg.validate(p), ConfigError);
}

TEST_CASE("scheme orders") {
  const auto& sys = system();
  const State init = make_initial_state(sys.grid, sys.params, 42, 1e-3);
  const double t_end = 0.2;
  for (auto [scheme, order] : {std::pair{Scheme::ImexEuler, 1.0}, std::pair{Scheme::ImexBdf2, 2.0}}) {
    const State a = run(init, scheme, 2e-3, t_end);
    const State b = run(init, scheme, 1e-3, t_end);
    const State c = run(init, scheme, 5e-4, t_end);
    const double observed = std::log2(state_distance(a, b) / state_distance(b, c));
    CHECK(observed == doctest::Approx(order).epsilon(0.15));
  }
}

TEST_CASE("decay fit") {
  std::vector<double> t, v;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(0.5 * i);
    v.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  const DecayFit f = fit_decay(t, v, 1.0, 9.0);
  CHECK(f.rate == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.valid);
  CHECK(f.residual < 1e-12);

  CHECK_THROWS_AS(fit_decay(t, v, 20.0, 30.0), ConfigError);
  v[5] = 0.0;
  CHECK_THROWS_AS(fit_decay(t, v, 0.0, 10.0), NumericalError);
  v.pop_back();
  CHECK_THROWS_AS(fit_decay(t, v, 0.0, 10.0), ConfigError);
}

TEST_CASE("threshold search rejects a zero direction") {
  const auto& sys = system();
  CHECK_THROWS_AS(threshold_search(sys, EvolveConfig{}, zero_state(sys.grid), 1e-3, 1e-1), ConfigError);
  const State st = make_initial_state(sys.grid, sys.params, 42, 1e-3);
  CHECK_THROWS_AS(threshold_search(sys, EvolveConfig{}, st, 1e-1, 1e-3), ConfigError);
}
