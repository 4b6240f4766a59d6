#include "kssim/errors.hpp"
#include "kssim/params.hpp"

#include <doctest.h>

#include <cmath>

using namespace kssim;

TEST_CASE("defaults validate") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.max_rate() == doctest::Approx(0.5));
}

TEST_CASE("invalid parameters are rejected") {
  auto bad = [](auto edit) {
    ModelParams p;
    edit(p);
    CHECK_THROWS_AS(p.validate(), ConfigError);
  };
  bad([](ModelParams& p) { p.drift = 0.0; });
  bad([](ModelParams& p) { p.time_scale = -1e-3; });
  bad([](ModelParams& p) { p.weight_power = 3.0; });
  bad([](ModelParams& p) { p.sobolev_index = 1.0; });
  bad([](ModelParams& p) { p.sobolev_index = 0.0; });
  bad([](ModelParams& p) { p.target_rate = 0.5; });
  bad([](ModelParams& p) { p.drift = std::nan(""); });
}

TEST_CASE("target rate below the admissible bound is accepted") {
  ModelParams p;
  p.target_rate = 0.49;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("box defaults scale with the drift length") {
  CHECK(default_box_half_width(1.0) == doctest::Approx(16.0));
  CHECK(default_box_half_width(4.0) == doctest::Approx(8.0));
  CHECK(default_dynamics_half_width(1.0) == doctest::Approx(10.0));
}
