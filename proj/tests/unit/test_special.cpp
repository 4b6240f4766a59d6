#include "kssim/special.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace kssim;

// Reference values from mpmath at 30 digits.
TEST_CASE("dirichlet beta against frozen values") {
  CHECK(dirichlet_beta(0.5) == doctest::Approx(0.66769145718960921).epsilon(1e-13));
  CHECK(dirichlet_beta(2.0) == doctest::Approx(0.91596559417721901).epsilon(1e-13));
  CHECK(dirichlet_beta(-0.5) == doctest::Approx(0.27517974122882027).epsilon(1e-12));
  CHECK(dirichlet_beta(-1.5) == doctest::Approx(-0.28834656450840634).epsilon(1e-12));
  CHECK(dirichlet_beta(-2.25) == doctest::Approx(-0.5297415606854784).epsilon(1e-12));
}

TEST_CASE("dirichlet beta closed forms") {
  CHECK(dirichlet_beta(1.0) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(dirichlet_beta(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dirichlet_beta(-1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("square lattice zeta against frozen values") {
  CHECK(square_lattice_zeta(-1.0) == doctest::Approx(-0.22882431037721898).epsilon(1e-12));
  CHECK(square_lattice_zeta(-3.0) == doctest::Approx(0.029394281642946003).epsilon(1e-12));
  CHECK(square_lattice_zeta(-0.5) == doctest::Approx(-0.50604560942922217).epsilon(1e-12));
  CHECK(square_lattice_zeta(-2.5) == doctest::Approx(0.028686835965415849).epsilon(1e-12));
  CHECK(square_lattice_zeta(1.5) == doctest::Approx(-10.077559478793152).epsilon(1e-12));
}

TEST_CASE("square lattice zeta trivial values") {
  CHECK(square_lattice_zeta(0.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(square_lattice_zeta(-2.0)) < 1e-14);
}
