#include "kssim/errors.hpp"
#include "kssim/fieldops.hpp"
#include "kssim/linops.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace kssim;

namespace {

ModelParams params(double eps) {
  ModelParams p;
  p.time_scale = eps;
  return p;
}

const LinearizedSystem& system() {
  static const LinearizedSystem sys = [] {
    const ModelParams p = params(0.02);
    const double L = default_box_half_width(p.drift);
    return make_linearized_system(p, solve_profile(p, profile_grid_for(p, L)), make_planar_grid(L, 128));
  }();
  return sys;
}

}  // namespace

TEST_CASE("density operator conserves mass") {
  const auto& sys = system();
  for (const Field& g : SampleBank(5, 6).generate(sys.grid)) {
    CHECK(std::abs(integral(density_operator(g, sys))) <= 1e-9 * l2_norm(g));
  }
}

TEST_CASE("density inputs must be mean zero") {
  const auto& sys = system();
  SampleRecipe recipe;
  recipe.mean_zero = false;
  const Field g = SampleBank(5, 1, recipe).sample(0, sys.grid);
  CHECK_THROWS_AS(density_operator(g, sys), ContractViolation);
  CHECK_THROWS_AS(density_to_chem(g, sys), ContractViolation);
}

TEST_CASE("constants are in the kernel of the chem-to-density block") {
  const auto& sys = system();
  const Field one = Field::from_function(sys.grid, [](double, double) { return 1.0; });
  CHECK(sup_norm(chem_to_density(one, sys)) < 1e-12);
}

TEST_CASE("chem H1 energy identity") {
  const auto& sys = system();
  SampleRecipe recipe;
  recipe.mean_zero = false;
  for (const Field& w : SampleBank(9, 4, recipe).generate(sys.grid)) {
    CHECK(chem_h1_identity(w, sys).relative_defect() < 1e-10);
  }
}

TEST_CASE("heat-only system reduces to the Laplacian") {
  const GridPtr grid = make_planar_grid(10.0, 64);
  const LinearizedSystem sys = heat_only_system(grid, 0.02);
  const Field g = SampleBank(2, 1).sample(0, grid);
  CHECK(sup_norm(density_operator(g, sys) - laplacian(g)) < 1e-12);
}

TEST_CASE("split operator with zero level is the density operator") {
  LinearizedSystem sys = system();
  set_split(sys, 0.0, 2.0);
  const Field g = SampleBank(3, 1).sample(0, sys.grid);
  CHECK(sup_norm(split_operator(g, sys) - density_operator(g, sys)) == 0.0);
  CHECK_THROWS_AS(set_split(sys, 1.0, 0.5), ConfigError);
}

TEST_CASE("cutoff profile") {
  CHECK(cutoff_profile(0.0) == 1.0);
  CHECK(cutoff_profile(1.0) == 1.0);
  CHECK(cutoff_profile(2.0) == 0.0);
  CHECK(cutoff_profile(3.0) == 0.0);
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.05) {
    const double v = cutoff_profile(r);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("operator gap to the eps = 0 system shrinks with eps") {
  const ModelParams p0 = params(0.0);
  const double L = default_box_half_width(1.0);
  const GridPtr grid = make_planar_grid(L, 128);
  const LinearizedSystem limit = make_linearized_system(p0, solve_profile(p0, profile_grid_for(p0, L)), grid);
  const auto bank = SampleBank(4, 5).generate(grid);
  std::vector<double> gaps;
  for (double eps : {0.04, 0.02, 0.01}) {
    const ModelParams p = params(eps);
    const LinearizedSystem sys = make_linearized_system(p, solve_profile(p, profile_grid_for(p, L)), grid);
    gaps.push_back(operator_gap_ratio(bank, sys, limit));
  }
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < gaps[1]);
  CHECK(std::log2(gaps[0] / gaps[2]) / 2.0 >= 0.4);
}

TEST_CASE("chem Hs local identity on a Gaussian") {
  const auto& sys = system();
  const Field w = Field::from_function(sys.grid, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); });
  CHECK(chem_hs_local_identity(w, sys, 0.5).relative_defect() < 1e-6);
}

TEST_CASE("chem Hs dissipation at small eps") {
  const ModelParams p = params(0.01);
  const double L = default_box_half_width(p.drift);
  const LinearizedSystem sys =
      make_linearized_system(p, solve_profile(p, profile_grid_for(p, L)), make_planar_grid(L, 128));
  SampleRecipe recipe;
  recipe.mean_zero = false;
  const double rate = 0.5 * p.drift * (1.0 - 0.5);
  for (const Field& w : SampleBank(13, 50, recipe).generate(sys.grid)) {
    CHECK(chem_hs_dissipation(w, sys, 0.5, rate).holds);
  }
  const HsDissipation zero = chem_hs_dissipation(Field(sys.grid), sys, 0.5, rate);
  CHECK(zero.form == 0.0);
}

TEST_CASE("chem-to-density ratio under dilation") {
  // N = 128 under-resolves the lambda = 2 sample
  const ModelParams p = params(0.02);
  const double L = default_box_half_width(p.drift);
  const LinearizedSystem sys =
      make_linearized_system(p, solve_profile(p, profile_grid_for(p, L)), make_planar_grid(L, 256));
  const Field one = Field::from_function(sys.grid, [](double, double) { return 1.0; });
  CHECK(chem_to_density_ratio(one, sys, 0.5, 4.0) == 0.0);
  std::vector<double> ratios;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const Field w = Field::from_function(sys.grid, [lambda](double x, double y) {
      const double u = lambda * (x - 0.7), v = lambda * (y + 0.3);
      return (1.0 + u) * std::exp(-(u * u + v * v));
    });
    ratios.push_back(chem_to_density_ratio(w, sys, 0.5, 4.0));
  }
  for (double r : ratios) {
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
  }
  CHECK(*std::max_element(ratios.begin(), ratios.end()) < 2.0 * *std::min_element(ratios.begin(), ratios.end()));
}
