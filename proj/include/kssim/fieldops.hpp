#pragma once

#include "kssim/bounds.hpp"
#include "kssim/planar.hpp"

#include <cstdint>
#include <vector>

namespace kssim {

// grad of the Newtonian potential, i xi g^ / |xi|^2 with the zero mode
// dropped (so only the mean-free part of g is seen).
VecField potential_gradient(const Field& g);

struct CheckedPotentialGradient {
  VecField value;
  double outside_fraction = 0.0;  // share of int |g| in |x| > 0.8 L
  bool truncation_warning = false;
};

CheckedPotentialGradient potential_gradient_checked(const Field& g);

// The potential itself (mean-free part), so that -lap(potential) = g - mean.
Field newtonian_potential(const Field& g);

// sum_j (d_j kappa) * v_j, i.e. the potential of div v.
Field potential_divergence(const VecField& v);

// share of int |f| outside the disc of radius fraction * L
double outside_fraction(const Field& f, double fraction = 0.8);

struct SampleRecipe {
  int bumps = 3;
  bool mean_zero = true;
  bool radial = false;        // all bumps centred at the origin
  double center_radius = 1.5;
  double width_min = 0.9;     // Gaussian standard deviations
  double width_max = 1.4;
  double dipole = 0.0;        // weight of an added x1-dipole
};

// Seeded Gaussian mixtures, band limited to the 2/3 band; sample i depends
// only on (seed, i, recipe), so a larger bank extends a smaller one.
class SampleBank {
 public:
  SampleBank(std::uint64_t seed, int count, SampleRecipe recipe = {});

  std::uint64_t seed() const { return seed_; }
  int count() const { return count_; }
  const SampleRecipe& recipe() const { return recipe_; }

  Field sample(int index, const GridPtr& grid) const;
  std::vector<Field> generate(const GridPtr& grid) const;

 private:
  std::uint64_t seed_;
  int count_;
  SampleRecipe recipe_;
};

// Max over the bank of each ratio; pass means finite. Ids:
//   poisson.hdot1     |grad kappa*g|_{H^1} / |g|_{L2}      (equals 2 pi)
//   poisson.hdot_sigma |.|_{H^sigma} / (|g|_{L1} + |g|_{L2})
//   poisson.l2_weighted |.|_{L2} / |g|_{L2_k}   (mean-zero samples only)
//   poisson.lp        |.|_{L^p} / |g|_{L^q_k}
std::vector<BoundReport> check_poisson_estimates(const std::vector<Field>& bank, double k, double sigma,
                                                 double p, double q = 2.0);

// ladyzhenskaya: |f|_{L4} / (|f|_{L2} |grad f|_{L2})^{1/2}
// interpolation: |f|_{H^s} / (|f|_{H^s0}^{1-t} |f|_{H^s1}^t) on seeded
// index triples; pass requires <= 1 + 1e-10.
std::vector<BoundReport> check_ladyzhenskaya_and_interp(const std::vector<Field>& bank,
                                                        std::uint64_t seed = 7);

double ladyzhenskaya_ratio(const Field& f);

struct GrowthReport {
  std::vector<double> half_widths;
  std::vector<double> ratios;  // |grad kappa*g|_{L2} / |g|_{L2_k}
  double min_growth = 0.0;     // smallest ratio(2L) / ratio(L)
};

// Unit-mass Gaussian (nonzero mean) on boxes L0, 2 L0, ... at fixed dx.
GrowthReport nonzero_mass_poisson_growth(double half_width, int n, int doublings, double k);

}  // namespace kssim
