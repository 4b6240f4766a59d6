#pragma once

#include "kssim/bounds.hpp"
#include "kssim/norms.hpp"
#include "kssim/params.hpp"
#include "kssim/planar.hpp"
#include "kssim/profiles.hpp"

#include <vector>

namespace kssim {

// Planar coefficients of the linearization about a steady profile, plus
// the localized shift level * chi(x / radius) used in the split operator.
struct LinearizedSystem {
  ModelParams params;
  GridPtr grid;
  Field density;        // Q
  Field potential;      // P
  Field lap_potential;  // lap P
  VecField grad_potential;
  double split_level = 0.0;
  double split_radius = 1.0;
  Field cutoff;  // chi(x / split_radius)
};

LinearizedSystem make_linearized_system(const ModelParams& p, const RadialProfile& prof, const GridPtr& grid);

// Zero profile: only diffusion (and no drift) survives.
LinearizedSystem heat_only_system(const GridPtr& grid, double time_scale);

void set_split(LinearizedSystem& sys, double level, double radius);

// Smooth radial step: 1 for |x| <= 1, 0 for |x| >= 2.
double cutoff_profile(double radius);

// Mean-zero guard for density inputs; throws ContractViolation.
void require_mean_zero(const Field& g, const char* who);

// lap g + div(drift x g - g grad P - Q grad kappa*g)
Field density_operator(const Field& g, const LinearizedSystem& sys);
// -div(Q grad w)
Field chem_to_density(const Field& w, const LinearizedSystem& sys);
// g + grad kappa* . [g grad P + Q grad kappa*g]
Field density_to_chem(const Field& g, const LinearizedSystem& sys);
// lap w / eps + drift x . grad w + grad kappa* . [Q grad w]
Field chem_operator(const Field& w, const LinearizedSystem& sys);
// the first two terms of chem_operator
Field chem_operator_local(const Field& w, const LinearizedSystem& sys);
// density_operator minus split_level * cutoff
Field split_operator(const Field& g, const LinearizedSystem& sys);

double pairing_l2k(const Field& a, const Field& b, double k);

struct DissipationTerms {
  double form = 0.0;        // <L g, g>_{L2_k}
  double weighted_sq = 0.0; // |g|_{L2_k}^2
  double gradient_sq = 0.0; // |grad g|_{L2_k}^2
  double local_sq = 0.0;    // |g|_{L2(B_radius)}^2
  // form + drift (k - 2) |g|^2 + |grad g|^2 / 2, the part a local term must absorb
  double excess = 0.0;
};

DissipationTerms dissipation_terms(const Field& g, const LinearizedSystem& sys, double local_radius);

// Empirical constant excess / local_sq maximized over a bank.
double fit_local_constant(const std::vector<Field>& bank, const LinearizedSystem& sys, double local_radius);

struct SplitCheck {
  double form = 0.0;   // <(L - level chi) g, g>_{L2_k}
  double bound = 0.0;  // -drift (k-2) |g|^2 - |grad g|^2 / 2
  double slack = 0.0;  // 1e-9 |g|_{H1_k}^2
  bool holds = false;
};

SplitCheck split_dissipativity(const Field& g, const LinearizedSystem& sys);

// Throws PreconditionError unless the system's split constants dominate
// the fitted ones.
std::vector<SplitCheck> check_split_dissipativity(const std::vector<Field>& bank, const LinearizedSystem& sys,
                                                  double fitted_constant, double fitted_radius);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_defect() const;
};

// <chem_operator w, w>_{H^1} against -|w|_{H^2}^2 / eps - (2 pi)^2 |Q^{1/2} grad w|^2
IdentityCheck chem_h1_identity(const Field& w, const LinearizedSystem& sys);

// <chem_operator_local w, w>_{H^s} against -|w|_{H^{1+s}}^2 / eps - drift (1-s) |w|_{H^s}^2
IdentityCheck chem_hs_local_identity(const Field& w, const LinearizedSystem& sys, double s);

struct HsDissipation {
  double form = 0.0;   // <chem_operator w, w>_{H^s}
  double bound = 0.0;  // -|w|_{H^{s+1}}^2 / (2 eps) - rate |w|_{H^s}^2
  bool holds = false;
};

HsDissipation chem_hs_dissipation(const Field& w, const LinearizedSystem& sys, double s, double rate);

// Max-ratio reports for the off-diagonal blocks:
//   cross.chem_to_density  |L12 w|_{H^-1_k} / |w|_{H^s}^{1-t} |w|_{H^2}^t, t = (1-s)/(2-s)
//   cross.density_to_chem  (|L21 g|_{H^s} + |L21 g|_{H^1}) / |g|_{H^1_k}
std::vector<BoundReport> check_cross_block_bounds(const std::vector<Field>& chem_bank,
                                                  const std::vector<Field>& density_bank,
                                                  const LinearizedSystem& sys, double s, double k);

double chem_to_density_ratio(const Field& w, const LinearizedSystem& sys, double s, double k);
double density_to_chem_ratio(const Field& g, const LinearizedSystem& sys, double s, double k);

// max over the bank of |(L_a - L_b) g|_{L2_k} / |g|_{H1_k}
double operator_gap_ratio(const std::vector<Field>& bank, const LinearizedSystem& a, const LinearizedSystem& b);

}  // namespace kssim
