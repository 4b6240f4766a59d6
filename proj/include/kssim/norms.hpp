#pragma once

#include "kssim/params.hpp"
#include "kssim/planar.hpp"

namespace kssim {

struct WeightedNorms {
  double l2k = 0.0;   // || <x>^k f ||_{L2}
  double h1k = 0.0;   // (sum over |a| <= 1 of || <x>^k d^a f ||^2)^{1/2}
  double hm1k = 0.0;  // || (1+|xi|^2)^{-1/2} F(<x>^k f) ||_{L2(dxi)}
};

WeightedNorms weighted_norms(const Field& f, double k);

double l2_norm(const Field& f);
double lp_norm(const Field& f, double p);
double weighted_l2(const Field& f, double k);
// || <x>^k grad f ||^2
double weighted_gradient_sq(const Field& f, double k);
// unweighted L2 norm on the disc |x| < radius
double l2_on_ball(const Field& f, double radius);

enum class LatticeRule {
  Plain,             // raw lattice sum; Hoelder-exact discrete norm
  SingularCorrected  // removes the |xi|^{2 sigma} origin error terms
};

// Real part of the integral of |xi|^{2 sigma} a^ conj(b^) d xi.
double homogeneous_pairing(const Field& a, const Field& b, double sigma,
                           LatticeRule rule = LatticeRule::Plain);

// || |xi|^sigma f^ ||_{L2(dxi)}, sigma in [0, 2]
double homogeneous_norm(const Field& f, double sigma, LatticeRule rule = LatticeRule::Plain);

struct NormVector {
  double l2k = 0.0, h1k = 0.0, hm1k = 0.0;
  double hdots = 0.0, hdot1 = 0.0, hdot2 = 0.0;
  double x_norm = 0.0, y_norm = 0.0;
};

NormVector state_norms(const State& st, const ModelParams& p);

}  // namespace kssim
