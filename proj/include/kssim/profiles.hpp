#pragma once

#include "kssim/params.hpp"
#include "kssim/planar.hpp"
#include "kssim/radial.hpp"

#include <vector>

namespace kssim {

// Steady radial pair: potential and cell density, with derivatives.
struct RadialProfile {
  RadialGrid grid;
  ModelParams params;
  std::vector<double> potential;      // P
  std::vector<double> dpotential;     // P'
  std::vector<double> lap_potential;  // radial Laplacian of P
  std::vector<double> density;        // Q = 8 exp(P - drift r^2 / 2)
  std::vector<double> ddensity;       // Q'
  int iterations = 0;
  double residual = 0.0;
  bool damped = false;
};

// Zero-drift pair Q = 8/(1+r^2)^2, P = -2 log(1+r^2).
RadialProfile closed_form_limit(const RadialGrid& grid);

struct ProfileOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-12;
  double residual_tolerance = 1e-11;
  double damping = 0.0;  // fallback switches to 0.5 on oscillation
};

RadialProfile solve_profile(const ModelParams& p, const RadialGrid& grid,
                            const ProfileOptions& opt = {});

// The integral map itself; exposed for residual checks.
std::vector<double> profile_map(const ModelParams& p, const RadialGrid& grid,
                                std::span<const double> potential);

double profile_mass(const RadialProfile& prof);

// Least-squares c4 in P + 2 r^2 = c4 r^4 + c6 r^6 over nodes 0 < r <= fit_radius.
double quartic_coefficient(const RadialProfile& prof, double fit_radius = 0.1);

struct PlanarProfile {
  Field density;
  Field potential;
  Field lap_potential;
  VecField grad_potential;
};

PlanarProfile lift_to_plane(const RadialProfile& prof, const GridPtr& grid);

// Radial grid long enough to cover the box corners and the Gaussian tail.
RadialGrid profile_grid_for(const ModelParams& p, double box_half_width, int n = 4000);

}  // namespace kssim
