#pragma once

#include "kssim/profiles.hpp"

#include <map>
#include <string>
#include <vector>

namespace kssim {

// One pointwise inequality (or a fitted-constant bound) checked on nodes.
struct BoundReport {
  std::string id;
  bool pass = false;
  double worst_margin = 0.0;    // min over nodes of rhs - lhs
  double worst_location = 0.0;  // r at the worst node
  std::map<std::string, double> constants;
  std::string note;
};

inline constexpr double bound_slack = 1e-12;

// Sandwich chains comparing a drift profile with the zero-drift pair,
// evaluated at nodes r > 0.
std::vector<BoundReport> check_profile_sandwich(const RadialProfile& prof,
                                                const RadialProfile& limit, double alpha);

// Smallest admissible envelope constants for Q, P' and the Laplacian of P.
std::vector<BoundReport> check_uniform_bounds(const RadialProfile& prof, double theta = 0.9);

// Sup-norm gaps between two profiles on the same grid.
struct ProfileDeviation {
  double grad_potential = 0.0;
  double lap_potential = 0.0;
  double density = 0.0;       // weighted by exp(theta drift r^2 / 2)
  double grad_density = 0.0;  // same weight
};

ProfileDeviation profile_deviation(const RadialProfile& a, const RadialProfile& b, double theta);

struct ConvergenceReport {
  std::vector<double> eps_list;
  std::map<std::string, std::vector<double>> deviations;
  std::map<std::string, double> slope;
  std::map<std::string, double> intercept;
};

// eps_list strictly decreasing in (0, 0.05], at least three entries.
ConvergenceReport eps_convergence_study(double drift, const std::vector<double>& eps_list,
                                        const RadialGrid& grid, double theta = 0.9);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace kssim
