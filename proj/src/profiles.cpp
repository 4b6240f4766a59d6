#include "kssim/profiles.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace kssim {

RadialProfile closed_form_limit(const RadialGrid& grid) {
  RadialProfile prof;
  prof.grid = grid;
  prof.params.drift = 0.0;
  prof.params.time_scale = 0.0;
  const std::size_t n = grid.size();
  prof.potential.resize(n);
  prof.dpotential.resize(n);
  prof.lap_potential.resize(n);
  prof.density.resize(n);
  prof.ddensity.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r[i];
    const double s = 1.0 + r * r;
    prof.potential[i] = -2.0 * std::log1p(r * r);
    prof.dpotential[i] = -4.0 * r / s;
    prof.density[i] = 8.0 / (s * s);
    prof.lap_potential[i] = -prof.density[i];
    prof.ddensity[i] = -32.0 * r / (s * s * s);
  }
  return prof;
}

namespace {

struct MapParts {
  std::vector<double> value;
  std::vector<double> inner;  // integral of tau exp(P - drift (1 - eps) tau^2 / 2)
};

MapParts apply_map(const ModelParams& p, const RadialGrid& grid, std::span<const double> pot) {
  const std::size_t n = grid.size();
  const double mu = p.drift;
  const double eps = p.time_scale;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r[i];
    f[i] = r * std::exp(pot[i] - 0.5 * mu * (1.0 - eps) * r * r);
  }
  MapParts out;
  out.inner = cumulative_integral(f, grid.h, Parity::Odd);
  // inner = O(r^2), so the outer integrand extends by 0 at the origin
  f[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = grid.r[i];
    f[i] = std::exp(-0.5 * mu * eps * r * r) * out.inner[i] / r;
  }
  out.value = cumulative_integral(f, grid.h, Parity::Odd);
  for (double& v : out.value) v *= -8.0;
  for (double v : out.value) {
    if (!std::isfinite(v)) throw NumericalError("profile map produced a non-finite value");
  }
  return out;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

std::vector<double> profile_map(const ModelParams& p, const RadialGrid& grid,
                                std::span<const double> potential) {
  return apply_map(p, grid, potential).value;
}

RadialProfile solve_profile(const ModelParams& p, const RadialGrid& grid, const ProfileOptions& opt) {
  if (!(p.drift > 0.0)) throw ConfigError("solve_profile: drift must be positive");
  if (!(p.time_scale >= 0.0)) throw ConfigError("solve_profile: eps must be nonnegative");
  const std::size_t n = grid.size();
  std::vector<double> pot(n);
  for (std::size_t i = 0; i < n; ++i) pot[i] = -2.0 * std::log1p(grid.r[i] * grid.r[i]);

  double damping = opt.damping;
  bool damped = damping > 0.0;
  double last_residual = std::numeric_limits<double>::infinity();
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iterations; ++it) {
    const auto next = apply_map(p, grid, pot).value;
    const double residual = sup_diff(next, pot);
    if (it >= 3 && residual > last_residual && damping == 0.0) {
      damping = 0.5;
      damped = true;
    }
    last_residual = residual;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (1.0 - damping) * next[i] + damping * pot[i];
      change = std::max(change, std::abs(v - pot[i]));
      pot[i] = v;
    }
    if (change < opt.step_tolerance) {
      converged = true;
      ++it;
      break;
    }
  }

  const MapParts final_map = apply_map(p, grid, pot);
  const double residual = sup_diff(final_map.value, pot);
  if (!converged || residual > opt.residual_tolerance) {
    throw DivergenceError("profile iteration did not converge (residual " +
                              std::to_string(residual) + ")",
                          residual);
  }

  RadialProfile prof;
  prof.grid = grid;
  prof.params = p;
  prof.iterations = it;
  prof.residual = residual;
  prof.damped = damped;
  prof.potential = std::move(pot);
  prof.potential[0] = 0.0;
  prof.dpotential.resize(n);
  prof.lap_potential.resize(n);
  prof.density.resize(n);
  prof.ddensity.resize(n);
  const double mu = p.drift;
  const double eps = p.time_scale;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r[i];
    prof.dpotential[i] = i == 0 ? 0.0 : -8.0 * std::exp(-0.5 * mu * eps * r * r) * final_map.inner[i] / r;
    prof.density[i] = 8.0 * std::exp(prof.potential[i] - 0.5 * mu * r * r);
    prof.lap_potential[i] = -prof.density[i] - mu * eps * r * prof.dpotential[i];
    prof.ddensity[i] = prof.density[i] * (prof.dpotential[i] - mu * r);
  }
  return prof;
}

double profile_mass(const RadialProfile& prof) {
  return 2.0 * std::numbers::pi * prof.grid.integrate_r(prof.density);
}

PlanarProfile lift_to_plane(const RadialProfile& prof, const GridPtr& grid) {
  const double needed = std::sqrt(2.0) * grid->half_width();
  if (prof.grid.r_max < needed * (1.0 - 1e-12)) {
    throw DomainCoverageError("lift_to_plane: profile r_max " + std::to_string(prof.grid.r_max) +
                              " is below sqrt(2) L = " + std::to_string(needed));
  }
  const std::size_t m = grid->real_size();
  std::vector<double> q(m), pot(m), lap(m), g1(m), g2(m);
  const double h = prof.grid.h;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::min(std::sqrt(grid->radius_sq()[i]), prof.grid.r_max);
    q[i] = interpolate_uniform(prof.density, h, Parity::Even, r);
    pot[i] = interpolate_uniform(prof.potential, h, Parity::Even, r);
    lap[i] = interpolate_uniform(prof.lap_potential, h, Parity::Even, r);
    if (r > 0.0) {
      const double dp = interpolate_uniform(prof.dpotential, h, Parity::Odd, r);
      g1[i] = dp * grid->x1()[i] / r;
      g2[i] = dp * grid->x2()[i] / r;
    }
  }
  return PlanarProfile{Field(grid, std::move(q)), Field(grid, std::move(pot)), Field(grid, std::move(lap)),
                       VecField{Field(grid, std::move(g1)), Field(grid, std::move(g2))}};
}

double quartic_coefficient(const RadialProfile& prof, double fit_radius) {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
  int used = 0;
  for (std::size_t i = 1; i < prof.grid.size() && prof.grid.r[i] <= fit_radius; ++i) {
    const double r2 = prof.grid.r[i] * prof.grid.r[i];
    const double y = prof.potential[i] + 2.0 * r2;
    const double u = r2 * r2;
    const double v = u * r2;
    a11 += u * u;
    a12 += u * v;
    a22 += v * v;
    b1 += u * y;
    b2 += v * y;
    ++used;
  }
  if (used < 3) throw ConfigError("quartic_coefficient: fewer than 3 nodes inside the fit radius");
  return (b1 * a22 - b2 * a12) / (a11 * a22 - a12 * a12);
}

RadialGrid profile_grid_for(const ModelParams& p, double box_half_width, int n) {
  // cover the box corners, and reach exp(-0.9 drift r^2 / 2) < 1e-12
  const double tail = std::sqrt(2.0 * 12.0 * std::log(10.0) / (0.9 * p.drift));
  const double r_max = std::max(1.02 * std::sqrt(2.0) * box_half_width, tail);
  return make_radial_grid(r_max, n);
}

}  // namespace kssim
