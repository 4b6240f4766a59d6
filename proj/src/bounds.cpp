#include "kssim/bounds.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace kssim {

namespace {

void require_same_grid(const RadialProfile& a, const RadialProfile& b) {
  if (a.grid.size() != b.grid.size() || a.grid.h != b.grid.h) {
    throw ConfigError("profiles live on different radial grids");
  }
}

// margin(i) = rhs - lhs at node i; r = 0 is skipped
BoundReport scan(std::string id, const RadialGrid& grid, const std::function<double(std::size_t)>& margin) {
  BoundReport rep;
  rep.id = std::move(id);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double m = margin(i);
    if (!(m >= rep.worst_margin)) {
      rep.worst_margin = m;
      rep.worst_location = grid.r[i];
    }
  }
  rep.pass = rep.worst_margin >= -bound_slack;
  return rep;
}

}  // namespace

std::vector<BoundReport> check_profile_sandwich(const RadialProfile& prof, const RadialProfile& limit,
                                                double alpha) {
  require_same_grid(prof, limit);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const auto& r = prof.grid.r;
  const double mu = prof.params.drift;
  const auto& pot = prof.potential;
  const auto& pot0 = limit.potential;
  const auto& dp = prof.dpotential;
  const auto& dp0 = limit.dpotential;

  std::vector<BoundReport> out;
  // chain P0 - a r^2/2 < P - a r^2/2 < P0 < P < 0, link by link
  out.push_back(scan("potential.shifted_lower", prof.grid, [&](std::size_t i) {
    return (pot[i] - 0.5 * mu * alpha * r[i] * r[i]) - (pot0[i] - 0.5 * mu * alpha * r[i] * r[i]);
  }));
  out.push_back(scan("potential.shifted_upper", prof.grid, [&](std::size_t i) {
    return pot0[i] - (pot[i] - 0.5 * mu * alpha * r[i] * r[i]);
  }));
  out.push_back(scan("potential.upper", prof.grid, [&](std::size_t i) { return pot[i] - pot0[i]; }));
  out.push_back(scan("potential.negative", prof.grid, [&](std::size_t i) { return -pot[i]; }));

  out.push_back(scan("radial_derivative.lower", prof.grid, [&](std::size_t i) {
    return r[i] * dp0[i] - (r[i] * dp[i] - mu * alpha * r[i] * r[i]);
  }));
  out.push_back(scan("radial_derivative.upper", prof.grid,
                     [&](std::size_t i) { return r[i] * dp[i] - r[i] * dp0[i]; }));
  out.push_back(scan("radial_derivative.negative", prof.grid, [&](std::size_t i) { return -r[i] * dp[i]; }));

  out.push_back(scan("density.lower", prof.grid, [&](std::size_t i) {
    return prof.density[i] - limit.density[i] * std::exp(-0.5 * mu * r[i] * r[i]);
  }));
  out.push_back(scan("density.upper", prof.grid, [&](std::size_t i) {
    return limit.density[i] * std::exp(-0.5 * mu * (1.0 - alpha) * r[i] * r[i]) - prof.density[i];
  }));
  for (auto& rep : out) rep.constants["alpha"] = alpha;
  return out;
}

std::vector<BoundReport> check_uniform_bounds(const RadialProfile& prof, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0, 1)");
  const auto& r = prof.grid.r;
  const std::size_t n = prof.grid.size();
  const double mu = prof.params.drift;
  const double eps = prof.params.time_scale;
  std::vector<BoundReport> out;

  {
    BoundReport rep;
    rep.id = "density.gaussian_envelope";
    double c0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r2 = r[i] * r[i];
      // log of Q exp(theta mu r^2/2) <r>^4, kept in log form against overflow
      const double lg = std::log(8.0) + prof.potential[i] - 0.5 * mu * (1.0 - theta) * r2 + 2.0 * std::log1p(r2);
      const double v = std::exp(lg);
      if (v > c0) {
        c0 = v;
        rep.worst_location = r[i];
      }
    }
    rep.constants["C0"] = c0;
    rep.constants["theta"] = theta;
    rep.worst_margin = 0.0;
    rep.pass = std::isfinite(c0);
    out.push_back(rep);
  }
  {
    BoundReport rep;
    rep.id = "potential.gradient";
    double c1 = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double v = (1.0 / r[i] + std::sqrt(1.0 + r[i] * r[i])) * std::abs(prof.dpotential[i]);
      if (v > c1) {
        c1 = v;
        rep.worst_location = r[i];
      }
    }
    rep.constants["C1"] = c1;
    rep.pass = std::isfinite(c1);
    out.push_back(rep);
  }
  {
    // |lap P| <= C2 mu eps + C3 <r>^{-1}: least squares on the two basis
    // functions, clipped to nonnegative and then inflated until admissible.
    BoundReport rep;
    rep.id = "potential.laplacian";
    const double base = mu * eps;
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = base;
      const double v = 1.0 / std::sqrt(1.0 + r[i] * r[i]);
      const double y = std::abs(prof.lap_potential[i]);
      a11 += u * u;
      a12 += u * v;
      a22 += v * v;
      b1 += u * y;
      b2 += v * y;
    }
    double c2 = 0.0, c3 = 0.0;
    const double det = a11 * a22 - a12 * a12;
    if (base > 0.0 && std::abs(det) > 1e-300) {
      c2 = (b1 * a22 - b2 * a12) / det;
      c3 = (b2 * a11 - b1 * a12) / det;
    }
    if (c2 < 0.0 || base == 0.0) {
      c2 = 0.0;
      c3 = b2 / a22;
    } else if (c3 < 0.0) {
      c3 = 0.0;
      c2 = b1 / a11;
    }
    double inflate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double env = c2 * base + c3 / std::sqrt(1.0 + r[i] * r[i]);
      const double y = std::abs(prof.lap_potential[i]);
      const double q = env > 0.0 ? y / env : (y > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (q > inflate) {
        inflate = q;
        rep.worst_location = r[i];
      }
    }
    if (inflate > 1.0) {
      c2 *= inflate;
      c3 *= inflate;
    }
    rep.constants["C2"] = c2;
    rep.constants["C3"] = c3;
    rep.constants["inflation"] = std::max(inflate, 1.0);
    rep.pass = std::isfinite(c2) && std::isfinite(c3);
    out.push_back(rep);
  }
  out.push_back(scan("density.nonnegative", prof.grid, [&](std::size_t i) { return prof.density[i]; }));
  if (prof.density[0] < 0.0) out.back().pass = false;
  return out;
}

ProfileDeviation profile_deviation(const RadialProfile& a, const RadialProfile& b, double theta) {
  require_same_grid(a, b);
  const double mu = std::max(a.params.drift, b.params.drift);
  ProfileDeviation d;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    const double r = a.grid.r[i];
    const double r2 = r * r;
    d.grad_potential = std::max(d.grad_potential, std::abs(a.dpotential[i] - b.dpotential[i]));
    d.lap_potential = std::max(d.lap_potential, std::abs(a.lap_potential[i] - b.lap_potential[i]));
    // Q exp(theta mu r^2/2) = 8 exp(P - (1 - theta) mu r^2 / 2)
    const double wa = 8.0 * std::exp(a.potential[i] - 0.5 * (1.0 - theta) * mu * r2);
    const double wb = 8.0 * std::exp(b.potential[i] - 0.5 * (1.0 - theta) * mu * r2);
    d.density = std::max(d.density, std::abs(wa - wb));
    const double ga = wa * (a.dpotential[i] - mu * r);
    const double gb = wb * (b.dpotential[i] - mu * r);
    d.grad_density = std::max(d.grad_density, std::abs(ga - gb));
  }
  return d;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit_line needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw ConfigError("fit_line: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
  }
  return f;
}

ConvergenceReport eps_convergence_study(double drift, const std::vector<double>& eps_list,
                                        const RadialGrid& grid, double theta) {
  if (eps_list.size() < 3) throw ConfigError("eps_convergence_study needs at least three eps values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] <= 0.05)) throw ConfigError("eps values must lie in (0, 0.05]");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ConfigError("eps_list must be strictly decreasing");
  }
  ModelParams p;
  p.drift = drift;
  p.time_scale = 0.0;
  const RadialProfile base = solve_profile(p, grid);

  ConvergenceReport rep;
  rep.eps_list = eps_list;
  for (double eps : eps_list) {
    p.time_scale = eps;
    const auto d = profile_deviation(solve_profile(p, grid), base, theta);
    rep.deviations["grad_potential"].push_back(d.grad_potential);
    rep.deviations["lap_potential"].push_back(d.lap_potential);
    rep.deviations["density"].push_back(d.density);
    rep.deviations["grad_density"].push_back(d.grad_density);
  }
  std::vector<double> lx;
  for (double e : eps_list) lx.push_back(std::log(e));
  for (const auto& [name, devs] : rep.deviations) {
    std::vector<double> ly;
    for (double v : devs) ly.push_back(std::log(std::max(v, 1e-300)));
    const LineFit f = fit_line(lx, ly);
    rep.slope[name] = f.slope;
    rep.intercept[name] = f.intercept;
  }
  return rep;
}

}  // namespace kssim
