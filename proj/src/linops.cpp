#include "kssim/linops.hpp"

#include "kssim/errors.hpp"
#include "kssim/fieldops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kssim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Field times_coordinate(const Field& f, int axis) {
  const auto x = axis == 0 ? f.grid().x1() : f.grid().x2();
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= x[i];
  return Field(f.grid_ptr(), std::move(v));
}

// x . grad f
Field radial_derivative(const Field& f) {
  const VecField g = gradient(f);
  return times_coordinate(g.x1, 0) + times_coordinate(g.x2, 1);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double cutoff_step(double t) {
  // smooth step from 0 (t <= 0) to 1 (t >= 1)
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

double cutoff_profile(double radius) { return cutoff_step(2.0 - radius); }

LinearizedSystem make_linearized_system(const ModelParams& p, const RadialProfile& prof, const GridPtr& grid) {
  p.validate();
  if (std::abs(prof.params.drift - p.drift) > 1e-14 || std::abs(prof.params.time_scale - p.time_scale) > 1e-14) {
    throw ConfigError("profile parameters do not match the system parameters");
  }
  PlanarProfile planar = lift_to_plane(prof, grid);
  LinearizedSystem sys;
  sys.params = p;
  sys.grid = grid;
  sys.density = std::move(planar.density);
  sys.potential = std::move(planar.potential);
  sys.lap_potential = std::move(planar.lap_potential);
  sys.grad_potential = std::move(planar.grad_potential);
  set_split(sys, 0.0, 1.0);
  return sys;
}

LinearizedSystem heat_only_system(const GridPtr& grid, double time_scale) {
  LinearizedSystem sys;
  sys.params.drift = 0.0;
  sys.params.time_scale = time_scale;
  sys.grid = grid;
  sys.density = Field(grid);
  sys.potential = Field(grid);
  sys.lap_potential = Field(grid);
  sys.grad_potential = {Field(grid), Field(grid)};
  set_split(sys, 0.0, 1.0);
  return sys;
}

void set_split(LinearizedSystem& sys, double level, double radius) {
  if (!(level >= 0.0)) throw ConfigError("split level must be nonnegative");
  if (!(radius >= 1.0)) throw ConfigError("split radius must be at least 1");
  sys.split_level = level;
  sys.split_radius = radius;
  sys.cutoff = Field::from_function(sys.grid, [radius](double x, double y) {
    return cutoff_profile(std::hypot(x, y) / radius);
  });
}

void require_mean_zero(const Field& g, const char* who) {
  const double mass = integral(g);
  double scale = 0.0;
  for (double v : g.values()) scale += std::abs(v);
  scale *= g.grid().dx() * g.grid().dx();
  if (std::abs(mass) > 1e-10 * std::max(scale, 1e-300) && std::abs(mass) > 1e-300) {
    throw ContractViolation(std::string(who) + ": density input must have zero mean");
  }
}

Field density_operator(const Field& g, const LinearizedSystem& sys) {
  require_mean_zero(g, "density_operator");
  const double mu = sys.params.drift;
  const VecField pg = potential_gradient(g);
  VecField flux{mu * times_coordinate(g, 0) - product(g, sys.grad_potential.x1) - product(sys.density, pg.x1),
                mu * times_coordinate(g, 1) - product(g, sys.grad_potential.x2) - product(sys.density, pg.x2)};
  return laplacian(g) + divergence(flux);
}

Field chem_to_density(const Field& w, const LinearizedSystem& sys) {
  const VecField gw = gradient(w);
  return -1.0 * divergence({product(sys.density, gw.x1), product(sys.density, gw.x2)});
}

Field density_to_chem(const Field& g, const LinearizedSystem& sys) {
  require_mean_zero(g, "density_to_chem");
  const VecField pg = potential_gradient(g);
  VecField v{product(g, sys.grad_potential.x1) + product(sys.density, pg.x1),
             product(g, sys.grad_potential.x2) + product(sys.density, pg.x2)};
  return g + potential_divergence(v);
}

Field chem_operator_local(const Field& w, const LinearizedSystem& sys) {
  return (1.0 / sys.params.time_scale) * laplacian(w) + sys.params.drift * radial_derivative(w);
}

Field chem_operator(const Field& w, const LinearizedSystem& sys) {
  const VecField gw = gradient(w);
  return chem_operator_local(w, sys) +
         potential_divergence({product(sys.density, gw.x1), product(sys.density, gw.x2)});
}

Field split_operator(const Field& g, const LinearizedSystem& sys) {
  return density_operator(g, sys) - sys.split_level * product(sys.cutoff, g);
}

double pairing_l2k(const Field& a, const Field& b, double k) {
  const auto r2 = a.grid().radius_sq();
  const auto va = a.values();
  const auto vb = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) s += std::pow(1.0 + r2[i], k) * va[i] * vb[i];
  return s * a.grid().dx() * a.grid().dx();
}

DissipationTerms dissipation_terms(const Field& g, const LinearizedSystem& sys, double local_radius) {
  const double k = sys.params.weight_power;
  DissipationTerms t;
  t.form = pairing_l2k(density_operator(g, sys), g, k);
  t.weighted_sq = pairing_l2k(g, g, k);
  t.gradient_sq = weighted_gradient_sq(g, k);
  const double ball = l2_on_ball(g, local_radius);
  t.local_sq = ball * ball;
  t.excess = t.form + sys.params.drift * (k - 2.0) * t.weighted_sq + 0.5 * t.gradient_sq;
  return t;
}

double fit_local_constant(const std::vector<Field>& bank, const LinearizedSystem& sys, double local_radius) {
  double c = 0.0;
  for (const Field& g : bank) {
    const auto t = dissipation_terms(g, sys, local_radius);
    if (t.local_sq > 0.0) c = std::max(c, t.excess / t.local_sq);
  }
  return c;
}

SplitCheck split_dissipativity(const Field& g, const LinearizedSystem& sys) {
  const double k = sys.params.weight_power;
  SplitCheck c;
  c.form = pairing_l2k(split_operator(g, sys), g, k);
  const double wsq = pairing_l2k(g, g, k);
  const double gsq = weighted_gradient_sq(g, k);
  c.bound = -sys.params.drift * (k - 2.0) * wsq - 0.5 * gsq;
  c.slack = 1e-9 * (wsq + gsq);
  c.holds = c.form <= c.bound + c.slack;
  return c;
}

std::vector<SplitCheck> check_split_dissipativity(const std::vector<Field>& bank, const LinearizedSystem& sys,
                                                  double fitted_constant, double fitted_radius) {
  if (sys.split_level < fitted_constant || sys.split_radius < fitted_radius) {
    throw PreconditionError("split constants are below the fitted local constant or radius");
  }
  std::vector<SplitCheck> out;
  out.reserve(bank.size());
  for (const Field& g : bank) out.push_back(split_dissipativity(g, sys));
  return out;
}

double IdentityCheck::relative_defect() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

IdentityCheck chem_h1_identity(const Field& w, const LinearizedSystem& sys) {
  IdentityCheck c;
  c.lhs = homogeneous_pairing(chem_operator(w, sys), w, 1.0);
  const double h2 = homogeneous_norm(w, 2.0);
  const VecField gw = gradient(w);
  const auto q = sys.density.values();
  const auto a = gw.x1.values();
  const auto b = gw.x2.values();
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * (a[i] * a[i] + b[i] * b[i]);
  s *= w.grid().dx() * w.grid().dx();
  c.rhs = -h2 * h2 / sys.params.time_scale - two_pi * two_pi * s;
  return c;
}

IdentityCheck chem_hs_local_identity(const Field& w, const LinearizedSystem& sys, double s) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("sobolev index must lie in (0, 1)");
  constexpr auto rule = LatticeRule::SingularCorrected;
  IdentityCheck c;
  c.lhs = homogeneous_pairing(chem_operator_local(w, sys), w, s, rule);
  const double top = homogeneous_norm(w, 1.0 + s, rule);
  const double low = homogeneous_norm(w, s, rule);
  c.rhs = -top * top / sys.params.time_scale - sys.params.drift * (1.0 - s) * low * low;
  return c;
}

HsDissipation chem_hs_dissipation(const Field& w, const LinearizedSystem& sys, double s, double rate) {
  constexpr auto rule = LatticeRule::SingularCorrected;
  HsDissipation d;
  d.form = homogeneous_pairing(chem_operator(w, sys), w, s, rule);
  const double top = homogeneous_norm(w, 1.0 + s, rule);
  const double low = homogeneous_norm(w, s, rule);
  d.bound = -top * top / (2.0 * sys.params.time_scale) - rate * low * low;
  const double scale = top * top / sys.params.time_scale + low * low;
  d.holds = d.form <= d.bound + 1e-9 * scale;
  return d;
}

double chem_to_density_ratio(const Field& w, const LinearizedSystem& sys, double s, double k) {
  const double theta = (1.0 - s) / (2.0 - s);
  const double num = weighted_norms(chem_to_density(w, sys), k).hm1k;
  const double den = std::pow(homogeneous_norm(w, s), 1.0 - theta) * std::pow(homogeneous_norm(w, 2.0), theta);
  return safe_ratio(num, den);
}

double density_to_chem_ratio(const Field& g, const LinearizedSystem& sys, double s, double k) {
  const Field out = density_to_chem(g, sys);
  return safe_ratio(homogeneous_norm(out, s) + homogeneous_norm(out, 1.0), weighted_norms(g, k).h1k);
}

std::vector<BoundReport> check_cross_block_bounds(const std::vector<Field>& chem_bank,
                                                  const std::vector<Field>& density_bank,
                                                  const LinearizedSystem& sys, double s, double k) {
  auto report = [](std::string id, const std::vector<double>& r, std::string note) {
    BoundReport rep;
    rep.id = std::move(id);
    double mx = 0.0;
    bool finite = true;
    for (double v : r) {
      finite = finite && std::isfinite(v);
      mx = std::max(mx, v);
    }
    rep.constants["max_ratio"] = mx;
    rep.constants["samples"] = static_cast<double>(r.size());
    rep.pass = finite;
    rep.note = std::move(note);
    return rep;
  };
  std::vector<double> a, b;
  for (const Field& w : chem_bank) a.push_back(chem_to_density_ratio(w, sys, s, k));
  for (const Field& g : density_bank) b.push_back(density_to_chem_ratio(g, sys, s, k));
  std::vector<BoundReport> out;
  out.push_back(report("cross.chem_to_density", a, "Fourier-side norms; weighted H^-1 by multiplier"));
  out.push_back(report("cross.density_to_chem", b, "Fourier-side norms over physical H1_k"));
  for (auto& rep : out) {
    rep.constants["s"] = s;
    rep.constants["k"] = k;
  }
  return out;
}

double operator_gap_ratio(const std::vector<Field>& bank, const LinearizedSystem& a, const LinearizedSystem& b) {
  const double k = a.params.weight_power;
  double mx = 0.0;
  for (const Field& g : bank) {
    const Field d = density_operator(g, a) - density_operator(g, b);
    mx = std::max(mx, safe_ratio(weighted_l2(d, k), weighted_norms(g, k).h1k));
  }
  return mx;
}

}  // namespace kssim
