#include "kssim/fieldops.hpp"

#include "kssim/errors.hpp"
#include "kssim/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace kssim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Spectrum inverse_laplacian_spectrum(const Field& g) {
  const auto& grid = g.grid();
  Spectrum s = g.spectrum();
  s[0] = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) s[i] /= grid.ksq()[i];
  return s;
}

double vec_homogeneous_norm(const VecField& v, double sigma) {
  const double a = homogeneous_norm(v.x1, sigma);
  const double b = homogeneous_norm(v.x2, sigma);
  return std::sqrt(a * a + b * b);
}

double vec_lp_norm(const VecField& v, double p) {
  const auto a = v.x1.values();
  const auto b = v.x2.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::hypot(a[i], b[i]), p);
  const double dx = v.x1.grid().dx();
  return std::pow(s * dx * dx, 1.0 / p);
}

double weighted_lq(const Field& f, double k, double q) {
  const auto v = f.values();
  const auto r2 = f.grid().radius_sq();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(std::pow(1.0 + r2[i], 0.5 * k) * std::abs(v[i]), q);
  const double dx = f.grid().dx();
  return std::pow(s * dx * dx, 1.0 / q);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

BoundReport ratio_report(std::string id, const std::vector<double>& ratios, std::string note) {
  BoundReport rep;
  rep.id = std::move(id);
  double mx = 0.0;
  bool finite = true;
  for (double r : ratios) {
    finite = finite && std::isfinite(r);
    mx = std::max(mx, r);
  }
  rep.constants["max_ratio"] = mx;
  rep.constants["samples"] = static_cast<double>(ratios.size());
  rep.pass = finite;
  rep.note = std::move(note);
  return rep;
}

}  // namespace

VecField potential_gradient(const Field& g) {
  const Spectrum phi = inverse_laplacian_spectrum(g);
  const auto& grid = g.grid();
  Spectrum a(phi.size()), b(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    a[i] = Complex(0.0, grid.k1()[i]) * phi[i];
    b[i] = Complex(0.0, grid.k2()[i]) * phi[i];
  }
  return {Field::from_spectrum(g.grid_ptr(), a), Field::from_spectrum(g.grid_ptr(), b)};
}

CheckedPotentialGradient potential_gradient_checked(const Field& g) {
  CheckedPotentialGradient out{potential_gradient(g), outside_fraction(g), false};
  out.truncation_warning = out.outside_fraction > 1e-10;
  return out;
}

Field newtonian_potential(const Field& g) {
  return Field::from_spectrum(g.grid_ptr(), inverse_laplacian_spectrum(g));
}

Field potential_divergence(const VecField& v) {
  const auto& grid = v.x1.grid();
  const auto& a = v.x1.spectrum();
  const auto& b = v.x2.spectrum();
  Spectrum s(a.size());
  s[0] = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    s[i] = (Complex(0.0, grid.k1()[i]) * a[i] + Complex(0.0, grid.k2()[i]) * b[i]) / grid.ksq()[i];
  }
  return Field::from_spectrum(v.x1.grid_ptr(), s);
}

double outside_fraction(const Field& f, double fraction) {
  const double rr = fraction * f.grid().half_width();
  const auto v = f.values();
  const auto r2 = f.grid().radius_sq();
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    total += std::abs(v[i]);
    if (r2[i] > rr * rr) outside += std::abs(v[i]);
  }
  return total > 0.0 ? outside / total : 0.0;
}

SampleBank::SampleBank(std::uint64_t seed, int count, SampleRecipe recipe)
    : seed_(seed), count_(count), recipe_(recipe) {
  if (count < 0) throw ConfigError("sample bank: negative count");
  if (recipe.bumps < 1) throw ConfigError("sample bank: need at least one bump");
  if (!(recipe.width_min > 0.0 && recipe.width_max >= recipe.width_min)) {
    throw ConfigError("sample bank: bad width range");
  }
}

Field SampleBank::sample(int index, const GridPtr& grid) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Bump {
    double c1, c2, width, amp;
  };
  std::vector<Bump> bumps;
  for (int b = 0; b < recipe_.bumps; ++b) {
    const double rad = recipe_.radial ? 0.0 : recipe_.center_radius * std::sqrt(unit(rng));
    const double ang = two_pi * unit(rng);
    const double width = recipe_.width_min + (recipe_.width_max - recipe_.width_min) * unit(rng);
    const double amp = 2.0 * unit(rng) - 1.0;
    bumps.push_back({rad * std::cos(ang), rad * std::sin(ang), width, amp});
  }
  const double dip = recipe_.dipole;
  Field f = Field::from_function(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& b : bumps) {
      const double d2 = (x - b.c1) * (x - b.c1) + (y - b.c2) * (y - b.c2);
      v += b.amp * std::exp(-0.5 * d2 / (b.width * b.width));
    }
    if (dip != 0.0) v += dip * x * std::exp(-0.5 * (x * x + y * y));
    return v;
  });
  f = band_limited(f);
  if (recipe_.mean_zero) {
    // subtract a localized unit-mass Gaussian rather than a constant
    Field bump = Field::from_function(grid, [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)); });
    const double scale = integral(f) / integral(bump);
    f -= scale * bump;
  }
  return f;
}

std::vector<Field> SampleBank::generate(const GridPtr& grid) const {
  std::vector<Field> out;
  out.reserve(count_);
  for (int i = 0; i < count_; ++i) out.push_back(sample(i, grid));
  return out;
}

std::vector<BoundReport> check_poisson_estimates(const std::vector<Field>& bank, double k, double sigma,
                                                 double p, double q) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("poisson estimates: sigma must lie in (0, 1)");
  if (!(k > 2.0)) throw ConfigError("poisson estimates: k must exceed 2");
  if (!(p > 2.0 && q >= 2.0 && q <= p)) throw ConfigError("poisson estimates: need p > 2 and 2 <= q <= p");
  if (!(k > 2.0 - 2.0 / q)) throw ConfigError("poisson estimates: k must exceed 2 - 2/q");
  std::vector<double> r_h1, r_hs, r_l2, r_lp;
  for (const Field& g : bank) {
    const VecField grad = potential_gradient(g);
    const double l2 = l2_norm(g);
    const double l1 = lp_norm(g, 1.0);
    r_h1.push_back(safe_ratio(vec_homogeneous_norm(grad, 1.0), l2));
    r_hs.push_back(safe_ratio(vec_homogeneous_norm(grad, sigma), l1 + l2));
    const double mean = integral(g);
    if (std::abs(mean) <= 1e-12 * std::max(1.0, l1)) {
      r_l2.push_back(safe_ratio(std::hypot(l2_norm(grad.x1), l2_norm(grad.x2)), weighted_l2(g, k)));
    }
    r_lp.push_back(safe_ratio(vec_lp_norm(grad, p), weighted_lq(g, k, q)));
  }
  std::vector<BoundReport> out;
  out.push_back(ratio_report("poisson.hdot1", r_h1, "Fourier-side norm over physical L2; exact value 2 pi"));
  out.push_back(ratio_report("poisson.hdot_sigma", r_hs, "Fourier-side norm over physical L1 + L2"));
  out.push_back(ratio_report("poisson.l2_weighted", r_l2, "physical norms; mean-zero samples only"));
  out.push_back(ratio_report("poisson.lp", r_lp, "physical norms"));
  for (auto& rep : out) {
    rep.constants["k"] = k;
    rep.constants["sigma"] = sigma;
    rep.constants["p"] = p;
    rep.constants["q"] = q;
  }
  return out;
}

double ladyzhenskaya_ratio(const Field& f) {
  const double l4 = lp_norm(f, 4.0);
  const double l2 = l2_norm(f);
  const double grad = homogeneous_norm(f, 1.0) / two_pi;
  return safe_ratio(l4, std::sqrt(l2 * grad));
}

std::vector<BoundReport> check_ladyzhenskaya_and_interp(const std::vector<Field>& bank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> lad, interp;
  for (const Field& f : bank) {
    lad.push_back(ladyzhenskaya_ratio(f));
    const double s0 = 0.9 * unit(rng);
    const double s1 = s0 + 0.2 + (2.0 - s0 - 0.2) * unit(rng);
    const double t = 0.05 + 0.9 * unit(rng);
    const double s = (1.0 - t) * s0 + t * s1;
    const double lhs = homogeneous_norm(f, s);
    const double rhs = std::pow(homogeneous_norm(f, s0), 1.0 - t) * std::pow(homogeneous_norm(f, s1), t);
    interp.push_back(safe_ratio(lhs, rhs));
  }
  std::vector<BoundReport> out;
  out.push_back(ratio_report("ladyzhenskaya", lad, "physical norms; gradient via Fourier side"));
  auto rep = ratio_report("interpolation", interp, "Fourier-side norms; Hoelder gives constant 1");
  rep.pass = rep.pass && rep.constants["max_ratio"] <= 1.0 + 1e-10;
  out.push_back(rep);
  return out;
}

GrowthReport nonzero_mass_poisson_growth(double half_width, int n, int doublings, double k) {
  if (doublings < 1) throw ConfigError("need at least one doubling");
  GrowthReport rep;
  double L = half_width;
  int nn = n;
  for (int d = 0; d <= doublings; ++d) {
    const GridPtr grid = make_planar_grid(L, nn);
    Field g = Field::from_function(grid, [](double x, double y) {
      return std::exp(-0.5 * (x * x + y * y)) / two_pi;
    });
    const VecField grad = potential_gradient(g);
    rep.half_widths.push_back(L);
    rep.ratios.push_back(std::hypot(l2_norm(grad.x1), l2_norm(grad.x2)) / weighted_l2(g, k));
    L *= 2.0;
    nn *= 2;
  }
  rep.min_growth = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rep.ratios.size(); ++i) {
    rep.min_growth = std::min(rep.min_growth, rep.ratios[i] / rep.ratios[i - 1]);
  }
  return rep;
}

}  // namespace kssim
