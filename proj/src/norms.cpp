#include "kssim/norms.hpp"

#include "kssim/errors.hpp"
#include "kssim/special.hpp"

#include <cmath>
#include <numbers>

namespace kssim {
namespace {

std::vector<double> weight_powers(const PlanarGrid& g, double k) {
  std::vector<double> w(g.real_size());
  const auto r2 = g.radius_sq();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(1.0 + r2[i], k);
  return w;
}

double weighted_sum_sq(std::span<const double> v, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return s;
}

struct Moments {
  double m0 = 0.0, m1x = 0.0, m1y = 0.0, m2 = 0.0;
};

Moments moments(const Field& f) {
  const auto& g = f.grid();
  Moments m;
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    m.m0 += v[i];
    m.m1x += g.x1()[i] * v[i];
    m.m1y += g.x2()[i] * v[i];
    m.m2 += g.radius_sq()[i] * v[i];
  }
  const double a = g.dx() * g.dx();
  m.m0 *= a;
  m.m1x *= a;
  m.m1y *= a;
  m.m2 *= a;
  return m;
}

}  // namespace

double l2_norm(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s) * f.grid().dx();
}

double lp_norm(const Field& f, double p) {
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().dx() * f.grid().dx(), 1.0 / p);
}

double weighted_l2(const Field& f, double k) {
  const auto w = weight_powers(f.grid(), k);
  return std::sqrt(weighted_sum_sq(f.values(), w)) * f.grid().dx();
}

double weighted_gradient_sq(const Field& f, double k) {
  const auto w = weight_powers(f.grid(), k);
  const auto grad = gradient(f);
  const double a = f.grid().dx() * f.grid().dx();
  return a * (weighted_sum_sq(grad.x1.values(), w) + weighted_sum_sq(grad.x2.values(), w));
}

double l2_on_ball(const Field& f, double radius) {
  const auto r2 = f.grid().radius_sq();
  const double cut = radius * radius;
  double s = 0.0;
  for (std::size_t i = 0; i < r2.size(); ++i) {
    if (r2[i] < cut) s += f.values()[i] * f.values()[i];
  }
  return std::sqrt(s) * f.grid().dx();
}

WeightedNorms weighted_norms(const Field& f, double k) {
  if (!all_finite(f)) throw NumericalError("weighted_norms: non-finite input");
  const auto& g = f.grid();
  const double a = g.dx() * g.dx();
  // <x>^{2k} = (1+|x|^2)^k
  const auto w = weight_powers(g, k);
  WeightedNorms out;
  const double l2sq = a * weighted_sum_sq(f.values(), w);
  out.l2k = std::sqrt(l2sq);
  out.h1k = std::sqrt(l2sq + weighted_gradient_sq(f, k));

  std::vector<double> scaled(g.real_size());
  const auto r2 = g.radius_sq();
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    scaled[i] = std::pow(1.0 + r2[i], 0.5 * k) * f.values()[i];
  }
  const Spectrum s = g.forward(scaled);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    acc += g.half_weight()[i] * std::norm(s[i]) / (1.0 + g.ksq()[i]);
  }
  out.hm1k = std::sqrt(acc) * a * g.dxi();
  return out;
}

double homogeneous_pairing(const Field& a, const Field& b, double sigma, LatticeRule rule) {
  if (sigma < 0.0 || sigma > 2.0) throw ConfigError("homogeneous norm: sigma must lie in [0, 2]");
  const auto& g = a.grid();
  const auto& sa = a.spectrum();
  const auto& sb = b.spectrum();
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double ks = g.ksq()[i];
    const double mult = sigma == 0.0 ? 1.0 : (ks == 0.0 ? 0.0 : std::pow(ks, sigma));
    acc += g.half_weight()[i] * mult * (sa[i].real() * sb[i].real() + sa[i].imag() * sb[i].imag());
  }
  const double dx2 = g.dx() * g.dx();
  double value = acc * dx2 * dx2 * g.dxi() * g.dxi();
  if (rule == LatticeRule::Plain || sigma == 0.0 || sigma == 1.0 || sigma == 2.0) return value;

  // Lattice sums of |xi|^alpha h(xi) carry error terms
  //   delta^{2+alpha} Z(-alpha) h(0) + delta^{4+alpha} Z(-alpha-2) lap h(0) / 4 + ...
  // with h = a^ conj(b^); the Taylor data of h come from low moments.
  const double alpha = 2.0 * sigma;
  const double d = g.dxi();
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double h0 = ma.m0 * mb.m0;
  const double lap_h0 = -ma.m0 * mb.m2 - mb.m0 * ma.m2 + 2.0 * (ma.m1x * mb.m1x + ma.m1y * mb.m1y);
  value -= std::pow(d, 2.0 + alpha) * square_lattice_zeta(-alpha) * h0;
  value -= std::pow(d, 4.0 + alpha) * 0.25 * square_lattice_zeta(-alpha - 2.0) * lap_h0;
  return value;
}

double homogeneous_norm(const Field& f, double sigma, LatticeRule rule) {
  return std::sqrt(std::max(0.0, homogeneous_pairing(f, f, sigma, rule)));
}

NormVector state_norms(const State& st, const ModelParams& p) {
  NormVector n;
  const auto wn = weighted_norms(st.density, p.weight_power);
  n.l2k = wn.l2k;
  n.h1k = wn.h1k;
  n.hm1k = wn.hm1k;
  n.hdots = homogeneous_norm(st.chem, p.sobolev_index);
  n.hdot1 = homogeneous_norm(st.chem, 1.0);
  n.hdot2 = homogeneous_norm(st.chem, 2.0);
  n.x_norm = n.l2k + n.hdots + n.hdot1;
  n.y_norm = n.h1k + n.hdots + n.hdot2;
  return n;
}

}  // namespace kssim
