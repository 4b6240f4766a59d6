#include "kssim/radial.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace kssim {

double RadialGrid::integrate(std::span<const double> f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weight[i] * f[i];
  return s;
}

double RadialGrid::integrate_r(std::span<const double> f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weight[i] * r[i] * f[i];
  return s;
}

RadialGrid make_radial_grid(double r_max, int n) {
  if (!(r_max > 0.0)) throw ConfigError("radial grid: r_max must be positive");
  if (n < 16) throw ConfigError("radial grid: need at least 16 intervals");
  RadialGrid g;
  g.r_max = r_max;
  g.h = r_max / n;
  g.r.resize(n + 1);
  for (int i = 0; i <= n; ++i) g.r[i] = i * g.h;
  g.r[n] = r_max;
  g.weight.assign(n + 1, 0.0);
  // Simpson on an even number of intervals, 3/8 rule on the last three if n is odd
  const int simpson_end = (n % 2 == 0) ? n : n - 3;
  for (int i = 0; i < simpson_end; i += 2) {
    g.weight[i] += g.h / 3.0;
    g.weight[i + 1] += 4.0 * g.h / 3.0;
    g.weight[i + 2] += g.h / 3.0;
  }
  if (simpson_end != n) {
    const double c = 3.0 * g.h / 8.0;
    g.weight[n - 3] += c;
    g.weight[n - 2] += 3.0 * c;
    g.weight[n - 1] += 3.0 * c;
    g.weight[n] += c;
  }
  return g;
}

TailCheckedIntegral integrate_with_tail_check(const RadialGrid& grid, std::span<const double> f) {
  TailCheckedIntegral out;
  out.value = grid.integrate(f);
  const std::size_t n = f.size();
  const double last = std::abs(f[n - 1]);
  if (last == 0.0) return out;
  // local exponential decay rate from the last two nodes
  const double prev = std::abs(f[n - 2]);
  const double rate = prev > 0.0 ? std::log(prev / last) / grid.h : 0.0;
  if (rate <= 0.0) {
    out.tail_estimate = std::numeric_limits<double>::infinity();
  } else {
    out.tail_estimate = last / rate;
  }
  out.warning = out.tail_estimate > 1e-3 * std::abs(out.value);
  return out;
}

std::vector<double> lagrange_interval_weights(std::span<const double> offsets, double a, double b) {
  // Gauss-Legendre with 6 points is exact up to degree 11
  static constexpr std::array<double, 6> gx = {-0.9324695142031521, -0.6612093864662645,
                                               -0.2386191860831969, 0.2386191860831969,
                                               0.6612093864662645,  0.9324695142031521};
  static constexpr std::array<double, 6> gw = {0.1713244923791704, 0.3607615730481386,
                                               0.4679139345726910, 0.4679139345726910,
                                               0.3607615730481386, 0.1713244923791704};
  const std::size_t m = offsets.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t q = 0; q < gx.size(); ++q) {
    const double t = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
    for (std::size_t j = 0; j < m; ++j) {
      double l = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (i != j) l *= (t - offsets[i]) / (offsets[j] - offsets[i]);
      }
      w[j] += 0.5 * (b - a) * gw[q] * l;
    }
  }
  return w;
}

namespace {

double sampled(std::span<const double> f, Parity parity, long i) {
  if (i >= 0) return f[static_cast<std::size_t>(i)];
  const double v = f[static_cast<std::size_t>(-i)];
  return parity == Parity::Even ? v : -v;
}

}  // namespace

std::vector<double> cumulative_integral(std::span<const double> f, double h, Parity parity) {
  const long n = static_cast<long>(f.size());
  if (n < 6) throw ConfigError("cumulative_integral: need at least 6 samples");
  static const std::vector<double> centered = [] {
    const std::array<double, 6> off = {-2, -1, 0, 1, 2, 3};
    return lagrange_interval_weights(off, 0.0, 1.0);
  }();
  std::vector<double> out(n, 0.0);
  for (long j = 0; j + 1 < n; ++j) {
    double piece = 0.0;
    if (j + 3 < n) {
      for (int q = 0; q < 6; ++q) piece += centered[q] * sampled(f, parity, j - 2 + q);
    } else {
      // shift the stencil left at the outer end
      const long start = n - 6;
      std::array<double, 6> off{};
      for (int q = 0; q < 6; ++q) off[q] = static_cast<double>(start + q - j);
      const auto w = lagrange_interval_weights(off, 0.0, 1.0);
      for (int q = 0; q < 6; ++q) piece += w[q] * f[start + q];
    }
    out[j + 1] = out[j] + h * piece;
  }
  return out;
}

double interpolate_uniform(std::span<const double> f, double h, Parity parity, double x) {
  const long n = static_cast<long>(f.size());
  const double t = x / h;
  long base = static_cast<long>(std::floor(t)) - 2;
  base = std::min(base, n - 6);
  double v = 0.0;
  for (int j = 0; j < 6; ++j) {
    double l = 1.0;
    for (int i = 0; i < 6; ++i) {
      if (i != j) l *= (t - (base + i)) / static_cast<double>(j - i);
    }
    v += l * sampled(f, parity, base + j);
  }
  return v;
}

}  // namespace kssim
