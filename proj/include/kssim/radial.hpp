#pragma once

#include <span>
#include <vector>

namespace kssim {

enum class Parity { Even, Odd };

// Uniform grid on [0, r_max] with composite Simpson weights.
struct RadialGrid {
  std::vector<double> r;
  std::vector<double> weight;  // integral of f dr is sum weight_i f_i
  double h = 0.0;
  double r_max = 0.0;

  std::size_t size() const { return r.size(); }
  double integrate(std::span<const double> f) const;
  // integral of f(r) r dr
  double integrate_r(std::span<const double> f) const;
};

// n is the number of intervals (n + 1 nodes).
RadialGrid make_radial_grid(double r_max, int n);

struct TailCheckedIntegral {
  double value = 0.0;
  double tail_estimate = 0.0;  // extrapolated mass beyond r_max
  bool warning = false;        // tail_estimate exceeds 1e-3 of |value|
};

// Integral of f dr over the grid plus an exponential-tail extrapolation
// from the last nodes.
TailCheckedIntegral integrate_with_tail_check(const RadialGrid& grid,
                                              std::span<const double> f);

// Running integral from 0 to each node, sixth order. Values at negative r
// are taken from the parity of f.
std::vector<double> cumulative_integral(std::span<const double> f, double h, Parity parity);

// Sixth-order Lagrange interpolation of uniformly sampled data (nodes at
// i*h) at an arbitrary point in [0, (n-1)h], using parity across r = 0.
double interpolate_uniform(std::span<const double> f, double h, Parity parity, double x);

// Weights for the integral over [a, b] of the polynomial interpolating
// values at the integer offsets given (unit spacing).
std::vector<double> lagrange_interval_weights(std::span<const double> offsets, double a, double b);

}  // namespace kssim
