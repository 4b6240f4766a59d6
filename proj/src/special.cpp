#include "kssim/special.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>

namespace kssim {
namespace {

// Cohen-Rodriguez Villegas-Zagier acceleration for sum (-1)^k (2k+1)^{-s}, s > 0.
double alternating_beta(double s) {
  constexpr int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::pow(2.0 * k + 1.0, -s);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

}  // namespace

double dirichlet_beta(double s) {
  if (s > 0.0) return alternating_beta(s);
  // reflection: beta(1 - z) = (2/pi)^z sin(pi z / 2) Gamma(z) beta(z)
  const double z = 1.0 - s;
  return std::pow(2.0 / std::numbers::pi, z) * std::sin(0.5 * std::numbers::pi * z) *
         boost::math::tgamma(z) * alternating_beta(z);
}

double square_lattice_zeta(double s) {
  const double half = 0.5 * s;
  return 4.0 * boost::math::zeta(half) * dirichlet_beta(half);
}

}  // namespace kssim
