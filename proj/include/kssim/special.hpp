#pragma once

namespace kssim {

// Dirichlet beta function, any real argument.
double dirichlet_beta(double s);

// Analytic continuation of sum over nonzero m in Z^2 of |m|^{-s}.
double square_lattice_zeta(double s);

}  // namespace kssim
