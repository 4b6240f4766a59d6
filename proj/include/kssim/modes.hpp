#pragma once

#include "kssim/profiles.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace kssim {

struct ModeOptions {
  int cells = 1500;
  double radius = 0.0;  // 0 picks 10 / sqrt(drift)
  bool deflate = false; // m = 0 only: spectrum() drops the mass direction
};

// One angular harmonic of the density block on a cell-centred radial grid,
// conservative fourth-order fluxes, free-space Poisson solve per mode.
struct OperatorMatrix {
  int mode = 0;
  bool deflated = false;
  double weight_power = 0.0;
  std::vector<double> centers;  // r_i = (i + 1/2) h
  std::vector<double> weights;  // mass quadrature, sum w_i g_i ~ int g r dr
  std::vector<double> density;  // Q at the centres
  Eigen::MatrixXd matrix;       // full operator conjugated by <r>^k

  std::size_t size() const { return centers.size(); }
  // acting on plain nodal values (full size, never deflated)
  Eigen::MatrixXd unconjugated() const;
};

OperatorMatrix assemble_mode_operator(int mode, const RadialProfile& prof, const ModeOptions& opt = {});

// Action of the undeflated, unconjugated mode operator on nodal values.
Eigen::VectorXd apply_mode_operator(int mode, const RadialProfile& prof, const std::vector<double>& centers,
                                    const Eigen::VectorXd& g);

struct SpectrumReport {
  int mode = 0;
  bool deflated = false;
  int cells = 0;
  double radius = 0.0;
  std::vector<std::complex<double>> eigenvalues;  // real part descending
  double gap = 0.0;
};

SpectrumReport spectrum(const OperatorMatrix& op);

// Largest distance from an eigenvalue of `fine` with Re > cutoff to the
// nearest eigenvalue of `coarse`.
double spectral_drift(const SpectrumReport& fine, const SpectrumReport& coarse, double cutoff);

}  // namespace kssim
