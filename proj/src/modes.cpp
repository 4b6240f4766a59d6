#include "kssim/modes.hpp"

#include "kssim/errors.hpp"
#include "kssim/radial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace kssim {

namespace {

struct Coefficients {
  int mode = 0;
  double h = 0.0;
  double drift = 0.0;
  double sign = 1.0;  // parity of the mode across r = 0
  std::vector<double> r, q, dp, weight;
};

// Running integrals of odd, cell-centred data from 0 to each centre, and
// the total to the outer face. Fourth order.
struct CellIntegrals {
  std::vector<double> running;
  double total = 0.0;
};

class CellQuadrature {
 public:
  CellQuadrature() {
    const std::array<double, 4> first{-1.5, -0.5, 0.5, 1.5};
    const std::array<double, 4> last{-3.0, -2.0, -1.0, 0.0};
    const std::array<double, 4> tail{-2.0, -1.0, 0.0, 1.0};
    first_ = lagrange_interval_weights(first, 0.0, 0.5);
    last_ = lagrange_interval_weights(last, 0.0, 0.5);
    tail_ = lagrange_interval_weights(tail, 0.0, 1.0);
  }

  CellIntegrals operator()(std::span<const double> f, double h) const {
    const std::size_t n = f.size();
    CellIntegrals out;
    out.running.resize(n);
    auto at = [&](long i) { return i < 0 ? -f[static_cast<std::size_t>(-i - 1)] : f[static_cast<std::size_t>(i)]; };
    out.running[0] = h * (first_[0] * at(-2) + first_[1] * at(-1) + first_[2] * f[0] + first_[3] * f[1]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const long j = static_cast<long>(i);
      double piece;
      if (i + 2 < n) {
        piece = (-at(j - 1) + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
      } else {
        piece = tail_[0] * at(j - 2) + tail_[1] * at(j - 1) + tail_[2] * f[i] + tail_[3] * f[i + 1];
      }
      out.running[i + 1] = out.running[i] + h * piece;
    }
    out.total = out.running[n - 1] +
                h * (last_[0] * f[n - 4] + last_[1] * f[n - 3] + last_[2] * f[n - 2] + last_[3] * f[n - 1]);
    return out;
  }

 private:
  std::vector<double> first_, last_, tail_;
};

const CellQuadrature& cell_quadrature() {
  static const CellQuadrature q;
  return q;
}

Coefficients make_coefficients(int mode, const RadialProfile& prof, const std::vector<double>& centers) {
  if (mode < 0) throw ConfigError("mode must be nonnegative (negative modes follow by symmetry)");
  if (centers.size() < 16) throw ConfigError("mode operator needs at least 16 cells");
  Coefficients c;
  c.mode = mode;
  c.h = centers[1] - centers[0];
  c.drift = prof.params.drift;
  c.sign = mode % 2 == 0 ? 1.0 : -1.0;
  c.r = centers;
  const std::size_t n = centers.size();
  const double outer = centers.back() + 0.5 * c.h;
  if (outer > prof.grid.r_max * (1.0 + 1e-12)) {
    throw DomainCoverageError("mode operator radius exceeds the profile grid");
  }
  c.q.resize(n);
  c.dp.resize(n);
  c.weight.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.q[i] = interpolate_uniform(prof.density, prof.grid.h, Parity::Even, centers[i]);
    c.dp[i] = interpolate_uniform(prof.dpotential, prof.grid.h, Parity::Odd, centers[i]);
    c.weight[i] = centers[i] * c.h;
  }
  // midpoint weights miss -h^2 f(0) / 24 at the origin; only m = 0 has f(0) != 0
  if (mode == 0) c.weight[0] = 11.0 * c.h * c.h / 24.0;
  return c;
}

Eigen::VectorXd apply_cells(const Coefficients& c, std::span<const double> g) {
  const std::size_t n = c.r.size();
  const int m = c.mode;
  const double h = c.h;
  auto gv = [&](long i) -> double {
    if (i < 0) return c.sign * g[static_cast<std::size_t>(-i - 1)];
    if (i >= static_cast<long>(n)) return 0.0;
    return g[static_cast<std::size_t>(i)];
  };

  std::vector<double> dphi(n), phi(n, 0.0), f(n);
  if (m == 0) {
    for (std::size_t i = 0; i < n; ++i) f[i] = g[i] * c.r[i];
    const auto a = cell_quadrature()(f, h);
    for (std::size_t i = 0; i < n; ++i) dphi[i] = -a.running[i] / c.r[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) f[i] = g[i] * std::pow(c.r[i], m + 1);
    const auto inner = cell_quadrature()(f, h);
    for (std::size_t i = 0; i < n; ++i) f[i] = g[i] * std::pow(c.r[i], 1 - m);
    const auto outer = cell_quadrature()(f, h);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = c.r[i];
      const double a = inner.running[i];
      const double b = outer.total - outer.running[i];
      dphi[i] = 0.5 * (-std::pow(r, -m - 1) * a + std::pow(r, m - 1) * b);
      phi[i] = (std::pow(r, -m) * a + std::pow(r, m) * b) / (2.0 * m);
    }
  }

  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long j = static_cast<long>(i);
    const double dg = (gv(j - 2) - 8.0 * gv(j - 1) + 8.0 * gv(j + 1) - gv(j + 2)) / (12.0 * h);
    const double r = c.r[i];
    flux[i] = r * (dg + (c.drift * r - c.dp[i]) * g[i] - c.q[i] * dphi[i]);
  }
  auto fv = [&](long i) -> double {
    if (i < 0) return c.sign * flux[static_cast<std::size_t>(-i - 1)];
    if (i >= static_cast<long>(n)) return 0.0;
    return flux[static_cast<std::size_t>(i)];
  };
  // face i carries the flux at r = (i + 1) h; the origin and outer faces are closed
  std::vector<double> face(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const long j = static_cast<long>(i);
    face[i] = (-fv(j - 1) + 7.0 * flux[i] + 7.0 * flux[i + 1] - fv(j + 2)) / 12.0;
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  const double m2 = static_cast<double>(m) * m;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? 0.0 : face[i - 1];
    const double r2 = c.r[i] * c.r[i];
    double v = (face[i] - left) / c.weight[i];
    if (m > 0) v += -m2 * g[i] / r2 + c.q[i] * m2 * phi[i] / r2;
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

std::vector<double> cell_centers(double radius, int cells) {
  std::vector<double> r(static_cast<std::size_t>(cells));
  const double h = radius / cells;
  for (int i = 0; i < cells; ++i) r[static_cast<std::size_t>(i)] = (i + 0.5) * h;
  return r;
}

}  // namespace

Eigen::MatrixXd OperatorMatrix::unconjugated() const {
  const Eigen::Index n = matrix.rows();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d[i] = std::pow(1.0 + centers[static_cast<std::size_t>(i)] * centers[static_cast<std::size_t>(i)],
                    0.5 * weight_power);
  }
  return d.cwiseInverse().asDiagonal() * matrix * d.asDiagonal();
}

OperatorMatrix assemble_mode_operator(int mode, const RadialProfile& prof, const ModeOptions& opt) {
  if (opt.deflate && mode != 0) throw ConfigError("mass deflation applies to mode 0 only");
  const double radius = opt.radius > 0.0 ? opt.radius : 10.0 / std::sqrt(prof.params.drift);
  OperatorMatrix op;
  op.mode = mode;
  op.deflated = opt.deflate;
  op.weight_power = prof.params.weight_power;
  op.centers = cell_centers(radius, opt.cells);
  const Coefficients c = make_coefficients(mode, prof, op.centers);
  op.weights = c.weight;
  op.density = c.q;

  const Eigen::Index n = opt.cells;
  Eigen::MatrixXd a(n, n);
  std::vector<double> unit(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    unit[static_cast<std::size_t>(j)] = 1.0;
    a.col(j) = apply_cells(c, unit);
    unit[static_cast<std::size_t>(j)] = 0.0;
  }
  if (!a.allFinite()) throw NumericalError("mode operator has non-finite entries");
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = op.centers[static_cast<std::size_t>(i)];
    d[i] = std::pow(1.0 + r * r, 0.5 * op.weight_power);
  }
  op.matrix = d.asDiagonal() * a * d.cwiseInverse().asDiagonal();
  return op;
}

Eigen::VectorXd apply_mode_operator(int mode, const RadialProfile& prof, const std::vector<double>& centers,
                                    const Eigen::VectorXd& g) {
  const Coefficients c = make_coefficients(mode, prof, centers);
  return apply_cells(c, std::span<const double>(g.data(), static_cast<std::size_t>(g.size())));
}

SpectrumReport spectrum(const OperatorMatrix& op) {
  const Eigen::Index n = op.matrix.rows();
  // sqrt(w / Q) nearly symmetrizes the Fokker-Planck part; the mass
  // functional becomes sqrt(w Q) in these coordinates
  Eigen::VectorXd scale(n), mass(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    scale[i] = std::sqrt(op.weights[k] / op.density[k]);
    mass[i] = std::sqrt(op.weights[k] * op.density[k]);
  }
  Eigen::MatrixXd b = scale.asDiagonal() * op.unconjugated() * scale.cwiseInverse().asDiagonal();

  Eigen::MatrixXd work;
  if (op.deflated) {
    // Householder H with H mass ~ e0: the first row of H B H vanishes
    Eigen::VectorXd v = mass / mass.norm();
    v[0] += v[0] >= 0.0 ? 1.0 : -1.0;
    v /= v.norm();
    b -= 2.0 * v * (v.transpose() * b);
    b -= 2.0 * (b * v) * v.transpose();
    work = b.bottomRightCorner(n - 1, n - 1);
  } else {
    work = std::move(b);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(work, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");

  SpectrumReport rep;
  rep.mode = op.mode;
  rep.deflated = op.deflated;
  rep.cells = static_cast<int>(n);
  rep.radius = op.centers.back() + 0.5 * (op.centers[1] - op.centers[0]);
  const auto& ev = solver.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });
  const bool has_mass = op.mode == 0 && !op.deflated;
  const std::size_t idx = has_mass ? 1 : 0;
  rep.gap = rep.eigenvalues.size() > idx ? -rep.eigenvalues[idx].real() : 0.0;
  return rep;
}

double spectral_drift(const SpectrumReport& fine, const SpectrumReport& coarse, double cutoff) {
  double worst = 0.0;
  for (const auto& z : fine.eigenvalues) {
    if (z.real() <= cutoff) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : coarse.eigenvalues) best = std::min(best, std::abs(z - w));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace kssim
