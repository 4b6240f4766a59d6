#include "kssim/dynamics.hpp"

#include "kssim/bounds.hpp"
#include "kssim/errors.hpp"
#include "kssim/fieldops.hpp"

#include <algorithm>
#include <cmath>

namespace kssim {

namespace {

constexpr double runaway_level = 1e8;

Field times_coordinate(const Field& f, int axis) {
  const auto x = axis == 0 ? f.grid().x1() : f.grid().x2();
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= x[i];
  return Field(f.grid_ptr(), std::move(v));
}

// Everything except the diffusion terms, which the stepper treats implicitly.
State explicit_terms(const State& st, const LinearizedSystem& sys, Coupling coupling, bool dealias) {
  const Field& g = st.density;
  const Field& w = st.chem;
  const double mu = sys.params.drift;
  const VecField pg = potential_gradient(g);
  VecField v{product(g, sys.grad_potential.x1) + product(sys.density, pg.x1),
             product(g, sys.grad_potential.x2) + product(sys.density, pg.x2)};
  VecField gw;
  if (coupling != Coupling::DensityOnly) {
    gw = gradient(w);
    v.x1 += product(sys.density, gw.x1);
    v.x2 += product(sys.density, gw.x2);
  }
  if (coupling == Coupling::Full) {
    const Field gm = dealias ? band_limited(g) : g;
    const VecField wm = dealias ? gradient(band_limited(w)) : gw;
    const VecField pm = dealias ? potential_gradient(gm) : pg;
    v.x1 += product(gm, wm.x1 + pm.x1);
    v.x2 += product(gm, wm.x2 + pm.x2);
  }
  State out;
  out.density = divergence({mu * times_coordinate(g, 0) - v.x1, mu * times_coordinate(g, 1) - v.x2});
  if (coupling == Coupling::DensityOnly) {
    out.chem = Field(g.grid_ptr());
  } else {
    out.chem = mu * (times_coordinate(gw.x1, 0) + times_coordinate(gw.x2, 1)) + g + potential_divergence(v);
  }
  return out;
}

bool runaway(const State& st) {
  return !all_finite(st.density) || !all_finite(st.chem) || sup_norm(st.density) > runaway_level ||
         sup_norm(st.chem) > runaway_level;
}

double boundary_share(const Field& w) {
  const double rr = 0.8 * w.grid().half_width();
  const auto v = w.values();
  const auto r2 = w.grid().radius_sq();
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    total += v[i] * v[i];
    if (r2[i] > rr * rr) outside += v[i] * v[i];
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace

void EvolveConfig::validate(const ModelParams& p) const {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigError("evolve: dt and t_end must be positive");
  if (record_every < 1) throw ConfigError("evolve: record_every must be at least 1");
  if (coupling != Coupling::DensityOnly && !(p.time_scale > 0.0)) {
    throw ConfigError("evolve: the chem equation needs eps > 0");
  }
  if (override_dt_guard) return;
  double guard = 0.01;
  if (p.time_scale > 0.0 && coupling != Coupling::DensityOnly) guard = std::min(guard, 0.1 * p.time_scale);
  if (p.drift > 0.0) guard = std::min(guard, 0.01 / p.drift);
  if (dt > guard * (1.0 + 1e-12)) {
    throw ConfigError("evolve: dt exceeds the stability guard " + std::to_string(guard));
  }
}

State rhs(const State& st, const LinearizedSystem& sys, Coupling coupling, bool dealias) {
  require_mean_zero(st.density, "rhs");
  State e = explicit_terms(st, sys, coupling, dealias);
  if (coupling == Coupling::DensityOnly) {
    // same association as density_operator
    return {laplacian(st.density) + e.density, std::move(e.chem)};
  }
  return {laplacian(st.density) + e.density, (1.0 / sys.params.time_scale) * laplacian(st.chem) + e.chem};
}

Stepper::Stepper(const LinearizedSystem& sys, EvolveConfig cfg) : sys_(&sys), cfg_(cfg) {
  cfg_.validate(sys.params);
}

State Stepper::step(const State& st) {
  const auto& grid = st.density.grid();
  const GridPtr& gp = st.density.grid_ptr();
  State e = explicit_terms(st, *sys_, cfg_.coupling, cfg_.dealias);
  const double dt = cfg_.dt;
  const double chem_rate = cfg_.coupling == Coupling::DensityOnly ? 0.0 : 1.0 / sys_->params.time_scale;
  const auto ksq = grid.ksq();
  const auto mask = grid.band_mask();
  const bool bdf2 = cfg_.scheme == Scheme::ImexBdf2 && prev_state_.has_value();

  auto advance = [&](const Field& u, const Field& ex, const Field* u_old, const Field* ex_old, double rate,
                     bool zero_mean) {
    const Spectrum& a = u.spectrum();
    const Spectrum& b = ex.spectrum();
    Spectrum out(a.size());
    if (bdf2) {
      const Spectrum& a0 = u_old->spectrum();
      const Spectrum& b0 = ex_old->spectrum();
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (4.0 * a[i] - a0[i] + 2.0 * dt * (2.0 * b[i] - b0[i])) / (3.0 + 2.0 * dt * rate * ksq[i]);
      }
    } else {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = (a[i] + dt * b[i]) / (1.0 + dt * rate * ksq[i]);
    }
    if (zero_mean) out[0] = 0.0;
    if (cfg_.dealias) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
    }
    return Field::from_spectrum(gp, out);
  };

  State next;
  next.density = advance(st.density, e.density, bdf2 ? &prev_state_->density : nullptr,
                         bdf2 ? &prev_explicit_->density : nullptr, 1.0, true);
  if (cfg_.coupling == Coupling::DensityOnly) {
    next.chem = Field(gp);
  } else {
    next.chem = advance(st.chem, e.chem, bdf2 ? &prev_state_->chem : nullptr,
                        bdf2 ? &prev_explicit_->chem : nullptr, chem_rate, false);
  }
  if (runaway(next)) throw BlowUp("evolve: non-finite or runaway state", time_ + dt);
  if (cfg_.scheme == Scheme::ImexBdf2) {
    prev_state_ = st;
    prev_explicit_ = std::move(e);
  }
  time_ += dt;
  return next;
}

Trajectory evolve(const State& initial, const LinearizedSystem& sys, const EvolveConfig& cfg) {
  cfg.validate(sys.params);
  require_mean_zero(initial.density, "evolve");
  const GridPtr& gp = initial.density.grid_ptr();
  auto project = [&](const Field& f, bool zero_mean) {
    Spectrum s = f.spectrum();
    if (zero_mean) s[0] = 0.0;
    if (cfg.dealias) {
      for (std::size_t i = 0; i < s.size(); ++i) s[i] *= gp->band_mask()[i];
    }
    return Field::from_spectrum(gp, s);
  };
  State st{project(initial.density, true),
           cfg.coupling == Coupling::DensityOnly ? Field(gp) : project(initial.chem, false)};

  Trajectory traj;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.norms.push_back(state_norms(st, sys.params));
    traj.mass.push_back(integral(st.density));
    traj.boundary_share.push_back(boundary_share(st.chem));
  };
  record(0.0);
  Stepper stepper(sys, cfg);
  const long steps = std::lround(cfg.t_end / cfg.dt);
  try {
    for (long n = 1; n <= steps; ++n) {
      st = stepper.step(st);
      if (n % cfg.record_every == 0 || n == steps) record(n * cfg.dt);
    }
  } catch (const BlowUp& b) {
    traj.stable = false;
    traj.blowup_time = b.time;
  }
  traj.final_state = std::move(st);
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    const double a = traj.norms[i - 1].y_norm;
    const double b = traj.norms[i].y_norm;
    traj.y_time_l2 += 0.5 * (a * a + b * b) * (traj.times[i] - traj.times[i - 1]);
  }
  traj.y_time_l2 = std::sqrt(traj.y_time_l2);
  return traj;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_start, double t_stop) {
  if (times.size() != values.size()) throw ConfigError("fit_decay: size mismatch");
  if (!(t_stop > t_start)) throw ConfigError("fit_decay: empty window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_start - 1e-12 || times[i] > t_stop + 1e-12) continue;
    if (!(values[i] > 0.0)) throw NumericalError("fit_decay: nonpositive norm inside the window");
    x.push_back(times[i]);
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 2) throw ConfigError("fit_decay: fewer than two samples in the window");
  const LineFit line = fit_line(x, y);
  DecayFit fit;
  fit.rate = -line.slope;
  fit.intercept = line.intercept;
  fit.t_start = x.front();
  fit.t_stop = x.back();
  fit.residual = line.max_residual;
  fit.valid = fit.residual <= 0.1;
  return fit;
}

DecayFit fit_decay(const Trajectory& traj, double t_start, double t_stop, NormChoice which) {
  std::vector<double> v;
  v.reserve(traj.norms.size());
  for (const auto& n : traj.norms) v.push_back(which == NormChoice::X ? n.x_norm : n.l2k);
  return fit_decay(traj.times, v, t_start, t_stop);
}

State scale_state(const State& st, double c) { return {c * st.density, c * st.chem}; }

State make_initial_state(const GridPtr& grid, const ModelParams& p, std::uint64_t seed, double x_norm,
                         double dipole) {
  SampleRecipe dens;
  dens.dipole = dipole;
  SampleRecipe chem;
  chem.mean_zero = false;
  State st{SampleBank(seed, 1, dens).sample(0, grid), SampleBank(seed + 1000, 1, chem).sample(0, grid)};
  const double now = state_norms(st, p).x_norm;
  if (!(now > 0.0)) throw ConfigError("initial data generator produced a zero state");
  return scale_state(st, x_norm / now);
}

ThresholdResult threshold_search(const LinearizedSystem& sys, const EvolveConfig& cfg, const State& direction,
                                 double low, double high, int steps) {
  if (!(low > 0.0 && high > low)) throw ConfigError("threshold_search: need 0 < low < high");
  const double size = state_norms(direction, sys.params).x_norm;
  if (!(size > 0.0)) throw ConfigError("threshold_search: zero direction");
  const State unit = scale_state(direction, 1.0 / size);
  ThresholdResult res;
  auto decays = [&](double a) {
    ++res.runs;
    const Trajectory t = evolve(scale_state(unit, a), sys, cfg);
    return t.stable && t.norms.back().x_norm < t.norms.front().x_norm;
  };
  if (decays(high)) {
    res.amplitude = high;
    res.upper_bound = true;
    return res;
  }
  res.failing = high;
  if (!decays(low)) {
    res.failing = low;
    return res;
  }
  double lo = low, hi = high;
  for (int i = 0; i < steps; ++i) {
    const double mid = std::sqrt(lo * hi);
    (decays(mid) ? lo : hi) = mid;
  }
  res.amplitude = lo;
  res.failing = hi;
  return res;
}

}  // namespace kssim
