#pragma once

#include "kssim/linops.hpp"
#include "kssim/norms.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace kssim {

enum class Scheme { ImexEuler, ImexBdf2 };

enum class Coupling {
  Full,        // nonlinear system
  Linear,      // bilinear terms dropped
  DensityOnly  // density block alone, chem field frozen at zero
};

struct EvolveConfig {
  double dt = 2e-3;
  double t_end = 10.0;
  Scheme scheme = Scheme::ImexBdf2;
  bool dealias = true;
  Coupling coupling = Coupling::Full;
  int record_every = 10;
  bool override_dt_guard = false;

  // Throws ConfigError unless dt <= min(0.1 eps, 0.01, 0.01 / drift).
  void validate(const ModelParams& p) const;
};

// Full right-hand side (or its linear part, or the density block alone).
State rhs(const State& st, const LinearizedSystem& sys, Coupling coupling, bool dealias = true);

// Stateful time stepper; holds the previous explicit terms for SBDF2.
class Stepper {
 public:
  Stepper(const LinearizedSystem& sys, EvolveConfig cfg);
  // Advances by dt; throws BlowUp on non-finite or runaway values.
  State step(const State& st);
  double time() const { return time_; }

 private:
  const LinearizedSystem* sys_;
  EvolveConfig cfg_;
  double time_ = 0.0;
  std::optional<State> prev_state_;
  std::optional<State> prev_explicit_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<NormVector> norms;
  std::vector<double> mass;           // integral of the density perturbation
  std::vector<double> boundary_share; // share of |w|^2 beyond 0.8 L
  State final_state;
  bool stable = true;
  double blowup_time = 0.0;
  double y_time_l2 = 0.0;             // (int y_norm^2 dt)^{1/2}, trapezoid on records
};

// Projects the initial density to zero mean (and band limits when dealiasing).
Trajectory evolve(const State& initial, const LinearizedSystem& sys, const EvolveConfig& cfg);

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double t_start = 0.0;
  double t_stop = 0.0;
  double residual = 0.0;  // max |log value - line|
  bool valid = false;     // residual <= 0.1
};

// Least-squares line through log(values) on [t_start, t_stop].
DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_start, double t_stop);

enum class NormChoice { X, DensityWeighted };

DecayFit fit_decay(const Trajectory& traj, double t_start, double t_stop, NormChoice which = NormChoice::X);

// Seeded non-radial data with the requested X norm.
State make_initial_state(const GridPtr& grid, const ModelParams& p, std::uint64_t seed, double x_norm,
                         double dipole = 1.0);

State scale_state(const State& st, double c);

struct ThresholdResult {
  double amplitude = 0.0;   // largest amplitude seen to decay
  double failing = 0.0;     // smallest amplitude seen to grow or blow up
  bool upper_bound = false; // every probe decayed
  int runs = 0;
};

// Geometric bisection in the amplitude of an X-normalized direction.
ThresholdResult threshold_search(const LinearizedSystem& sys, const EvolveConfig& cfg, const State& direction,
                                 double low, double high, int steps = 8);

}  // namespace kssim
