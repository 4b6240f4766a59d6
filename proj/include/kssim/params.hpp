#pragma once

namespace kssim {

struct ModelParams {
  double drift = 1.0;          // self-similar drift rate, > 0
  double time_scale = 0.02;    // chemical time-scale ratio, >= 0
  double weight_power = 4.0;   // polynomial weight exponent, > 3
  double sobolev_index = 0.5;  // homogeneous index, in (0, 1)
  double target_rate = 0.0;    // decay target, < drift * (1 - sobolev_index)

  // Throws ConfigError on violation.
  void validate() const;
  double max_rate() const { return drift * (1.0 - sobolev_index); }
};

// Default half-width of the periodic box.
double default_box_half_width(double drift);
// Time stepping box: Q must be resolved to ~1e-9 at N=128 or the weighted norms pick up ringing.
double default_dynamics_half_width(double drift);

}  // namespace kssim
