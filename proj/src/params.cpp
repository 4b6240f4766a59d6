#include "kssim/params.hpp"

#include "kssim/errors.hpp"

#include <cmath>

namespace kssim {

void ModelParams::validate() const {
  if (!(drift > 0.0)) throw ConfigError("drift rate must be positive");
  if (!(time_scale >= 0.0)) throw ConfigError("time-scale ratio must be nonnegative");
  if (!(weight_power > 3.0)) throw ConfigError("weight exponent must exceed 3");
  if (!(sobolev_index > 0.0 && sobolev_index < 1.0)) {
    throw ConfigError("homogeneous index must lie in (0, 1)");
  }
  if (!(target_rate >= 0.0)) throw ConfigError("target rate must be nonnegative");
  if (target_rate > 0.0 && !(target_rate < max_rate())) {
    throw ConfigError("target rate must stay below drift * (1 - index)");
  }
}

double default_box_half_width(double drift) { return 16.0 / std::sqrt(drift); }

double default_dynamics_half_width(double drift) { return 10.0 / std::sqrt(drift); }

}  // namespace kssim
