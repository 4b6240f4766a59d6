#pragma once

#include <string>
#include <vector>

namespace kssim {

// One quantity compared against its acceptance threshold.
struct Measurement {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=", ">=" or "==" (flags use 1 == 1)
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::vector<Measurement> measurements;
  std::vector<std::string> notes;
};

inline constexpr int criterion_count = 10;

std::string criterion_title(int id);

// Runs acceptance criterion id (1..criterion_count); throws ConfigError otherwise.
CriterionResult run_criterion(int id);

// "criterion 3 PASS profile eps-convergence rates (12.4 s)" plus failing measurements.
std::string summary_line(const CriterionResult& r);

}  // namespace kssim
