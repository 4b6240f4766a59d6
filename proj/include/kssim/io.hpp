#pragma once

#include "kssim/bounds.hpp"
#include "kssim/checks.hpp"
#include "kssim/dynamics.hpp"
#include "kssim/modes.hpp"
#include "kssim/profiles.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace kssim {

using Json = nlohmann::ordered_json;

// Every CSV starts with "# schema: <name> v<version>"; an optional
// "# meta: {...}" line follows, then the column header.
inline constexpr int csv_schema_version = 1;

// Shortest round-trip decimal form.
std::string format_number(double v);

Json to_json(const ModelParams& p);
Json to_json(const BoundReport& r);
Json to_json(const std::vector<BoundReport>& r);
Json to_json(const ConvergenceReport& r);
Json to_json(const SpectrumReport& r, bool with_eigenvalues = false);
Json to_json(const DecayFit& f);
Json to_json(const NormVector& n);
Json to_json(const CriterionResult& r);

void write_json(const std::filesystem::path& path, const Json& j);
// Writes to a sibling temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& prof);
void write_spectra_csv(const std::filesystem::path& path, const std::vector<SpectrumReport>& spectra);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& rep);

struct SweepRow {
  double drift = 0.0;
  double time_scale = 0.0;
  double weight_power = 0.0;
  double sobolev_index = 0.0;
  double mass = 0.0;
  bool sandwich_pass = false;
  std::vector<double> gaps;  // per mode, in mode order
  double decay_rate = 0.0;
  std::string status;        // "ok" or "error"
  std::string error;
};

std::string sweep_csv_header(int modes);
std::string sweep_csv_row(const SweepRow& row);

// FNV-1a, 64 bit, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace kssim
