#include "kssim/bounds.hpp"
#include "kssim/checks.hpp"
#include "kssim/dynamics.hpp"
#include "kssim/errors.hpp"
#include "kssim/io.hpp"
#include "kssim/modes.hpp"
#include "kssim/profiles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace kssim;

namespace {

struct RunConfig {
  std::string output = "ksctl-out";
  std::uint64_t seed = 42;
  struct {
    double mu = 1.0;
    double eps = 0.02;
    double k = 4.0;
    double s = 0.5;
  } model;
  struct {
    int n = 4000;
    double theta = 0.9;
    double alpha = 0.95;
    bool sandwich = false;
  } profile;
  struct {
    std::string modes = "0..3";
    int cells = 1500;
    bool deflate = true;  // m = 0 only
  } spectrum;
  struct {
    int n = 128;
    double half_width = 0.0;  // 0 picks the dynamics default
    double dt = 2e-3;
    double t_end = 10.0;
    double amplitude = 1e-3;
    std::string coupling = "full";
    std::string scheme = "bdf2";
    int record_every = 10;
    double window_start = -1.0;  // negative: t_end / 5
  } evolve;
  struct {
    std::string criterion = "all";
  } check;
  struct {
    std::string mu = "0.5,1,2";
    std::string eps = "0.005,0.01,0.02";
    std::string k = "4";
    std::string s = "0.5";
    int modes = 4;
    int cells = 500;
    int n = 128;
    double t_end = 10.0;
  } sweep;
};

Json config_to_json(const RunConfig& c) {
  return Json{
      {"output", c.output},
      {"seed", c.seed},
      {"model", {{"mu", c.model.mu}, {"eps", c.model.eps}, {"k", c.model.k}, {"s", c.model.s}}},
      {"profile",
       {{"n", c.profile.n}, {"theta", c.profile.theta}, {"alpha", c.profile.alpha}, {"sandwich", c.profile.sandwich}}},
      {"spectrum", {{"modes", c.spectrum.modes}, {"cells", c.spectrum.cells}, {"deflate", c.spectrum.deflate}}},
      {"evolve",
       {{"n", c.evolve.n},
        {"half_width", c.evolve.half_width},
        {"dt", c.evolve.dt},
        {"t_end", c.evolve.t_end},
        {"amplitude", c.evolve.amplitude},
        {"coupling", c.evolve.coupling},
        {"scheme", c.evolve.scheme},
        {"record_every", c.evolve.record_every},
        {"window_start", c.evolve.window_start}}},
      {"check", {{"criterion", c.check.criterion}}},
      {"sweep",
       {{"mu", c.sweep.mu},
        {"eps", c.sweep.eps},
        {"k", c.sweep.k},
        {"s", c.sweep.s},
        {"modes", c.sweep.modes},
        {"cells", c.sweep.cells},
        {"n", c.sweep.n},
        {"t_end", c.sweep.t_end}}},
  };
}

// Overlays a config document onto c; the document must be a subset of config_to_json's shape.
void merge_config(const Json& doc, const Json& shape, const std::string& where, Json& into) {
  if (!doc.is_object()) throw ConfigError("config schema error: " + where + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!shape.contains(key)) throw ConfigError("config schema error: unknown key " + path);
    const Json& expect = shape.at(key);
    if (expect.is_object()) {
      merge_config(value, expect, path, into[key]);
      continue;
    }
    const bool ok = (expect.is_number() && value.is_number()) || (expect.is_string() && value.is_string()) ||
                    (expect.is_boolean() && value.is_boolean());
    if (!ok) throw ConfigError("config schema error: " + path + " has the wrong type");
    if (expect.is_number_integer() && !value.is_number_integer()) {
      throw ConfigError("config schema error: " + path + " must be an integer");
    }
    into[key] = value;
  }
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.output = j["output"].get<std::string>();
  c.seed = j["seed"].get<std::uint64_t>();
  const auto& m = j["model"];
  c.model = {m["mu"], m["eps"], m["k"], m["s"]};
  const auto& p = j["profile"];
  c.profile = {p["n"], p["theta"], p["alpha"], p["sandwich"]};
  const auto& s = j["spectrum"];
  c.spectrum = {s["modes"], s["cells"], s["deflate"]};
  const auto& e = j["evolve"];
  c.evolve = {e["n"],         e["half_width"], e["dt"],           e["t_end"],        e["amplitude"],
              e["coupling"], e["scheme"],      e["record_every"], e["window_start"]};
  c.check.criterion = j["check"]["criterion"];
  const auto& w = j["sweep"];
  c.sweep = {w["mu"], w["eps"], w["k"], w["s"], w["modes"], w["cells"], w["n"], w["t_end"]};
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config schema error: not valid JSON: ") + e.what());
  }
  const Json shape = config_to_json(RunConfig{});
  Json merged = shape;
  merge_config(doc, shape, "", merged);
  return config_from_json(merged);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number list: " + text);
    }
  }
  if (out.empty()) throw ConfigError("empty list: " + text);
  return out;
}

// "0..3" or "0,2,5"
std::vector<int> parse_modes(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(text.substr(0, dots));
    const int b = std::stoi(text.substr(dots + 2));
    for (int m = a; m <= b; ++m) out.push_back(m);
  } else {
    for (double v : parse_list(text)) out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError("no modes in " + text);
  for (int m : out) {
    if (m < 0) throw ConfigError("negative angular mode; use the m >= 0 block");
  }
  return out;
}

ModelParams model_params(double mu, double eps, double k, double s) {
  ModelParams p;
  p.drift = mu;
  p.time_scale = eps;
  p.weight_power = k;
  p.sobolev_index = s;
  p.validate();
  return p;
}

ModelParams model_params(const RunConfig& c) {
  return model_params(c.model.mu, c.model.eps, c.model.k, c.model.s);
}

Coupling parse_coupling(const std::string& s) {
  if (s == "full") return Coupling::Full;
  if (s == "linear") return Coupling::Linear;
  if (s == "density") return Coupling::DensityOnly;
  throw ConfigError("coupling must be full, linear or density");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "bdf2") return Scheme::ImexBdf2;
  if (s == "euler") return Scheme::ImexEuler;
  throw ConfigError("scheme must be bdf2 or euler");
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KSSIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<std::size_t>(v);
  }
  return n;
}

// Runs task(i) for i in [0, count) on at most worker_count() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) task(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
}

// -- subcommands -------------------------------------------------------------

int cmd_profile(const RunConfig& c, Json& summary) {
  const ModelParams p = model_params(c);
  const RadialProfile prof = solve_profile(p, profile_grid_for(p, default_box_half_width(p.drift), c.profile.n));
  write_profile_csv(fs::path(c.output) / "profile.csv", prof);
  std::vector<BoundReport> reports = check_uniform_bounds(prof, c.profile.theta);
  if (c.profile.sandwich) {
    for (auto& r : check_profile_sandwich(prof, closed_form_limit(prof.grid), c.profile.alpha)) {
      reports.push_back(std::move(r));
    }
  }
  bool pass = prof.density[0] == 8.0;
  for (const auto& r : reports) pass = pass && r.pass;
  Json rep{{"params", to_json(p)},
           {"iterations", prof.iterations},
           {"residual", prof.residual},
           {"damped", prof.damped},
           {"density_at_origin", prof.density[0]},
           {"quartic_coefficient", quartic_coefficient(prof)},
           {"mass", profile_mass(prof)},
           {"bounds", to_json(reports)},
           {"pass", pass}};
  write_json(fs::path(c.output) / "reports" / "profile.json", rep);
  std::cout << "profile: residual " << prof.residual << ", Q(0) = " << prof.density[0] << ", mass "
            << profile_mass(prof) << (pass ? "" : " [bound check failed]") << "\n";
  for (const auto& r : reports) {
    if (!r.pass) std::cerr << "failed check: " << r.id << " (worst margin " << r.worst_margin << ")\n";
  }
  summary["pass"] = pass;
  return pass ? 0 : 1;
}

int cmd_spectrum(const RunConfig& c, Json& summary) {
  const ModelParams p = model_params(c);
  const RadialProfile prof = solve_profile(p, profile_grid_for(p, default_box_half_width(p.drift)));
  const std::vector<int> modes = parse_modes(c.spectrum.modes);
  std::vector<SpectrumReport> spectra(modes.size());
  parallel_for(modes.size(), [&](std::size_t i) {
    ModeOptions opt;
    opt.cells = c.spectrum.cells;
    opt.deflate = c.spectrum.deflate && modes[i] == 0;
    spectra[i] = spectrum(assemble_mode_operator(modes[i], prof, opt));
  });
  write_spectra_csv(fs::path(c.output) / "spectra.csv", spectra);
  Json rep{{"params", to_json(p)}, {"modes", Json::array()}};
  bool pass = true;
  for (const auto& s : spectra) {
    rep["modes"].push_back(to_json(s));
    pass = pass && s.gap >= 0.9 * p.drift;
    std::cout << "m=" << s.mode << (s.deflated ? " (deflated)" : "") << " gap " << s.gap << "\n";
  }
  rep["pass"] = pass;
  write_json(fs::path(c.output) / "reports" / "spectrum.json", rep);
  summary["pass"] = pass;
  return pass ? 0 : 1;
}

int cmd_evolve(const RunConfig& c, Json& summary) {
  const ModelParams p = model_params(c);
  const double L = c.evolve.half_width > 0.0 ? c.evolve.half_width : default_dynamics_half_width(p.drift);
  const GridPtr grid = make_planar_grid(L, c.evolve.n);
  const LinearizedSystem sys =
      make_linearized_system(p, solve_profile(p, profile_grid_for(p, L)), grid);
  EvolveConfig cfg;
  cfg.dt = c.evolve.dt;
  cfg.t_end = c.evolve.t_end;
  cfg.coupling = parse_coupling(c.evolve.coupling);
  cfg.scheme = parse_scheme(c.evolve.scheme);
  cfg.record_every = c.evolve.record_every;
  const State initial = make_initial_state(grid, p, c.seed, c.evolve.amplitude);
  const Trajectory traj = evolve(initial, sys, cfg);
  write_trajectory_csv(fs::path(c.output) / "trajectory.csv", traj);
  Json rep{{"params", to_json(p)}, {"half_width", L}, {"stable", traj.stable}};
  bool pass = traj.stable;
  if (!traj.stable) {
    rep["blowup_time"] = traj.blowup_time;
  } else {
    const double ta = c.evolve.window_start >= 0.0 ? c.evolve.window_start : cfg.t_end / 5.0;
    const DecayFit fit = fit_decay(traj, ta, cfg.t_end);
    rep["fit"] = to_json(fit);
    rep["target_rate"] = p.max_rate();
    pass = fit.valid && fit.rate >= p.max_rate();
    std::cout << "evolve: X rate " << fit.rate << " on [" << ta << ", " << cfg.t_end << "], residual "
              << fit.residual << "\n";
  }
  rep["boundary_share_final"] = traj.boundary_share.back();
  rep["pass"] = pass;
  write_json(fs::path(c.output) / "reports" / "decay_fit.json", rep);
  summary["pass"] = pass;
  return pass ? 0 : 1;
}

int cmd_check(const RunConfig& c, Json& summary) {
  std::vector<int> ids;
  if (c.check.criterion == "all") {
    for (int i = 1; i <= criterion_count; ++i) ids.push_back(i);
  } else {
    for (double v : parse_list(c.check.criterion)) ids.push_back(static_cast<int>(v));
  }
  bool pass = true;
  Json results = Json::array();
  for (int id : ids) {
    const CriterionResult r = run_criterion(id);
    std::cout << summary_line(r) << std::endl;
    write_json(fs::path(c.output) / "reports" / ("criterion_" + std::to_string(id) + ".json"), to_json(r));
    results.push_back({{"criterion", id}, {"pass", r.pass}});
    pass = pass && r.pass;
  }
  summary["results"] = results;
  summary["pass"] = pass;
  return pass ? 0 : 1;
}

SweepRow sweep_point(const RunConfig& c, double mu, double eps, double k, double s) {
  SweepRow row{mu, eps, k, s};
  try {
    const ModelParams p = model_params(mu, eps, k, s);
    const RadialProfile prof = solve_profile(p, profile_grid_for(p, default_box_half_width(mu)));
    row.mass = profile_mass(prof);
    row.sandwich_pass = true;
    for (const auto& r : check_profile_sandwich(prof, closed_form_limit(prof.grid), c.profile.alpha)) {
      row.sandwich_pass = row.sandwich_pass && r.pass;
    }
    for (int m = 0; m < c.sweep.modes; ++m) {
      ModeOptions opt;
      opt.cells = c.sweep.cells;
      opt.deflate = m == 0;
      row.gaps.push_back(spectrum(assemble_mode_operator(m, prof, opt)).gap);
    }
    const double L = default_dynamics_half_width(mu);
    const GridPtr grid = make_planar_grid(L, c.sweep.n);
    const LinearizedSystem sys = make_linearized_system(p, solve_profile(p, profile_grid_for(p, L)), grid);
    EvolveConfig cfg;
    cfg.t_end = c.sweep.t_end;
    cfg.dt = std::min({c.evolve.dt, 0.1 * eps, 0.01 / mu});
    cfg.record_every = std::max(1, static_cast<int>(std::lround(0.02 / cfg.dt)));
    const Trajectory traj = evolve(make_initial_state(grid, p, c.seed, c.evolve.amplitude), sys, cfg);
    if (!traj.stable) throw BlowUp("perturbation blew up", traj.blowup_time);
    row.decay_rate = fit_decay(traj, cfg.t_end / 5.0, cfg.t_end).rate;
    row.status = "ok";
  } catch (const std::exception& e) {
    row.gaps.resize(c.sweep.modes, std::nan(""));
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

int cmd_sweep(const RunConfig& c, Json& summary) {
  struct Point {
    double mu, eps, k, s;
  };
  std::vector<Point> points;
  for (double mu : parse_list(c.sweep.mu)) {
    for (double eps : parse_list(c.sweep.eps)) {
      for (double k : parse_list(c.sweep.k)) {
        for (double s : parse_list(c.sweep.s)) points.push_back({mu, eps, k, s});
      }
    }
  }
  if (c.sweep.modes < 1) throw ConfigError("sweep needs at least one mode");
  std::vector<std::optional<SweepRow>> rows(points.size());
  std::mutex io;
  const fs::path out = fs::path(c.output) / "sweep.csv";
  auto flush = [&] {
    // rows land in lattice order; unfinished points are left out until they complete
    std::string text = sweep_csv_header(c.sweep.modes);
    for (const auto& r : rows) {
      if (r) text += sweep_csv_row(*r);
    }
    write_text_atomic(out, text);
  };
  {
    std::lock_guard lock(io);
    flush();
  }
  parallel_for(points.size(), [&](std::size_t i) {
    const auto& pt = points[i];
    SweepRow row = sweep_point(c, pt.mu, pt.eps, pt.k, pt.s);
    std::lock_guard lock(io);
    std::cout << "mu=" << pt.mu << " eps=" << pt.eps << " k=" << pt.k << " s=" << pt.s << ": " << row.status
              << (row.error.empty() ? "" : " (" + row.error + ")") << std::endl;
    rows[i] = std::move(row);
    flush();
  });
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r->status != "ok"; });
  summary["points"] = points.size();
  summary["failed_points"] = failed;
  summary["pass"] = failed == 0;
  return failed == 0 ? 0 : 1;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Finds --config before CLI11 runs so that flags can override file values.
std::optional<std::string> prescan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    if (auto path = prescan_config(argc, argv)) cfg = load_config(*path);
  } catch (const std::exception& e) {
    std::cerr << "ksctl: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Self-similar chemotaxis stability lab"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; command-line flags override it");
  app.add_option("-o,--out", cfg.output, "output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "sample and initial-data seed")->capture_default_str();

  auto model_flags = [&](CLI::App* sub) {
    sub->add_option("--mu", cfg.model.mu, "drift rate")->capture_default_str();
    sub->add_option("--eps", cfg.model.eps, "time-scale parameter")->capture_default_str();
    sub->add_option("--k", cfg.model.k, "weight exponent")->capture_default_str();
    sub->add_option("--s", cfg.model.s, "homogeneous Sobolev index")->capture_default_str();
  };

  auto* profile = app.add_subcommand("profile", "solve the radial profile and check its bounds");
  model_flags(profile);
  profile->add_option("--n", cfg.profile.n, "radial intervals")->capture_default_str();
  profile->add_option("--theta", cfg.profile.theta, "Gaussian envelope fraction")->capture_default_str();
  profile->add_option("--alpha", cfg.profile.alpha, "sandwich shift")->capture_default_str();
  profile->add_flag("--sandwich,!--no-sandwich", cfg.profile.sandwich, "also check the two-sided sandwich");

  auto* spec = app.add_subcommand("spectrum", "eigenvalues of the angular blocks of the density operator");
  model_flags(spec);
  spec->add_option("--modes", cfg.spectrum.modes, "range a..b or list")->capture_default_str();
  spec->add_option("--cells", cfg.spectrum.cells, "radial cells")->capture_default_str();
  spec->add_flag("--deflate,!--no-deflate", cfg.spectrum.deflate, "drop the mass mode from m=0");

  auto* evo = app.add_subcommand("evolve", "time-step a perturbation of the profile");
  model_flags(evo);
  evo->add_option("--n", cfg.evolve.n, "planar grid points per side")->capture_default_str();
  evo->add_option("--half-width", cfg.evolve.half_width, "box half width (0: default)")->capture_default_str();
  evo->add_option("--dt", cfg.evolve.dt)->capture_default_str();
  evo->add_option("--t-end", cfg.evolve.t_end)->capture_default_str();
  evo->add_option("--amplitude", cfg.evolve.amplitude, "initial X norm")->capture_default_str();
  evo->add_option("--coupling", cfg.evolve.coupling, "full | linear | density")->capture_default_str();
  evo->add_option("--scheme", cfg.evolve.scheme, "bdf2 | euler")->capture_default_str();
  evo->add_option("--record-every", cfg.evolve.record_every)->capture_default_str();
  evo->add_option("--window-start", cfg.evolve.window_start, "fit window start (negative: t_end/5)");

  auto* check = app.add_subcommand("check", "run acceptance criteria");
  check->add_option("--criterion", cfg.check.criterion, "id, comma list, or all")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "parameter lattice sweep");
  sweep->add_option("--mu", cfg.sweep.mu, "comma list")->capture_default_str();
  sweep->add_option("--eps", cfg.sweep.eps, "comma list")->capture_default_str();
  sweep->add_option("--k", cfg.sweep.k, "comma list")->capture_default_str();
  sweep->add_option("--s", cfg.sweep.s, "comma list")->capture_default_str();
  sweep->add_option("--modes", cfg.sweep.modes, "angular modes 0..modes-1")->capture_default_str();
  sweep->add_option("--cells", cfg.sweep.cells)->capture_default_str();
  sweep->add_option("--n", cfg.sweep.n)->capture_default_str();
  sweep->add_option("--t-end", cfg.sweep.t_end)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  Json summary;
  int code = 0;
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    fs::create_directories(fs::path(cfg.output) / "reports");
    if (name == "profile") code = cmd_profile(cfg, summary);
    else if (name == "spectrum") code = cmd_spectrum(cfg, summary);
    else if (name == "evolve") code = cmd_evolve(cfg, summary);
    else if (name == "check") code = cmd_check(cfg, summary);
    else code = cmd_sweep(cfg, summary);
  } catch (const std::exception& e) {
    std::cerr << "ksctl " << name << ": " << e.what() << "\n";
    summary["error"] = e.what();
    code = 1;
  }
  const Json config = config_to_json(cfg);
  const Json manifest{
      {"command", name},
      {"version", KSSIM_VERSION},
      {"csv_schema_version", csv_schema_version},
      {"config", config},
      {"config_hash", fnv1a_hex(config.dump())},
      {"exit_code", code},
      {"summary", summary},
      {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
      {"timestamp", utc_timestamp()},
  };
  try {
    write_json(fs::path(cfg.output) / "manifest.json", manifest);
  } catch (const std::exception& e) {
    std::cerr << "ksctl: cannot write manifest: " << e.what() << "\n";
    return code == 0 ? 1 : code;
  }
  return code;
}
