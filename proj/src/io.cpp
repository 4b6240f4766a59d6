#include "kssim/io.hpp"

#include "kssim/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace kssim {

namespace {

std::string schema_line(const std::string& name) {
  return "# schema: " + name + " v" + std::to_string(csv_schema_version) + "\n";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json to_json(const ModelParams& p) {
  return Json{{"mu", p.drift}, {"eps", p.time_scale}, {"k", p.weight_power}, {"s", p.sobolev_index},
              {"lambda", p.target_rate}};
}

Json to_json(const BoundReport& r) {
  Json c = Json::object();
  for (const auto& [k, v] : r.constants) c[k] = number(v);
  return Json{{"id", r.id},
              {"pass", r.pass},
              {"worst_margin", number(r.worst_margin)},
              {"worst_location", number(r.worst_location)},
              {"constants", c},
              {"note", r.note}};
}

Json to_json(const std::vector<BoundReport>& r) {
  Json a = Json::array();
  for (const auto& x : r) a.push_back(to_json(x));
  return a;
}

Json to_json(const ConvergenceReport& r) {
  Json j{{"eps", r.eps_list}};
  Json q = Json::object();
  for (const auto& [name, devs] : r.deviations) {
    q[name] = Json{{"deviations", devs}, {"slope", number(r.slope.at(name))}, {"intercept", number(r.intercept.at(name))}};
  }
  j["quantities"] = q;
  return j;
}

Json to_json(const SpectrumReport& r, bool with_eigenvalues) {
  Json j{{"mode", r.mode}, {"deflated", r.deflated}, {"cells", r.cells}, {"radius", r.radius}, {"gap", number(r.gap)}};
  if (!r.eigenvalues.empty()) {
    j["leading"] = Json::array({r.eigenvalues.front().real(), r.eigenvalues.front().imag()});
  }
  if (with_eigenvalues) {
    Json a = Json::array();
    for (const auto& z : r.eigenvalues) a.push_back(Json::array({z.real(), z.imag()}));
    j["eigenvalues"] = a;
  }
  return j;
}

Json to_json(const DecayFit& f) {
  return Json{{"rate", number(f.rate)},         {"intercept", number(f.intercept)},
              {"window", {f.t_start, f.t_stop}}, {"residual", number(f.residual)},
              {"valid", f.valid}};
}

Json to_json(const NormVector& n) {
  return Json{{"l2k", n.l2k},     {"h1k", n.h1k},     {"hm1k", n.hm1k},     {"hdots", n.hdots},
              {"hdot1", n.hdot1}, {"hdot2", n.hdot2}, {"x_norm", n.x_norm}, {"y_norm", n.y_norm}};
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Json to_json(const CriterionResult& r) {
  Json j;
  j["criterion"] = r.id;
  j["title"] = r.title;
  j["pass"] = r.pass;
  j["seconds"] = r.seconds;
  Json ms = Json::array();
  for (const auto& m : r.measurements) {
    ms.push_back({{"name", m.name}, {"value", number(m.value)}, {"relation", m.relation}, {"limit", number(m.limit)},
                  {"pass", m.pass}});
  }
  j["measurements"] = std::move(ms);
  j["notes"] = r.notes;
  return j;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& prof) {
  std::ostringstream os;
  os << schema_line("kssim-profile");
  const Json meta{{"mu", prof.params.drift},
                  {"eps", prof.params.time_scale},
                  {"r_max", prof.grid.r_max},
                  {"intervals", prof.grid.size() - 1},
                  {"residual", prof.residual},
                  {"iterations", prof.iterations}};
  os << "# meta: " << meta.dump() << "\n";
  os << "r,P,dP,lapP,Q,dQ\n";
  for (std::size_t i = 0; i < prof.grid.size(); ++i) {
    os << format_number(prof.grid.r[i]) << ',' << format_number(prof.potential[i]) << ','
       << format_number(prof.dpotential[i]) << ',' << format_number(prof.lap_potential[i]) << ','
       << format_number(prof.density[i]) << ',' << format_number(prof.ddensity[i]) << '\n';
  }
  write_text_atomic(path, os.str());
}

void write_spectra_csv(const std::filesystem::path& path, const std::vector<SpectrumReport>& spectra) {
  std::ostringstream os;
  os << schema_line("kssim-spectra");
  os << "m,deflated,re,im\n";
  for (const auto& s : spectra) {
    for (const auto& z : s.eigenvalues) {
      os << s.mode << ',' << (s.deflated ? 1 : 0) << ',' << format_number(z.real()) << ','
         << format_number(z.imag()) << '\n';
    }
  }
  write_text_atomic(path, os.str());
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ostringstream os;
  os << schema_line("kssim-trajectory");
  os << "t,l2k_g,h1k_g,hdots_w,hdot1_w,hdot2_w,x_norm,y_norm,mass_g,boundary_share_w\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& n = traj.norms[i];
    os << format_number(traj.times[i]) << ',' << format_number(n.l2k) << ',' << format_number(n.h1k) << ','
       << format_number(n.hdots) << ',' << format_number(n.hdot1) << ',' << format_number(n.hdot2) << ','
       << format_number(n.x_norm) << ',' << format_number(n.y_norm) << ',' << format_number(traj.mass[i]) << ','
       << format_number(traj.boundary_share[i]) << '\n';
  }
  write_text_atomic(path, os.str());
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& rep) {
  std::ostringstream os;
  os << schema_line("kssim-convergence");
  os << "eps";
  for (const auto& [name, devs] : rep.deviations) os << ',' << name;
  os << '\n';
  for (std::size_t i = 0; i < rep.eps_list.size(); ++i) {
    os << format_number(rep.eps_list[i]);
    for (const auto& [name, devs] : rep.deviations) os << ',' << format_number(devs[i]);
    os << '\n';
  }
  write_text_atomic(path, os.str());
}

std::string sweep_csv_header(int modes) {
  std::string h = schema_line("kssim-sweep") + "mu,eps,k,s,mass,sandwich_pass";
  for (int m = 0; m < modes; ++m) h += ",gap_m" + std::to_string(m);
  return h + ",decay_rate,status,error\n";
}

std::string sweep_csv_row(const SweepRow& row) {
  std::ostringstream os;
  os << format_number(row.drift) << ',' << format_number(row.time_scale) << ',' << format_number(row.weight_power)
     << ',' << format_number(row.sobolev_index) << ',' << format_number(row.mass) << ','
     << (row.sandwich_pass ? 1 : 0);
  for (double g : row.gaps) os << ',' << format_number(g);
  os << ',' << format_number(row.decay_rate) << ',' << row.status << ',' << csv_escape(row.error) << '\n';
  return os.str();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace kssim
