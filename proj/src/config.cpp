#include "dg2d/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dg2d/basis.hpp"

namespace dg2d {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected on/off, got '" + v + "'");
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    if (value == "supersonic_vortex") cfg.problem = Problem::supersonic_vortex;
    else if (value == "double_mach") cfg.problem = Problem::double_mach;
    else if (value == "custom") cfg.problem = Problem::custom;
    else throw ConfigError("unknown problem '" + value + "'");
  } else if (key == "mesh") {
    cfg.mesh = value;
  } else if (key == "p") {
    cfg.p = static_cast<int>(to_int(key, value));
  } else if (key == "rk") {
    cfg.rk_order = static_cast<int>(to_int(key, value));
  } else if (key == "cfl") {
    cfg.cfl = to_double(key, value);
  } else if (key == "limit") {
    cfg.limiting = to_bool(key, value);
  } else if (key == "t_end") {
    cfg.t_end = to_double(key, value);
  } else if (key == "steady_tol") {
    cfg.steady_tol = to_double(key, value);
  } else if (key == "max_steps") {
    cfg.max_steps = to_int(key, value);
  } else if (key == "output") {
    if (value == "none") cfg.output = OutputFormat::none;
    else if (value == "csv") cfg.output = OutputFormat::csv;
    else if (value == "vtk") cfg.output = OutputFormat::vtk;
    else throw ConfigError("unknown output format '" + value + "'");
  } else if (key == "output_every") {
    cfg.output_every = static_cast<int>(to_int(key, value));
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(to_int(key, value));
  } else if (key == "chunk") {
    cfg.chunk = static_cast<int>(to_int(key, value));
  } else if (key == "gamma") {
    cfg.gamma = to_double(key, value);
  } else if (key == "vortex_r_inner") {
    cfg.vortex.r_inner = to_double(key, value);
  } else if (key == "vortex_r_outer") {
    cfg.vortex.r_outer = to_double(key, value);
  } else if (key == "vortex_mach_inner") {
    cfg.vortex.mach_inner = to_double(key, value);
  } else if (key == "vortex_rho_inner") {
    cfg.vortex.rho_inner = to_double(key, value);
  } else if (key == "vortex_sound_speed_inner") {
    cfg.vortex.sound_speed_inner = to_double(key, value);
  } else if (key == "dmr_x0") {
    cfg.dmr_x0 = to_double(key, value);
  } else if (key == "dmr_shock_mach") {
    cfg.dmr_shock_mach = to_double(key, value);
  } else if (key == "dmr_angle_deg") {
    cfg.dmr_angle_deg = to_double(key, value);
  } else if (key == "inflow_rho") {
    cfg.inflow_rho = to_double(key, value);
  } else if (key == "inflow_u") {
    cfg.inflow_u = to_double(key, value);
  } else if (key == "inflow_v") {
    cfg.inflow_v = to_double(key, value);
  } else if (key == "inflow_p") {
    cfg.inflow_p = to_double(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    try {
      apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(RunConfig& cfg) {
  if (const char* env = std::getenv("DG2D_WORKERS")) {
    cfg.workers = static_cast<int>(to_int("DG2D_WORKERS", env));
  }
  if (cfg.p < 1 || cfg.p > kMaxDegree)
    throw ConfigError("p must be in [1," + std::to_string(kMaxDegree) + "]");
  if (cfg.limiting && cfg.p != 1) throw ConfigError("limiting requires p = 1");
  if (cfg.rk_order != 2 && cfg.rk_order != 4) throw ConfigError("rk must be 2 or 4");
  if (cfg.t_end.has_value() == cfg.steady_tol.has_value())
    throw ConfigError("exactly one of t_end and steady_tol must be set");
  if (cfg.cfl <= 0.0) throw ConfigError("cfl must be positive");
  if (cfg.gamma <= 1.0) throw ConfigError("gamma must exceed 1");
  if (cfg.chunk < 1) throw ConfigError("chunk must be at least 1");
  if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
  if (cfg.max_steps < 1) throw ConfigError("max_steps must be >= 1");
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::supersonic_vortex: return "supersonic_vortex";
    case Problem::double_mach: return "double_mach";
    case Problem::custom: return "custom";
  }
  return "?";
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::none: return "none";
    case OutputFormat::csv: return "csv";
    case OutputFormat::vtk: return "vtk";
  }
  return "?";
}

}  // namespace dg2d
