#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dg2d/problems.hpp"

namespace dg2d {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Problem { supersonic_vortex, double_mach, custom };
enum class OutputFormat { none, csv, vtk };

// Flat key=value configuration with command-line overrides.  `mesh` is either
// a .msh path, a letter A..F (supersonic vortex family), or NXxNY (double
// Mach channel).
struct RunConfig {
  Problem problem = Problem::supersonic_vortex;
  std::string mesh = "A";
  int p = 1;
  int rk_order = 4;
  double cfl = 0.3;
  bool limiting = false;

  // exactly one stopping rule
  std::optional<double> t_end;
  std::optional<double> steady_tol;
  long long max_steps = 2'000'000;

  OutputFormat output = OutputFormat::none;
  int output_every = 0;  // 0 = final state only
  std::string out_dir = ".";

  int workers = 0;
  int chunk = 256;
  double gamma = 1.4;

  VortexGeometry vortex;
  double dmr_x0 = 1.0 / 6.0;
  double dmr_shock_mach = 10.0;
  double dmr_angle_deg = 60.0;

  // code -3 state for custom problems: rho, u, v, p
  double inflow_rho = 1.0, inflow_u = 0.0, inflow_v = 0.0, inflow_p = 1.0;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Apply one "key=value" override on top of an existing config.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Enforces invariants: p in [1,5], limiting => p == 1, exactly one stopping
// rule, rk_order in {2,4}.  Also applies the DG2D_WORKERS environment
// override.
void validate(RunConfig& cfg);

std::string to_string(Problem p);
std::string to_string(OutputFormat f);

}  // namespace dg2d
