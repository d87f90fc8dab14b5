#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dg2d/output.hpp"
#include "dg2d/runner.hpp"

namespace {

// exit codes: 0 success, 1 config/mesh errors, 2 solver aborts

dg2d::RunConfig load_config(const std::string& path,
                            const std::vector<std::string>& overrides) {
  dg2d::RunConfig cfg = dg2d::parse_config_file(path);
  for (const std::string& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw dg2d::ConfigError("override '" + ov + "' is not key=value");
    dg2d::apply_override(cfg, ov.substr(0, eq), ov.substr(eq + 1));
  }
  return cfg;
}

struct CommonFlags {
  std::string mesh, limit, format, out;
  int p = 0, rk = 0, workers = -1;
  double cfl = 0.0;

  void apply(dg2d::RunConfig& cfg) const {
    if (!mesh.empty()) cfg.mesh = mesh;
    if (p > 0) cfg.p = p;
    if (rk > 0) cfg.rk_order = rk;
    if (cfl > 0.0) cfg.cfl = cfl;
    if (!limit.empty()) dg2d::apply_override(cfg, "limit", limit);
    if (workers >= 0) cfg.workers = workers;
    if (!out.empty()) cfg.out_dir = out;
    if (!format.empty()) dg2d::apply_override(cfg, "output", format);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dg2d - modal DG solver for 2D Euler flow on triangular meshes"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run a problem from a config file");
  std::string run_config;
  std::vector<std::string> run_overrides;
  CommonFlags run_flags;
  run_cmd->add_option("config", run_config, "key=value config file")->required();
  run_cmd->add_option("--set", run_overrides, "extra key=value overrides");
  run_cmd->add_option("--mesh", run_flags.mesh, "mesh path, letter A..F, or NXxNY");
  run_cmd->add_option("--p", run_flags.p, "polynomial degree 1..5");
  run_cmd->add_option("--rk", run_flags.rk, "Runge-Kutta order (2 or 4)");
  run_cmd->add_option("--cfl", run_flags.cfl, "CFL number");
  run_cmd->add_option("--limit", run_flags.limit, "slope limiting: on or off");
  run_cmd->add_option("--workers", run_flags.workers, "worker threads (0 = default)");
  run_cmd->add_option("--out", run_flags.out, "output directory");
  run_cmd->add_option("--format", run_flags.format, "field output format: none, csv, vtk");

  // convergence
  auto* conv_cmd = app.add_subcommand("convergence", "vortex mesh-refinement study");
  std::string conv_config, conv_meshes = "A,B,C,D", conv_out;
  std::vector<std::string> conv_overrides;
  CommonFlags conv_flags;
  conv_cmd->add_option("config", conv_config, "key=value config file")->required();
  conv_cmd->add_option("--meshes", conv_meshes, "comma-separated letters, e.g. A,B,C,D");
  conv_cmd->add_option("--set", conv_overrides, "extra key=value overrides");
  conv_cmd->add_option("--p", conv_flags.p, "polynomial degree 1..5");
  conv_cmd->add_option("--rk", conv_flags.rk, "Runge-Kutta order (2 or 4)");
  conv_cmd->add_option("--cfl", conv_flags.cfl, "CFL number");
  conv_cmd->add_option("--workers", conv_flags.workers, "worker threads");
  conv_cmd->add_option("--out", conv_out, "CSV output path (default stdout)");

  // mesh generation
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a structured mesh file");
  std::string mesh_problem = "vortex", mesh_spec = "A", mesh_out;
  mesh_cmd->add_option("--problem", mesh_problem, "vortex or double_mach");
  mesh_cmd->add_option("--spec", mesh_spec, "letter A..F (vortex) or NXxNY (double_mach)");
  mesh_cmd->add_option("--out", mesh_out, "output .msh path")->required();

  // mesh dump
  auto* dump_cmd = app.add_subcommand("dump-mesh", "print edge connectivity of a mesh");
  std::string dump_path, dump_out;
  dump_cmd->add_option("mesh", dump_path, ".msh file")->required();
  dump_cmd->add_option("--out", dump_out, "output path (default stdout)");

  // basis table dump
  auto* tab_cmd = app.add_subcommand("dump-tables", "print basis/quadrature tables as CSV");
  int tab_p = 1;
  std::string tab_out;
  tab_cmd->add_option("--p", tab_p, "polynomial degree 1..5")->required();
  tab_cmd->add_option("--out", tab_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      dg2d::RunConfig cfg = load_config(run_config, run_overrides);
      run_flags.apply(cfg);
      dg2d::validate(cfg);
      dg2d::RunResult rr = dg2d::run(cfg);
      dg2d::write_report(rr.report, std::cout, std::cout);
    } else if (*conv_cmd) {
      dg2d::RunConfig cfg = load_config(conv_config, conv_overrides);
      conv_flags.apply(cfg);
      dg2d::validate(cfg);
      auto rows = dg2d::convergence_study(cfg, conv_meshes);
      if (conv_out.empty()) {
        dg2d::write_convergence_csv(rows, std::cout);
      } else {
        std::ofstream os(conv_out);
        if (!os) throw dg2d::ConfigError("cannot open '" + conv_out + "'");
        dg2d::write_convergence_csv(rows, os);
        std::cout << "wrote " << conv_out << "\n";
      }
    } else if (*mesh_cmd) {
      std::string text;
      if (mesh_problem == "vortex") {
        text = dg2d::gen_vortex_msh(dg2d::vortex_level_from_letter(mesh_spec.at(0)));
      } else if (mesh_problem == "double_mach") {
        auto x = mesh_spec.find('x');
        if (x == std::string::npos)
          throw dg2d::ConfigError("double_mach spec must be NXxNY");
        text = dg2d::gen_double_mach_msh(std::stoi(mesh_spec.substr(0, x)),
                                         std::stoi(mesh_spec.substr(x + 1)));
      } else {
        throw dg2d::ConfigError("unknown mesh problem '" + mesh_problem + "'");
      }
      std::ofstream os(mesh_out);
      if (!os) throw dg2d::ConfigError("cannot open '" + mesh_out + "'");
      os << text;
      std::cout << "wrote " << mesh_out << "\n";
    } else if (*dump_cmd) {
      dg2d::Mesh mesh = dg2d::build_connectivity(dg2d::parse_msh_file(dump_path));
      if (dump_out.empty()) {
        dg2d::dump_edges(mesh, std::cout);
      } else {
        std::ofstream os(dump_out);
        if (!os) throw dg2d::ConfigError("cannot open '" + dump_out + "'");
        dg2d::dump_edges(mesh, os);
      }
    } else if (*tab_cmd) {
      dg2d::BasisTables tables = dg2d::build_tables(tab_p);
      if (tab_out.empty()) {
        dg2d::dump_tables_csv(tables, std::cout);
      } else {
        std::ofstream os(tab_out);
        if (!os) throw dg2d::ConfigError("cannot open '" + tab_out + "'");
        dg2d::dump_tables_csv(tables, os);
      }
    }
  } catch (const dg2d::SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
