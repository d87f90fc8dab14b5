#include "dg2d/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dg2d/output.hpp"

namespace dg2d {

namespace {

double wall_now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool is_vortex_letter(const std::string& s) {
  return s.size() == 1 && ((s[0] >= 'A' && s[0] <= 'F') || (s[0] >= 'a' && s[0] <= 'f'));
}

bool is_grid_spec(const std::string& s, int& nx, int& ny) {
  auto x = s.find('x');
  if (x == std::string::npos) return false;
  try {
    std::size_t p1 = 0, p2 = 0;
    nx = std::stoi(s.substr(0, x), &p1);
    ny = std::stoi(s.substr(x + 1), &p2);
    return p1 == x && p2 == s.size() - x - 1 && nx > 0 && ny > 0;
  } catch (const std::exception&) {
    return false;
  }
}

std::string field_path(const RunConfig& cfg, std::int64_t step) {
  std::ostringstream os;
  os << cfg.out_dir << "/fields_" << std::setw(7) << std::setfill('0') << step
     << (cfg.output == OutputFormat::vtk ? ".vtk" : ".csv");
  return os.str();
}

void write_fields(const RunConfig& cfg, const ProblemSetup& setup, const SolverState& state) {
  if (cfg.output == OutputFormat::none) return;
  std::string path = field_path(cfg, state.step_count);
  if (cfg.output == OutputFormat::vtk)
    export_vtk(state.coeffs, setup.mesh, setup.tables, setup.gas, path);
  else
    export_csv(state.coeffs, setup.mesh, setup.tables, setup.gas, path);
}

}  // namespace

std::string mesh_text_for(const RunConfig& cfg) {
  int nx = 0, ny = 0;
  if (is_vortex_letter(cfg.mesh)) {
    if (cfg.problem == Problem::double_mach)
      throw ConfigError("letter meshes belong to the vortex family; double_mach needs NXxNY");
    return gen_vortex_msh(vortex_level_from_letter(cfg.mesh[0]), cfg.vortex);
  }
  if (is_grid_spec(cfg.mesh, nx, ny)) {
    if (cfg.problem == Problem::double_mach) return gen_double_mach_msh(nx, ny, cfg.dmr_x0);
    throw ConfigError("NXxNY mesh specs are only defined for double_mach");
  }
  std::ifstream in(cfg.mesh, std::ios::binary);
  if (!in) throw ConfigError("cannot open mesh '" + cfg.mesh + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemSetup make_setup(const RunConfig& cfg) {
  ProblemSetup setup;
  setup.gas.gamma = cfg.gamma;
  setup.mesh = build_connectivity(parse_msh(mesh_text_for(cfg)));
  setup.tables = build_tables(cfg.p);

  switch (cfg.problem) {
    case Problem::supersonic_vortex: {
      VortexGeometry geo = cfg.vortex;
      GasModel gas = setup.gas;
      setup.bc = vortex_boundary(geo, gas);
      setup.initial = [geo, gas](Vec2 x) { return vortex_exact(x, geo, gas); };
      setup.exact = setup.initial;
      break;
    }
    case Problem::double_mach: {
      DoubleMachSetup dm;
      dm.x0 = cfg.dmr_x0;
      dm.shock_mach = cfg.dmr_shock_mach;
      dm.angle_deg = cfg.dmr_angle_deg;
      dm.post = rankine_hugoniot_post(
          dm.pre, dm.shock_mach,
          {std::sin(dm.angle_deg * M_PI / 180.0), -std::cos(dm.angle_deg * M_PI / 180.0)},
          setup.gas);
      setup.bc = double_mach_boundary(dm, setup.gas);
      setup.initial = [dm](Vec2 x) { return double_mach_initial(x, dm); };
      setup.front_cut = [dm](Vec2 a, Vec2 b, Vec2 c) {
        auto side = [&](Vec2 v) {
          double rad = dm.angle_deg * M_PI / 180.0;
          return v.x < dm.x0 + v.y * std::cos(rad) / std::sin(rad);
        };
        bool sa = side(a), sb = side(b), sc = side(c);
        return sa != sb || sb != sc;
      };
      break;
    }
    case Problem::custom: {
      EulerState inflow;
      inflow.rho = cfg.inflow_rho;
      inflow.mx = cfg.inflow_rho * cfg.inflow_u;
      inflow.my = cfg.inflow_rho * cfg.inflow_v;
      inflow.E = cfg.inflow_p / (cfg.gamma - 1.0) +
                 0.5 * cfg.inflow_rho * (cfg.inflow_u * cfg.inflow_u +
                                         cfg.inflow_v * cfg.inflow_v);
      setup.bc.inflow_state = inflow;
      setup.initial = [inflow](Vec2) { return inflow; };
      break;
    }
  }
  return setup;
}

double compute_l2_error(const CoefficientArray& coeffs, const Mesh& mesh,
                        const BasisTables& tb,
                        const std::function<EulerState(Vec2)>& exact) {
  // per-element partial sums in parallel, combined serially in element order
  const int n = mesh.n_elements();
  std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    Vec2 a = mesh.vertex_of(i, 0), b = mesh.vertex_of(i, 1), c = mesh.vertex_of(i, 2);
    double acc = 0.0;
    for (int k = 0; k < tb.n_quad; ++k) {
      Vec2 rs = tb.r_interior[k];
      double rho_h = 0.0;
      for (int j = 0; j < tb.n_p; ++j) rho_h += coeffs.at(0, j, i) * tb.phi_int(k, j);
      Vec2 x = a + rs.x * (b - a) + rs.y * (c - a);
      double diff = rho_h - exact(x).rho;
      acc += tb.w_interior[k] * diff * diff;
    }
    partial[i] = mesh.elements[i].det_jac * acc;
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += partial[i];
  return std::sqrt(total);
}

RunResult run(const RunConfig& cfg, const ProblemSetup& setup, bool write_outputs) {
  SolverContext ctx;
  ctx.mesh = &setup.mesh;
  ctx.tables = &setup.tables;
  ctx.gas = setup.gas;
  ctx.bc = &setup.bc;
  ctx.options.rk_order = cfg.rk_order;
  ctx.options.cfl = cfg.cfl;
  ctx.options.limiting = cfg.limiting;
  ctx.options.workers = cfg.workers;
  ctx.options.chunk = cfg.chunk;

  RunResult result;
  double t0 = wall_now();

  result.state.coeffs = project_initial(setup.initial, setup.mesh, setup.tables, setup.gas);
  if (setup.front_cut) {
    for (int i = 0; i < setup.mesh.n_elements(); ++i) {
      if (!setup.front_cut(setup.mesh.vertex_of(i, 0), setup.mesh.vertex_of(i, 1),
                           setup.mesh.vertex_of(i, 2)))
        continue;
      for (int m = 0; m < kEq; ++m)
        for (int j = 1; j < setup.tables.n_p; ++j) result.state.coeffs.at(m, j, i) = 0.0;
    }
  }
  if (cfg.limiting) limit(ctx, result.state.coeffs);

  if (write_outputs && cfg.output != OutputFormat::none) {
    std::filesystem::create_directories(cfg.out_dir);
    write_fields(cfg, setup, result.state);
  }

  auto emit = [&](std::int64_t step) {
    if (write_outputs && cfg.output_every > 0 && step % cfg.output_every == 0)
      write_fields(cfg, setup, result.state);
  };

  if (cfg.steady_tol) {
    SteadyResult sr = run_to_steady(ctx, result.state, *cfg.steady_tol, cfg.max_steps,
                                    [&](std::int64_t s, double) { emit(s); });
    if (!sr.converged)
      throw SolverAbort("steady run did not converge within " + std::to_string(cfg.max_steps) +
                        " steps (residual " + std::to_string(sr.residual) + ")");
    result.report.residual = sr.residual;
  } else {
    result.report.residual = run_to_time(ctx, result.state, *cfg.t_end, cfg.max_steps,
                                         [&](std::int64_t s, double) { emit(s); });
  }

  result.report.wall_time = wall_now() - t0;
  result.report.steps = result.state.step_count;
  result.report.t_final = result.state.t;
  if (setup.exact)
    result.report.l2_density_error =
        compute_l2_error(result.state.coeffs, setup.mesh, setup.tables, setup.exact);

  const PassTimers& tm = ctx.timers;
  double known = tm.volume + tm.surface + tm.rhs + tm.limiter + tm.other;
  double rest = std::max(0.0, result.report.wall_time - known);
  double total = known + rest;
  if (total > 0.0) {
    result.report.share_volume = tm.volume / total;
    result.report.share_surface = tm.surface / total;
    result.report.share_rhs = tm.rhs / total;
    result.report.share_limiter = tm.limiter / total;
    result.report.share_other = (tm.other + rest) / total;
  }

  if (write_outputs && cfg.output != OutputFormat::none) write_fields(cfg, setup, result.state);
  return result;
}

RunResult run(const RunConfig& cfg) {
  ProblemSetup setup = make_setup(cfg);
  RunResult result = run(cfg, setup, true);

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream human(cfg.out_dir + "/report.txt");
  std::ofstream kv(cfg.out_dir + "/report.kv");
  write_report(result.report, human, kv);
  return result;
}

void write_report(const ErrorReport& r, std::ostream& human, std::ostream& kv) {
  human.precision(6);
  human << "steps:            " << r.steps << "\n";
  human << "final time:       " << r.t_final << "\n";
  human << "final residual:   " << r.residual << "\n";
  if (r.l2_density_error >= 0.0) human << "L2 density error: " << r.l2_density_error << "\n";
  if (r.convergence_rate) human << "convergence rate: " << *r.convergence_rate << "\n";
  human << "wall time [s]:    " << r.wall_time << "\n";
  human << "time shares: volume " << r.share_volume << ", surface " << r.share_surface
        << ", rhs " << r.share_rhs << ", limiter " << r.share_limiter << ", other "
        << r.share_other << "\n";

  kv.precision(17);
  kv << "steps=" << r.steps << "\n";
  kv << "t_final=" << r.t_final << "\n";
  kv << "residual=" << r.residual << "\n";
  if (r.l2_density_error >= 0.0) kv << "l2_density_error=" << r.l2_density_error << "\n";
  if (r.convergence_rate) kv << "convergence_rate=" << *r.convergence_rate << "\n";
  kv << "wall_time_s=" << r.wall_time << "\n";
  kv << "share_volume=" << r.share_volume << "\n";
  kv << "share_surface=" << r.share_surface << "\n";
  kv << "share_rhs=" << r.share_rhs << "\n";
  kv << "share_limiter=" << r.share_limiter << "\n";
  kv << "share_other=" << r.share_other << "\n";
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg,
                                              const std::string& letters) {
  if (cfg.problem != Problem::supersonic_vortex)
    throw ConfigError("convergence studies use the supersonic vortex problem");
  std::vector<ConvergenceRow> rows;
  std::optional<double> prev_error;
  for (char letter : letters) {
    if (letter == ',' || letter == ' ') continue;
    RunConfig mesh_cfg = cfg;
    mesh_cfg.mesh = std::string(1, letter);
    ProblemSetup setup = make_setup(mesh_cfg);
    RunResult rr = run(mesh_cfg, setup, false);
    ConvergenceRow row;
    row.mesh_letter = static_cast<char>(std::toupper(letter));
    row.elements = setup.mesh.n_elements();
    row.error = rr.report.l2_density_error;
    row.steps = rr.report.steps;
    row.wall_time = rr.report.wall_time;
    if (prev_error) row.rate = std::log2(*prev_error / row.error);
    prev_error = row.error;
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os) {
  os << "mesh,elements,l2_density_error,rate,steps,wall_time_s\n";
  os.precision(12);
  for (const auto& r : rows) {
    os << r.mesh_letter << ',' << r.elements << ',' << r.error << ',';
    if (r.rate) os << *r.rate;
    os << ',' << r.steps << ',' << r.wall_time << "\n";
  }
}

}  // namespace dg2d
