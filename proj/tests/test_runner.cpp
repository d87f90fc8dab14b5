#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dg2d/output.hpp"
#include "dg2d/reference.hpp"
#include "dg2d/runner.hpp"
#include "test_util.hpp"

using namespace dg2d;
using namespace dg2d::testing;

TEST_CASE("config parsing, overrides and validation") {
  RunConfig cfg = parse_config(
      "# comment\n"
      "problem = supersonic_vortex\n"
      "mesh = B\n"
      "p = 2\n"
      "rk = 4\n"
      "cfl = 0.5\n"
      "steady_tol = 1e-10\n"
      "output = vtk\n"
      "workers = 3\n");
  CHECK(cfg.problem == Problem::supersonic_vortex);
  CHECK(cfg.mesh == "B");
  CHECK(cfg.p == 2);
  CHECK(cfg.cfl == 0.5);
  CHECK(cfg.output == OutputFormat::vtk);
  CHECK(cfg.workers == 3);

  apply_override(cfg, "p", "3");
  CHECK(cfg.p == 3);
  CHECK_NOTHROW(validate(cfg));

  CHECK_THROWS_AS(apply_override(cfg, "nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(parse_config("p: 3\n"), ConfigError);

  RunConfig bad = cfg;
  bad.p = 7;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.limiting = true;  // p = 3
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.t_end = 0.5;  // both stopping rules set
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.steady_tol.reset();  // no stopping rule
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.rk_order = 3;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("environment variable overrides the worker count") {
  RunConfig cfg;
  cfg.steady_tol = 1e-10;
  setenv("DG2D_WORKERS", "5", 1);
  validate(cfg);
  unsetenv("DG2D_WORKERS");
  CHECK(cfg.workers == 5);
}

TEST_CASE("l2 error definition") {
  TestProblem tp = make_problem(two_triangle_square(4), 2);
  // exact field vs its own projection: error below 1e-12
  auto linear = [](Vec2 x) { return make_state(1.0 + 0.2 * x.x + 0.1 * x.y, 0.0, 0.0, 1.0); };
  CoefficientArray coeffs = project_initial(linear, tp.mesh, tp.tables, tp.gas);
  CHECK(compute_l2_error(coeffs, tp.mesh, tp.tables, linear) < 1e-12);

  // zero field vs constant 1 on the unit-area square: error exactly 1
  CoefficientArray zero(kEq, tp.tables.n_p, tp.mesh.n_elements());
  auto one = [](Vec2) { return make_state(1.0, 0.0, 0.0, 1.0); };
  CHECK(compute_l2_error(zero, tp.mesh, tp.tables, one) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projected exact vortex leaves a residual that shrinks under refinement") {
  auto residual_norm = [](int level, int p) {
    RunConfig cfg;
    cfg.mesh = std::string(1, static_cast<char>('A' + level));
    cfg.p = p;
    cfg.steady_tol = 1e-14;
    validate(cfg);
    ProblemSetup setup = make_setup(cfg);
    SolverContext ctx;
    ctx.mesh = &setup.mesh;
    ctx.tables = &setup.tables;
    ctx.gas = setup.gas;
    ctx.bc = &setup.bc;
    CoefficientArray coeffs =
        project_initial(setup.initial, setup.mesh, setup.tables, setup.gas);
    RhsBuffers bufs(kEq, setup.tables.n_p, setup.mesh.n_elements());
    CoefficientArray deriv(kEq, setup.tables.n_p, setup.mesh.n_elements());
    compute_rhs(ctx, coeffs, 0.0, bufs, deriv);
    double m = 0.0;
    for (double v : deriv.data) m = std::max(m, std::abs(v));
    return m;
  };
  double r0 = residual_norm(0, 2);
  double r1 = residual_norm(1, 2);
  CHECK(r1 < r0);
  CHECK(r0 / r1 > 2.0);
}

TEST_CASE("run is reproducible across invocations and worker counts") {
  auto run_once = [](int workers) {
    RunConfig cfg;
    cfg.problem = Problem::supersonic_vortex;
    cfg.mesh = "A";
    cfg.p = 1;
    cfg.rk_order = 4;
    cfg.cfl = 0.9;
    cfg.steady_tol = 1e-8;
    cfg.workers = workers;
    validate(cfg);
    ProblemSetup setup = make_setup(cfg);
    return run(cfg, setup, false);
  };
  RunResult a = run_once(1);
  RunResult b = run_once(1);
  RunResult c = run_once(2);
  CHECK(a.report.steps == b.report.steps);
  CHECK(a.report.l2_density_error == b.report.l2_density_error);
  CHECK(a.report.steps == c.report.steps);
  CHECK(a.report.l2_density_error == c.report.l2_density_error);
  CHECK(max_abs_diff(a.state.coeffs, c.state.coeffs) == 0.0);

  // pass time shares account for the whole run
  double sum = a.report.share_volume + a.report.share_surface + a.report.share_rhs +
               a.report.share_limiter + a.report.share_other;
  CHECK(sum == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("convergence study reports errors and second-order rates at p=1") {
  RunConfig cfg;
  cfg.problem = Problem::supersonic_vortex;
  cfg.mesh = "A";
  cfg.p = 1;
  cfg.rk_order = 4;
  cfg.cfl = 0.9;
  cfg.steady_tol = 1e-10;
  validate(cfg);
  auto rows = convergence_study(cfg, "A,B");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].mesh_letter == 'A');
  CHECK(rows[0].elements == 180);
  CHECK_FALSE(rows[0].rate.has_value());
  CHECK(rows[1].elements == 720);
  REQUIRE(rows[1].rate.has_value());
  CHECK(*rows[1].rate == doctest::Approx(2.0).epsilon(0.2));

  std::ostringstream os;
  write_convergence_csv(rows, os);
  CHECK(os.str().find("mesh,elements,l2_density_error,rate,steps,wall_time_s") !=
        std::string::npos);
}

TEST_CASE("vtk output: counts, duplicated corners, scripted reader round-trip") {
  TestProblem tp = make_problem(two_triangle_square(4), 1);
  CoefficientArray coeffs = project_initial(smooth_random_field(41), tp.mesh, tp.tables,
                                            tp.gas);
  std::string path = "vtk_roundtrip_test.vtk";
  export_vtk(coeffs, tp.mesh, tp.tables, tp.gas, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  int n_points = 0, n_cells = 0;
  std::vector<double> xs, ys;
  std::vector<std::vector<double>> fields;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "POINTS") {
      ls >> n_points;
      for (int k = 0; k < n_points; ++k) {
        double x, y, z;
        in >> x >> y >> z;
        xs.push_back(x);
        ys.push_back(y);
      }
    } else if (word == "CELLS") {
      ls >> n_cells;
    } else if (word == "SCALARS") {
      std::getline(in, line);  // LOOKUP_TABLE
      std::vector<double> vals(n_points);
      for (int k = 0; k < n_points; ++k) in >> vals[k];
      fields.push_back(vals);
    }
  }
  CHECK(n_points == 6);  // 3 corners per element, duplicated
  CHECK(n_cells == 2);
  REQUIRE(fields.size() == 5);  // rho, rho_u, rho_v, E, p

  // values recover the element-local corner evaluation to output precision
  const Vec2 corners[3] = {{0, 0}, {1, 0}, {0, 1}};
  for (int i = 0; i < 2; ++i) {
    for (int c = 0; c < 3; ++c) {
      EulerState u;
      for (int m = 0; m < kEq; ++m) {
        double s = 0.0;
        for (int j = 0; j < tp.tables.n_p; ++j)
          s += coeffs.at(m, j, i) * eval_basis(1, j, corners[c]);
        u[m] = s;
      }
      int row = 3 * i + c;
      for (int m = 0; m < kEq; ++m)
        CHECK(fields[m][row] == doctest::Approx(u[m]).epsilon(1e-9));
      CHECK(fields[4][row] == doctest::Approx(pressure(u, tp.gas)).epsilon(1e-9));
      Vec2 v = tp.mesh.vertex_of(i, c);
      CHECK(xs[row] == doctest::Approx(v.x).epsilon(1e-9));
      CHECK(ys[row] == doctest::Approx(v.y).epsilon(1e-9));
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("vtk of a free stream holds identical values everywhere") {
  TestProblem tp = make_problem(gen_box_msh(2, 2, 1.0, 1.0, 4), 1);
  EulerState uniform = make_state(1.5, 0.3, 0.2, 2.0);
  CoefficientArray coeffs =
      project_initial([&](Vec2) { return uniform; }, tp.mesh, tp.tables, tp.gas);
  std::string path = "vtk_freestream_test.vtk";
  export_vtk(coeffs, tp.mesh, tp.tables, tp.gas, path);
  std::ifstream in(path);
  std::string line;
  bool in_rho = false;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.rfind("SCALARS rho ", 0) == 0) {
      std::getline(in, line);
      in_rho = true;
      continue;
    }
    if (in_rho) {
      if (line.rfind("SCALARS", 0) == 0) break;
      if (!line.empty()) vals.push_back(std::stod(line));
    }
  }
  REQUIRE(vals.size() == 24);
  for (double v : vals) CHECK(v == doctest::Approx(1.5).epsilon(1e-10));
  std::remove(path.c_str());
}

TEST_CASE("csv export lists one row per element") {
  TestProblem tp = make_problem(gen_box_msh(2, 2, 1.0, 1.0, 4), 1);
  CoefficientArray coeffs = project_initial(
      [](Vec2) { return make_state(1.0, 0.1, 0.0, 1.0); }, tp.mesh, tp.tables, tp.gas);
  std::string path = "csv_export_test.csv";
  export_csv(coeffs, tp.mesh, tp.tables, tp.gas, path);
  std::ifstream in(path);
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 1 + tp.mesh.n_elements());
  std::remove(path.c_str());
}

TEST_CASE("run() writes reports and field files") {
  RunConfig cfg;
  cfg.problem = Problem::supersonic_vortex;
  cfg.mesh = "A";
  cfg.p = 1;
  cfg.rk_order = 2;
  cfg.cfl = 0.9;
  cfg.steady_tol = 1e-4;
  cfg.output = OutputFormat::vtk;
  cfg.out_dir = "run_output_test";
  validate(cfg);
  RunResult rr = run(cfg);
  CHECK(rr.report.steps > 0);
  CHECK(std::filesystem::exists("run_output_test/report.txt"));
  CHECK(std::filesystem::exists("run_output_test/report.kv"));

  std::ifstream kv("run_output_test/report.kv");
  std::string text((std::istreambuf_iterator<char>(kv)), std::istreambuf_iterator<char>());
  CHECK(text.find("l2_density_error=") != std::string::npos);
  CHECK(text.find("steps=") != std::string::npos);

  bool found_fields = false;
  for (const auto& entry : std::filesystem::directory_iterator("run_output_test"))
    if (entry.path().string().find("fields_") != std::string::npos) found_fields = true;
  CHECK(found_fields);
  std::filesystem::remove_all("run_output_test");
}

TEST_CASE("mesh specs resolve to generators or files") {
  RunConfig cfg;
  cfg.steady_tol = 1e-10;
  cfg.mesh = "A";
  CHECK(mesh_text_for(cfg).find("$Nodes") != std::string::npos);

  cfg.problem = Problem::double_mach;
  cfg.mesh = "20x5";
  CHECK(mesh_text_for(cfg).find("$Nodes") != std::string::npos);

  cfg.mesh = "A";
  CHECK_THROWS_AS(mesh_text_for(cfg), ConfigError);

  cfg.problem = Problem::supersonic_vortex;
  cfg.mesh = "no_such_file.msh";
  CHECK_THROWS_AS(mesh_text_for(cfg), ConfigError);
}

TEST_CASE("tiny double mach run stays admissible and ends at t_end") {
  RunConfig cfg;
  cfg.problem = Problem::double_mach;
  cfg.mesh = "40x10";
  cfg.p = 1;
  cfg.rk_order = 2;
  cfg.cfl = 0.3;
  cfg.limiting = true;
  cfg.t_end = 0.02;
  validate(cfg);
  ProblemSetup setup = make_setup(cfg);
  RunResult rr = run(cfg, setup, false);
  CHECK(rr.state.t == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(rr.report.share_limiter > 0.0);
}
