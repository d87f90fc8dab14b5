#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dg2d/config.hpp"
#include "dg2d/solver.hpp"

namespace dg2d {

struct ErrorReport {
  double l2_density_error = -1.0;  // < 0 when no exact solution is available
  std::optional<double> convergence_rate;
  std::int64_t steps = 0;
  double wall_time = 0.0;
  double t_final = 0.0;
  double residual = 0.0;
  // wall-time fractions per pass; they sum to 1
  double share_volume = 0.0, share_surface = 0.0, share_rhs = 0.0, share_limiter = 0.0,
         share_other = 0.0;
};

void write_report(const ErrorReport& r, std::ostream& human, std::ostream& kv);

// Problem-specific pieces assembled from a validated RunConfig.
struct ProblemSetup {
  Mesh mesh;
  BasisTables tables;
  GasModel gas;
  BoundaryConditions bc;
  std::function<EulerState(Vec2)> initial;
  std::function<EulerState(Vec2)> exact;  // empty when unknown
  // For initial data with a jump: elements this predicate marks as cut by
  // the front start from their cell mean (the L2 slopes of a projected jump
  // mix the two phases unphysically within a cell).
  std::function<bool(Vec2, Vec2, Vec2)> front_cut;
};

ProblemSetup make_setup(const RunConfig& cfg);

// Mesh text for the configured mesh spec: generated for letters / NXxNY,
// loaded from disk otherwise.
std::string mesh_text_for(const RunConfig& cfg);

struct RunResult {
  ErrorReport report;
  SolverState state;
};

// Executes the configured problem to its stopping rule, writing field output
// and the report into cfg.out_dir.
RunResult run(const RunConfig& cfg);

// In-memory variant used by tests and the convergence driver; no file output
// unless cfg.output says so.
RunResult run(const RunConfig& cfg, const ProblemSetup& setup, bool write_outputs);

// L2 error in density against an exact solution, via the interior rule.
double compute_l2_error(const CoefficientArray& coeffs, const Mesh& mesh,
                        const BasisTables& tables,
                        const std::function<EulerState(Vec2)>& exact);

struct ConvergenceRow {
  char mesh_letter;
  int elements;
  double error;
  std::optional<double> rate;
  std::int64_t steps;
  double wall_time;
};

// Runs the configured problem over the named vortex meshes and reports
// errors and observed rates.
std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg,
                                              const std::string& letters);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os);

}  // namespace dg2d
