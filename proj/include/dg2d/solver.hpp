#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dg2d/basis.hpp"
#include "dg2d/euler.hpp"
#include "dg2d/mesh.hpp"

namespace dg2d {

struct SolverAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solution coefficients stored equation-major, then basis index, with the
// element index contiguous innermost: data[((m*n_modes)+j)*n_elem + i].
struct CoefficientArray {
  int n_eq = 0;
  int n_modes = 0;
  int n_elem = 0;
  std::vector<double> data;

  CoefficientArray() = default;
  CoefficientArray(int eq, int modes, int elem)
      : n_eq(eq), n_modes(modes), n_elem(elem),
        data(static_cast<std::size_t>(eq) * modes * elem, 0.0) {}

  std::size_t idx(int m, int j, int i) const {
    return (static_cast<std::size_t>(m) * n_modes + j) * n_elem + i;
  }
  double& at(int m, int j, int i) { return data[idx(m, j, i)]; }
  double at(int m, int j, int i) const { return data[idx(m, j, i)]; }

  void fill_zero() { std::fill(data.begin(), data.end(), 0.0); }
};

// Every element owns three slots per buffer, one per canonical side.  The
// edge that lies on side q+1 of its left element writes that element's
// contribution into slot (q, left) of `surface_left`, and likewise for the
// right element into `surface_right`; slots are disjoint across edges, so
// the edge-parallel pass needs no atomics and the gather pass can add them
// back in a fixed order.
struct RhsBuffers {
  CoefficientArray volume;
  std::vector<double> surface_left;
  std::vector<double> surface_right;
  int n_eq = 0, n_modes = 0, n_elem = 0;

  RhsBuffers() = default;
  RhsBuffers(int eq, int modes, int elem)
      : volume(eq, modes, elem),
        surface_left(static_cast<std::size_t>(3) * eq * modes * elem, 0.0),
        surface_right(static_cast<std::size_t>(3) * eq * modes * elem, 0.0),
        n_eq(eq), n_modes(modes), n_elem(elem) {}

  std::size_t slot(int q, int m, int j, int i) const {
    return ((static_cast<std::size_t>(q) * n_eq + m) * n_modes + j) * n_elem + i;
  }
};

struct PassTimers {
  double volume = 0.0;
  double surface = 0.0;
  double rhs = 0.0;
  double limiter = 0.0;
  double other = 0.0;
};

struct SolverOptions {
  int rk_order = 4;      // 2 or 4
  double cfl = 0.3;
  bool limiting = false;
  int workers = 0;       // 0 = library default
  int chunk = 256;       // elements/edges per dispatched chunk
};

struct SolverContext {
  const Mesh* mesh = nullptr;
  const BasisTables* tables = nullptr;
  GasModel gas;
  const BoundaryConditions* bc = nullptr;
  SolverOptions options;
  mutable PassTimers timers;
};

struct SolverState {
  CoefficientArray coeffs;
  double t = 0.0;
  std::int64_t step_count = 0;
};

// L2 projection of pointwise initial data; exact for polynomial data of
// degree <= p.  Throws SolverAbort if u0 is inadmissible at any quadrature
// point.
CoefficientArray project_initial(const std::function<EulerState(Vec2)>& u0, const Mesh& mesh,
                                 const BasisTables& tables, const GasModel& gas);

void eval_volume_pass(const SolverContext& ctx, const CoefficientArray& coeffs,
                      CoefficientArray& rhs_volume);
void eval_surface_pass(const SolverContext& ctx, const CoefficientArray& coeffs, double t,
                       RhsBuffers& bufs);
void eval_rhs_pass(const SolverContext& ctx, const RhsBuffers& bufs, CoefficientArray& deriv);

// The three passes in sequence: volume, surface, gather.
void compute_rhs(const SolverContext& ctx, const CoefficientArray& coeffs, double t,
                 RhsBuffers& bufs, CoefficientArray& deriv);

// Barth-Jespersen slope limiting, in place; only valid for p = 1.  Each
// conserved variable is limited separately against the centroid range of the
// available edge neighbors.  A conservative positivity guard then scales
// deviations toward the cell mean where density or pressure at an evaluation
// point would approach vacuum; it is a no-op away from strong shocks.
void limit(const SolverContext& ctx, CoefficientArray& coeffs);

double stable_dt(const SolverContext& ctx, const CoefficientArray& coeffs);

using RhsOperator =
    std::function<void(const CoefficientArray& coeffs, double t, CoefficientArray& deriv)>;

// One explicit RK step of the configured order; returns max|c_new - c_old|.
// Intermediate stages and the result are limited when limiting is on.
double rk_step(const SolverContext& ctx, SolverState& state, double dt);
double rk_step(const SolverContext& ctx, SolverState& state, double dt, const RhsOperator& op,
               bool limiting);

struct SteadyResult {
  std::int64_t steps = 0;
  double residual = 0.0;
  bool converged = false;
};

SteadyResult run_to_steady(const SolverContext& ctx, SolverState& state, double tol,
                           std::int64_t max_steps,
                           const std::function<void(std::int64_t, double)>& on_step = {});

// Advance to exactly t_end (the last step is clipped); returns the residual
// of the final step.  Throws if max_steps is exhausted first.
double run_to_time(const SolverContext& ctx, SolverState& state, double t_end,
                   std::int64_t max_steps,
                   const std::function<void(std::int64_t, double)>& on_step = {});

// Advance a fixed number of steps at the stable timestep.
double run_fixed_steps(const SolverContext& ctx, SolverState& state, std::int64_t n_steps,
                       const std::function<void(std::int64_t, double)>& on_step = {});

// Little-endian binary checkpoint: magic, version, M, n_p, N, t, step, data.
void save_checkpoint(const SolverState& state, const std::string& path);
SolverState load_checkpoint(const std::string& path);

// Deterministic reductions over the current solution.
double total_mass(const Mesh& mesh, const CoefficientArray& coeffs);
double max_abs_diff(const CoefficientArray& a, const CoefficientArray& b);

}  // namespace dg2d
