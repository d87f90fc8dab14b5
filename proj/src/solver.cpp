#include "dg2d/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dg2d {

namespace {

constexpr int kBlock = 64;  // elements per inner block in element-parallel passes

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int ctx_threads(const SolverContext& ctx) {
#ifdef _OPENMP
  return ctx.options.workers > 0 ? ctx.options.workers : omp_get_max_threads();
#else
  (void)ctx;
  return 1;
#endif
}

// First (lowest element/edge id) admissibility failure wins, so diagnostics
// do not depend on scheduling.
struct AbortRecord {
  std::atomic<bool> failed{false};
  int id = -1;
  int point = -1;
  EulerState state;
  std::string where;

  void record(const std::string& where_, int id_, int point_, const EulerState& s) {
#pragma omp critical(dg2d_abort)
    {
      if (!failed.load() || id_ < id) {
        failed.store(true);
        id = id_;
        point = point_;
        state = s;
        where = where_;
      }
    }
  }

  void throw_if_failed(const GasModel& gas) const {
    if (!failed.load()) return;
    throw SolverAbort(where + ": inadmissible state at id " + std::to_string(id) +
                      ", point " + std::to_string(point) + " (rho=" + std::to_string(state.rho) +
                      ", p=" + std::to_string(pressure(state, gas)) + ")");
  }
};

Vec2 map_to_physical(const Mesh& mesh, int elem, Vec2 rs) {
  Vec2 a = mesh.vertex_of(elem, 0);
  Vec2 b = mesh.vertex_of(elem, 1);
  Vec2 c = mesh.vertex_of(elem, 2);
  return a + rs.x * (b - a) + rs.y * (c - a);
}

}  // namespace

CoefficientArray project_initial(const std::function<EulerState(Vec2)>& u0, const Mesh& mesh,
                                 const BasisTables& tables, const GasModel& gas) {
  const int n = mesh.n_elements();
  CoefficientArray coeffs(kEq, tables.n_p, n);
  AbortRecord abort;
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < tables.n_quad; ++k) {
      Vec2 x = map_to_physical(mesh, i, tables.r_interior[k]);
      EulerState u = u0(x);
      if (!admissible(u, gas)) {
        abort.record("project_initial", i, k, u);
        continue;
      }
      double w = tables.w_interior[k];
      for (int j = 0; j < tables.n_p; ++j) {
        double wphi = w * tables.phi_int(k, j);
        for (int m = 0; m < kEq; ++m) coeffs.at(m, j, i) += wphi * u[m];
      }
    }
  }
  abort.throw_if_failed(gas);
  return coeffs;
}

void eval_volume_pass(const SolverContext& ctx, const CoefficientArray& coeffs,
                      CoefficientArray& rhs_volume) {
  const Mesh& mesh = *ctx.mesh;
  const BasisTables& tb = *ctx.tables;
  const int n = mesh.n_elements();
  const int np = tb.n_p;
  const GasModel gas = ctx.gas;
  const int n_blocks = (n + kBlock - 1) / kBlock;
  const int chunk_blocks = std::max(1, ctx.options.chunk / kBlock);
  AbortRecord abort;
  double t0 = now();

  rhs_volume.fill_zero();
#pragma omp parallel for schedule(dynamic, chunk_blocks) num_threads(ctx_threads(ctx))
  for (int blk = 0; blk < n_blocks; ++blk) {
    const int i0 = blk * kBlock;
    const int nb = std::min(kBlock, n - i0);
    double u[kEq][kBlock], f1[kEq][kBlock], f2[kEq][kBlock];
    for (int k = 0; k < tb.n_quad; ++k) {
      for (int m = 0; m < kEq; ++m)
        for (int ib = 0; ib < nb; ++ib) u[m][ib] = 0.0;
      for (int m = 0; m < kEq; ++m) {
        for (int j = 0; j < np; ++j) {
          const double phi = tb.phi_int(k, j);
          const double* c = &coeffs.data[coeffs.idx(m, j, i0)];
          for (int ib = 0; ib < nb; ++ib) u[m][ib] += phi * c[ib];
        }
      }
      for (int ib = 0; ib < nb; ++ib) {
        EulerState s{u[0][ib], u[1][ib], u[2][ib], u[3][ib]};
        if (!admissible(s, gas)) {
          abort.record("eval_volume", i0 + ib, k, s);
          s = {1.0, 0.0, 0.0, 2.5};  // placeholder; the pass aborts afterwards
        }
        Flux fx, fy;
        euler_flux(s, gas, fx, fy);
        for (int m = 0; m < kEq; ++m) {
          f1[m][ib] = fx[m];
          f2[m][ib] = fy[m];
        }
      }
      const double w = tb.w_interior[k];
      for (int j = 0; j < np; ++j) {
        const double gr = tb.dphi_dr(k, j);
        const double gs = tb.dphi_ds(k, j);
        for (int m = 0; m < kEq; ++m) {
          double* out = &rhs_volume.data[rhs_volume.idx(m, j, i0)];
          for (int ib = 0; ib < nb; ++ib) {
            const auto& tau = mesh.elements[i0 + ib].tau;
            const double tx = tau[0] * gr + tau[2] * gs;
            const double ty = tau[1] * gr + tau[3] * gs;
            out[ib] += w * (f1[m][ib] * tx + f2[m][ib] * ty);
          }
        }
      }
    }
  }
  ctx.timers.volume += now() - t0;
  abort.throw_if_failed(gas);
}

void eval_surface_pass(const SolverContext& ctx, const CoefficientArray& coeffs, double t,
                       RhsBuffers& bufs) {
  const Mesh& mesh = *ctx.mesh;
  const BasisTables& tb = *ctx.tables;
  const int n_edges = mesh.n_edges();
  const int np = tb.n_p;
  const int nk = tb.n_edge_pts;
  const GasModel gas = ctx.gas;
  const BoundaryConditions* bc = ctx.bc;
  AbortRecord abort;
  std::atomic<bool> bc_error{false};
  std::string bc_message;
  double t0 = now();

#pragma omp parallel for schedule(dynamic, ctx.options.chunk) num_threads(ctx_threads(ctx))
  for (int ei = 0; ei < n_edges; ++ei) {
    const Edge& e = mesh.edges[ei];
    const bool boundary = e.is_boundary();
    constexpr int kMaxModes = basis_count(kMaxDegree);
    double cl[kEq][kMaxModes], cr[kEq][kMaxModes];
    for (int m = 0; m < kEq; ++m)
      for (int j = 0; j < np; ++j) cl[m][j] = coeffs.at(m, j, e.left);
    if (!boundary) {
      for (int m = 0; m < kEq; ++m)
        for (int j = 0; j < np; ++j) cr[m][j] = coeffs.at(m, j, e.right);
    }
    double acc_l[kEq][kMaxModes] = {}, acc_r[kEq][kMaxModes] = {};
    const Vec2 normal{e.nx, e.ny};
    const Vec2 a = mesh.vertices[e.v0], b = mesh.vertices[e.v1];

    for (int k = 0; k < nk; ++k) {
      EulerState ul, ur;
      for (int m = 0; m < kEq; ++m) {
        double s = 0.0;
        for (int j = 0; j < np; ++j) s += cl[m][j] * tb.phi_side(e.side_left, k, j);
        ul[m] = s;
      }
      if (boundary) {
        Vec2 x = 0.5 * (1.0 - tb.xi_edge[k]) * a + 0.5 * (1.0 + tb.xi_edge[k]) * b;
        if (!admissible(ul, gas)) {
          abort.record("eval_surface", ei, k, ul);
          continue;
        }
        try {
          ur = ghost_state(ul, e.right, x, normal, t, *bc);
        } catch (const std::exception& ex) {
          if (!bc_error.exchange(true)) {
#pragma omp critical(dg2d_bc_error)
            bc_message = ex.what();
          }
          continue;
        }
      } else {
        const int kr = nk - 1 - k;  // opposite traversal on the right element
        for (int m = 0; m < kEq; ++m) {
          double s = 0.0;
          for (int j = 0; j < np; ++j) s += cr[m][j] * tb.phi_side(e.side_right, kr, j);
          ur[m] = s;
        }
      }
      if (!admissible(ul, gas) || !admissible(ur, gas)) {
        abort.record("eval_surface", ei, k, admissible(ul, gas) ? ur : ul);
        continue;
      }
      Flux fn = riemann_solver(ul, ur, normal, gas);
      const double wl = e.half_length * tb.w_edge[k];
      const int kr = nk - 1 - k;
      for (int j = 0; j < np; ++j) {
        const double pl = tb.phi_side(e.side_left, k, j);
        for (int m = 0; m < kEq; ++m) acc_l[m][j] -= wl * fn[m] * pl;
        if (!boundary) {
          const double pr = tb.phi_side(e.side_right, kr, j);
          for (int m = 0; m < kEq; ++m) acc_r[m][j] += wl * fn[m] * pr;
        }
      }
    }

    const int ql = e.side_left - 1;
    for (int m = 0; m < kEq; ++m)
      for (int j = 0; j < np; ++j)
        bufs.surface_left[bufs.slot(ql, m, j, e.left)] = acc_l[m][j];
    if (!boundary) {
      const int qr = e.side_right - 1;
      for (int m = 0; m < kEq; ++m)
        for (int j = 0; j < np; ++j)
          bufs.surface_right[bufs.slot(qr, m, j, e.right)] = acc_r[m][j];
    }
  }
  ctx.timers.surface += now() - t0;
  if (bc_error.load()) throw SolverAbort("eval_surface: " + bc_message);
  abort.throw_if_failed(gas);
}

void eval_rhs_pass(const SolverContext& ctx, const RhsBuffers& bufs, CoefficientArray& deriv) {
  const Mesh& mesh = *ctx.mesh;
  const int n = mesh.n_elements();
  const int np = bufs.n_modes;
  double t0 = now();

#pragma omp parallel for schedule(dynamic, ctx.options.chunk) num_threads(ctx_threads(ctx))
  for (int i = 0; i < n; ++i) {
    const Element& el = mesh.elements[i];
    const double inv_det = 1.0 / el.det_jac;
    bool from_left[3];
    for (int q = 0; q < 3; ++q) from_left[q] = mesh.edges[el.edge[q]].left == i;
    for (int m = 0; m < kEq; ++m) {
      for (int j = 0; j < np; ++j) {
        double acc = bufs.volume.at(m, j, i);
        for (int q = 0; q < 3; ++q) {
          acc += from_left[q] ? bufs.surface_left[bufs.slot(q, m, j, i)]
                              : bufs.surface_right[bufs.slot(q, m, j, i)];
        }
        deriv.at(m, j, i) = acc * inv_det;
      }
    }
  }
  ctx.timers.rhs += now() - t0;
}

void compute_rhs(const SolverContext& ctx, const CoefficientArray& coeffs, double t,
                 RhsBuffers& bufs, CoefficientArray& deriv) {
  eval_volume_pass(ctx, coeffs, bufs.volume);
  eval_surface_pass(ctx, coeffs, t, bufs);
  eval_rhs_pass(ctx, bufs, deriv);
}

void limit(const SolverContext& ctx, CoefficientArray& coeffs) {
  const Mesh& mesh = *ctx.mesh;
  const BasisTables& tb = *ctx.tables;
  if (tb.p != 1)
    throw std::invalid_argument("slope limiting is only supported for p = 1");
  const int n = mesh.n_elements();
  const int nk = tb.n_edge_pts;
  const double sqrt2 = std::sqrt(2.0);
  double t0 = now();

  // All points the scheme evaluates this solution at: the interior rule, the
  // edge Gauss points and the edge midpoints used for wave speeds.  phi_0 is
  // the constant sqrt(2), so only the two linear modes vary per point.
  const int n_pts = tb.n_quad + 3 * nk + 3;
  double phi1[64], phi2[64];
  double max_phi1 = 0.0, max_phi2 = 0.0;
  {
    int idx = 0;
    for (int k = 0; k < tb.n_quad; ++k, ++idx) {
      phi1[idx] = tb.phi_int(k, 1);
      phi2[idx] = tb.phi_int(k, 2);
    }
    for (int q = 1; q <= 3; ++q)
      for (int k = 0; k < nk; ++k, ++idx) {
        phi1[idx] = tb.phi_side(q, k, 1);
        phi2[idx] = tb.phi_side(q, k, 2);
      }
    for (int q = 1; q <= 3; ++q, ++idx) {
      phi1[idx] = tb.phi_side_mid(q, 1);
      phi2[idx] = tb.phi_side_mid(q, 2);
    }
    for (int k = 0; k < n_pts; ++k) {
      max_phi1 = std::max(max_phi1, std::abs(phi1[k]));
      max_phi2 = std::max(max_phi2, std::abs(phi2[k]));
    }
  }
  const int pt_edge_begin = tb.n_quad;

#pragma omp parallel for schedule(dynamic, ctx.options.chunk) num_threads(ctx_threads(ctx))
  for (int i = 0; i < n; ++i) {
    double c0[kEq], c1[kEq], c2[kEq];
    for (int m = 0; m < kEq; ++m) {
      c0[m] = coeffs.at(m, 0, i);
      c1[m] = coeffs.at(m, 1, i);
      c2[m] = coeffs.at(m, 2, i);
    }
    int nb[3];
    for (int q = 0; q < 3; ++q) nb[q] = mesh.neighbor(i, q);

    // Barth-Jespersen per conserved variable: clamp deviations at the edge
    // Gauss points to the centroid range of the available neighbors.  For
    // p = 1 the linear modes vanish at the centroid, so a centroid value is
    // just the constant-mode coefficient times phi_0.
    for (int m = 0; m < kEq; ++m) {
      const double uc = c0[m] * sqrt2;
      double umax = uc, umin = uc;
      for (int q = 0; q < 3; ++q) {
        if (nb[q] < 0) continue;
        double un = coeffs.at(m, 0, nb[q]) * sqrt2;
        umax = std::max(umax, un);
        umin = std::min(umin, un);
      }
      const double tol = 1e-13 * (std::abs(uc) + (umax - umin));
      double alpha = 1.0;
      for (int k = pt_edge_begin; k < pt_edge_begin + 3 * nk; ++k) {
        const double d = c1[m] * phi1[k] + c2[m] * phi2[k];
        double a = 1.0;
        if (d > tol)
          a = (umax - uc) / d;
        else if (d < -tol)
          a = (umin - uc) / d;
        alpha = std::min(alpha, std::clamp(a, 0.0, 1.0));
      }
      c1[m] *= alpha;
      c2[m] *= alpha;
    }

    // Positivity guard: componentwise limiting can still leave evaluation
    // points with negative pressure near very strong shocks.  Scale all
    // deviations toward the (admissible) cell mean until density and
    // pressure clear a small relative floor.  A componentwise box bound
    // skips the pointwise sweep away from near-vacuum states; pressure is
    // monotone in each variable over the box, so the skip is conservative.
    EulerState mean{c0[0] * sqrt2, c0[1] * sqrt2, c0[2] * sqrt2, c0[3] * sqrt2};
    const double p_mean = pressure(mean, ctx.gas);
    if (mean.rho > 0.0 && p_mean > 0.0) {
      const double eps_rho = 1e-8 * mean.rho;
      const double eps_p = 1e-8 * p_mean;
      double dev[kEq];
      for (int m = 0; m < kEq; ++m)
        dev[m] = std::abs(c1[m]) * max_phi1 + std::abs(c2[m]) * max_phi2;
      const double rho_floor = mean.rho - dev[0];
      bool safe = rho_floor > eps_rho;
      if (safe) {
        const double mx_peak = std::abs(mean.mx) + dev[1];
        const double my_peak = std::abs(mean.my) + dev[2];
        const double p_floor =
            (ctx.gas.gamma - 1.0) *
            (mean.E - dev[3] - 0.5 * (mx_peak * mx_peak + my_peak * my_peak) / rho_floor);
        safe = p_floor > eps_p;
      }
      if (!safe) {
        auto eval_at = [&](const double* c0v, const double* c1v, const double* c2v, int m,
                           int k) { return c0v[m] * sqrt2 + c1v[m] * phi1[k] + c2v[m] * phi2[k]; };
        double rho_min = mean.rho;
        for (int k = 0; k < n_pts; ++k)
          rho_min = std::min(rho_min, eval_at(c0, c1, c2, 0, k));
        if (rho_min < eps_rho) {
          double th = std::clamp((mean.rho - eps_rho) / (mean.rho - rho_min), 0.0, 1.0);
          c1[0] *= th;
          c2[0] *= th;
        }
        double th_p = 1.0;
        for (int k = 0; k < n_pts; ++k) {
          EulerState u{eval_at(c0, c1, c2, 0, k), eval_at(c0, c1, c2, 1, k),
                       eval_at(c0, c1, c2, 2, k), eval_at(c0, c1, c2, 3, k)};
          if (u.rho <= 0.0) {
            th_p = 0.0;
            break;
          }
          double pk = pressure(u, ctx.gas);
          if (pk < eps_p) th_p = std::min(th_p, (p_mean - eps_p) / (p_mean - pk));
        }
        if (th_p < 1.0) {
          th_p = std::max(th_p, 0.0);
          for (int m = 0; m < kEq; ++m) {
            c1[m] *= th_p;
            c2[m] *= th_p;
          }
        }
      }
    }

    for (int m = 0; m < kEq; ++m) {
      coeffs.at(m, 1, i) = c1[m];
      coeffs.at(m, 2, i) = c2[m];
    }
  }
  ctx.timers.limiter += now() - t0;
}

double stable_dt(const SolverContext& ctx, const CoefficientArray& coeffs) {
  const Mesh& mesh = *ctx.mesh;
  const BasisTables& tb = *ctx.tables;
  const int n = mesh.n_elements();
  const int np = tb.n_p;
  const GasModel gas = ctx.gas;
  AbortRecord abort;
  double t0 = now();

  double dt_min = std::numeric_limits<double>::max();
#pragma omp parallel for schedule(dynamic, ctx.options.chunk) \
    num_threads(ctx_threads(ctx)) reduction(min : dt_min)
  for (int i = 0; i < n; ++i) {
    double lambda = 0.0;
    for (int q = 1; q <= 3; ++q) {
      EulerState u;
      for (int m = 0; m < kEq; ++m) {
        double s = 0.0;
        for (int j = 0; j < np; ++j) s += coeffs.at(m, j, i) * tb.phi_side_mid(q, j);
        u[m] = s;
      }
      if (!admissible(u, gas)) {
        abort.record("stable_dt", i, q, u);
        continue;
      }
      const Edge& e = mesh.edges[mesh.elements[i].edge[q - 1]];
      double sign = e.left == i ? 1.0 : -1.0;
      lambda = std::max(lambda, max_wave_speed(u, {sign * e.nx, sign * e.ny}, gas));
    }
    dt_min = std::min(dt_min, 2.0 * mesh.elements[i].inradius / ((2.0 * tb.p + 1.0) * lambda));
  }
  ctx.timers.other += now() - t0;
  abort.throw_if_failed(gas);
  return ctx.options.cfl * dt_min;
}

namespace {

struct RkWorkspace {
  RhsBuffers bufs;
  CoefficientArray k1, k2, k3, k4, stage;

  void ensure(int eq, int modes, int elem, int order) {
    if (k1.n_elem == elem && k1.n_modes == modes) return;
    bufs = RhsBuffers(eq, modes, elem);
    k1 = CoefficientArray(eq, modes, elem);
    k2 = CoefficientArray(eq, modes, elem);
    stage = CoefficientArray(eq, modes, elem);
    if (order == 4) {
      k3 = CoefficientArray(eq, modes, elem);
      k4 = CoefficientArray(eq, modes, elem);
    }
  }
};

// stage = a + s*b, element-parallel.
void axpy(const SolverContext& ctx, const CoefficientArray& a, double s,
          const CoefficientArray& b, CoefficientArray& out) {
  double t0 = now();
  const std::int64_t n = static_cast<std::int64_t>(a.data.size());
#pragma omp parallel for schedule(static) num_threads(ctx_threads(ctx))
  for (std::int64_t i = 0; i < n; ++i) out.data[i] = a.data[i] + s * b.data[i];
  ctx.timers.other += now() - t0;
}

void rk4_combine(const SolverContext& ctx, const CoefficientArray& u, double dt,
                 const CoefficientArray& k1, const CoefficientArray& k2,
                 const CoefficientArray& k3, const CoefficientArray& k4,
                 CoefficientArray& out) {
  double t0 = now();
  const std::int64_t n = static_cast<std::int64_t>(u.data.size());
  const double c = dt / 6.0;
#pragma omp parallel for schedule(static) num_threads(ctx_threads(ctx))
  for (std::int64_t i = 0; i < n; ++i)
    out.data[i] = u.data[i] + c * (k1.data[i] + 2.0 * k2.data[i] + 2.0 * k3.data[i] +
                                   k4.data[i]);
  ctx.timers.other += now() - t0;
}

double rk_step_ws(const SolverContext& ctx, SolverState& state, double dt, RkWorkspace& ws,
                  const RhsOperator& op, bool limiting) {
  const int order = ctx.options.rk_order;
  ws.ensure(state.coeffs.n_eq, state.coeffs.n_modes, state.coeffs.n_elem, order);
  CoefficientArray& u = state.coeffs;
  const double t = state.t;

  if (order == 2) {
    // midpoint rule
    op(u, t, ws.k1);
    axpy(ctx, u, 0.5 * dt, ws.k1, ws.stage);
    if (limiting) limit(ctx, ws.stage);
    op(ws.stage, t + 0.5 * dt, ws.k2);
    axpy(ctx, u, dt, ws.k2, ws.stage);
  } else if (order == 4) {
    op(u, t, ws.k1);
    axpy(ctx, u, 0.5 * dt, ws.k1, ws.stage);
    if (limiting) limit(ctx, ws.stage);
    op(ws.stage, t + 0.5 * dt, ws.k2);
    axpy(ctx, u, 0.5 * dt, ws.k2, ws.stage);
    if (limiting) limit(ctx, ws.stage);
    op(ws.stage, t + 0.5 * dt, ws.k3);
    axpy(ctx, u, dt, ws.k3, ws.stage);
    if (limiting) limit(ctx, ws.stage);
    op(ws.stage, t + dt, ws.k4);
    rk4_combine(ctx, u, dt, ws.k1, ws.k2, ws.k3, ws.k4, ws.stage);
  } else {
    throw std::invalid_argument("rk_order must be 2 or 4");
  }
  if (limiting) limit(ctx, ws.stage);
  double residual = max_abs_diff(u, ws.stage);
  std::swap(u.data, ws.stage.data);
  state.t += dt;
  state.step_count += 1;
  return residual;
}

}  // namespace

double rk_step(const SolverContext& ctx, SolverState& state, double dt, const RhsOperator& op,
               bool limiting) {
  RkWorkspace ws;
  return rk_step_ws(ctx, state, dt, ws, op, limiting);
}

double rk_step(const SolverContext& ctx, SolverState& state, double dt) {
  RkWorkspace ws;
  RhsOperator op = [&ctx, &ws](const CoefficientArray& c, double t, CoefficientArray& d) {
    compute_rhs(ctx, c, t, ws.bufs, d);
  };
  return rk_step_ws(ctx, state, dt, ws, op, ctx.options.limiting);
}

SteadyResult run_to_steady(const SolverContext& ctx, SolverState& state, double tol,
                           std::int64_t max_steps,
                           const std::function<void(std::int64_t, double)>& on_step) {
  RkWorkspace ws;
  RhsOperator op = [&ctx, &ws](const CoefficientArray& c, double t, CoefficientArray& d) {
    compute_rhs(ctx, c, t, ws.bufs, d);
  };
  SteadyResult result;
  for (std::int64_t s = 0; s < max_steps; ++s) {
    double dt = stable_dt(ctx, state.coeffs);
    double residual = rk_step_ws(ctx, state, dt, ws, op, ctx.options.limiting);
    result.steps = s + 1;
    result.residual = residual;
    if (on_step) on_step(s + 1, residual);
    if (residual <= tol) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

double run_to_time(const SolverContext& ctx, SolverState& state, double t_end,
                   std::int64_t max_steps,
                   const std::function<void(std::int64_t, double)>& on_step) {
  RkWorkspace ws;
  RhsOperator op = [&ctx, &ws](const CoefficientArray& c, double t, CoefficientArray& d) {
    compute_rhs(ctx, c, t, ws.bufs, d);
  };
  double residual = 0.0;
  for (std::int64_t s = 0; state.t < t_end; ++s) {
    if (s >= max_steps)
      throw SolverAbort("t_end not reached within " + std::to_string(max_steps) + " steps");
    double dt = stable_dt(ctx, state.coeffs);
    if (state.t + dt > t_end) dt = t_end - state.t;
    residual = rk_step_ws(ctx, state, dt, ws, op, ctx.options.limiting);
    if (on_step) on_step(s + 1, residual);
  }
  return residual;
}

double run_fixed_steps(const SolverContext& ctx, SolverState& state, std::int64_t n_steps,
                       const std::function<void(std::int64_t, double)>& on_step) {
  RkWorkspace ws;
  RhsOperator op = [&ctx, &ws](const CoefficientArray& c, double t, CoefficientArray& d) {
    compute_rhs(ctx, c, t, ws.bufs, d);
  };
  double residual = 0.0;
  for (std::int64_t s = 0; s < n_steps; ++s) {
    double dt = stable_dt(ctx, state.coeffs);
    residual = rk_step_ws(ctx, state, dt, ws, op, ctx.options.limiting);
    if (on_step) on_step(s + 1, residual);
  }
  return residual;
}

void save_checkpoint(const SolverState& state, const std::string& path) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint format is little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint file '" + path + "'");
  const char magic[8] = {'D', 'G', '2', 'D', 'C', 'K', 'P', '1'};
  out.write(magic, 8);
  std::int32_t m = state.coeffs.n_eq, np = state.coeffs.n_modes;
  std::int64_t n = state.coeffs.n_elem, step = state.step_count;
  double t = state.t;
  out.write(reinterpret_cast<const char*>(&m), sizeof m);
  out.write(reinterpret_cast<const char*>(&np), sizeof np);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&t), sizeof t);
  out.write(reinterpret_cast<const char*>(&step), sizeof step);
  out.write(reinterpret_cast<const char*>(state.coeffs.data.data()),
            static_cast<std::streamsize>(state.coeffs.data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing checkpoint '" + path + "'");
}

SolverState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint file '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "DG2DCKP1", 8) != 0)
    throw std::runtime_error("'" + path + "' is not a dg2d checkpoint");
  std::int32_t m = 0, np = 0;
  std::int64_t n = 0, step = 0;
  double t = 0.0;
  in.read(reinterpret_cast<char*>(&m), sizeof m);
  in.read(reinterpret_cast<char*>(&np), sizeof np);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&t), sizeof t);
  in.read(reinterpret_cast<char*>(&step), sizeof step);
  if (!in || m <= 0 || np <= 0 || n <= 0)
    throw std::runtime_error("corrupt checkpoint header in '" + path + "'");
  SolverState state;
  state.coeffs = CoefficientArray(m, np, static_cast<int>(n));
  state.t = t;
  state.step_count = step;
  in.read(reinterpret_cast<char*>(state.coeffs.data.data()),
          static_cast<std::streamsize>(state.coeffs.data.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated checkpoint '" + path + "'");
  return state;
}

double total_mass(const Mesh& mesh, const CoefficientArray& coeffs) {
  // integral of the constant mode; summed serially in element order so the
  // result does not depend on the worker count
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double mass = 0.0;
  for (int i = 0; i < mesh.n_elements(); ++i)
    mass += mesh.elements[i].det_jac * coeffs.at(0, 0, i) * inv_sqrt2;
  return mass;
}

double max_abs_diff(const CoefficientArray& a, const CoefficientArray& b) {
  double m = 0.0;
  const std::int64_t n = static_cast<std::int64_t>(a.data.size());
#pragma omp parallel for schedule(static) reduction(max : m)
  for (std::int64_t i = 0; i < n; ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace dg2d
