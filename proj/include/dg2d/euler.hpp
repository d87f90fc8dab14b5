#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

#include "dg2d/geometry.hpp"

namespace dg2d {

constexpr int kEq = 4;  // rho, rho*u, rho*v, E

struct EulerState {
  double rho = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double E = 0.0;

  double& operator[](int m) { return (&rho)[m]; }
  double operator[](int m) const { return (&rho)[m]; }
};

struct GasModel {
  double gamma = 1.4;
};

inline double pressure(const EulerState& u, const GasModel& gas) {
  return (gas.gamma - 1.0) * (u.E - 0.5 * (u.mx * u.mx + u.my * u.my) / u.rho);
}

inline bool admissible(const EulerState& u, const GasModel& gas) {
  return u.rho > 0.0 && pressure(u, gas) > 0.0;
}

inline double sound_speed(const EulerState& u, const GasModel& gas) {
  return std::sqrt(gas.gamma * pressure(u, gas) / u.rho);
}

using Flux = std::array<double, kEq>;

inline void euler_flux(const EulerState& u, const GasModel& gas, Flux& f1, Flux& f2) {
  double inv_rho = 1.0 / u.rho;
  double vx = u.mx * inv_rho;
  double vy = u.my * inv_rho;
  double p = pressure(u, gas);
  f1 = {u.mx, u.mx * vx + p, u.my * vx, vx * (u.E + p)};
  f2 = {u.my, u.mx * vy, u.my * vy + p, vy * (u.E + p)};
}

inline double max_wave_speed(const EulerState& u, Vec2 n, const GasModel& gas) {
  double vn = (u.mx * n.x + u.my * n.y) / u.rho;
  return std::abs(vn) + sound_speed(u, gas);
}

// Local Lax-Friedrichs flux; the normal points from the left state to the
// right state.
inline Flux riemann_solver(const EulerState& ul, const EulerState& ur, Vec2 n,
                           const GasModel& gas) {
  Flux f1l, f2l, f1r, f2r;
  euler_flux(ul, gas, f1l, f2l);
  euler_flux(ur, gas, f1r, f2r);
  double s = std::max(max_wave_speed(ul, n, gas), max_wave_speed(ur, n, gas));
  Flux f;
  for (int m = 0; m < kEq; ++m) {
    f[m] = 0.5 * (n.x * (f1l[m] + f1r[m]) + n.y * (f2l[m] + f2r[m])) -
           0.5 * s * (ur[m] - ul[m]);
  }
  return f;
}

// Velocity reflected about the plane with unit normal n; rho and E (hence p)
// are unchanged.
inline EulerState reflect_state(const EulerState& u, Vec2 n) {
  double mn = 2.0 * (u.mx * n.x + u.my * n.y);
  return {u.rho, u.mx - mn * n.x, u.my - mn * n.y, u.E};
}

enum BoundaryCode : int {
  kReflecting = -1,
  kCurvedReflecting = -2,
  kInflow = -3,
  kOutflow = -4,
  kMovingShock = -5,
};

// Planar shock front through (x0, 0) at angle_deg from the x-axis, moving
// along its own normal at `speed`.  Points behind the front see `post`,
// points ahead of it see `pre`.
struct MovingShock {
  double x0 = 0.0;
  double angle_deg = 60.0;
  double speed = 10.0;
  EulerState post;
  EulerState pre;

  double front_x(double y, double t) const {
    double rad = angle_deg * M_PI / 180.0;
    return x0 + (y * std::cos(rad) + speed * t) / std::sin(rad);
  }
};

struct BoundaryConditions {
  EulerState inflow_state;
  // Position/time dependent Dirichlet data; falls back to inflow_state.
  std::function<EulerState(Vec2, double)> dirichlet;
  // Exact unit normal of the physical boundary; required by code -2.
  std::function<Vec2(Vec2)> wall_normal;
  std::optional<MovingShock> shock;
};

struct UnknownBoundaryCode : std::runtime_error {
  explicit UnknownBoundaryCode(int code)
      : std::runtime_error("unknown boundary code " + std::to_string(code)) {}
};

inline EulerState ghost_state(const EulerState& interior, int code, Vec2 point,
                              Vec2 edge_normal, double t, const BoundaryConditions& bc) {
  switch (code) {
    case kReflecting:
      return reflect_state(interior, edge_normal);
    case kCurvedReflecting: {
      if (!bc.wall_normal)
        throw std::runtime_error("curved reflecting boundary needs a wall-normal function");
      return reflect_state(interior, bc.wall_normal(point));
    }
    case kInflow:
      return bc.dirichlet ? bc.dirichlet(point, t) : bc.inflow_state;
    case kOutflow:
      return interior;
    case kMovingShock: {
      if (!bc.shock)
        throw std::runtime_error("moving-shock boundary needs shock parameters");
      return point.x < bc.shock->front_x(point.y, t) ? bc.shock->post : bc.shock->pre;
    }
    default:
      throw UnknownBoundaryCode(code);
  }
}

}  // namespace dg2d
