#pragma once

#include <string>

#include "dg2d/euler.hpp"
#include "dg2d/geometry.hpp"

namespace dg2d {

// Steady supersonic flow through a quarter-annulus bend.  The flow is
// tangential with speed ~ 1/r, density follows the isentropic relation, and
// the whole field is determined by the inner-radius values below.
struct VortexGeometry {
  double r_inner = 1.0;
  double r_outer = 1.384;
  double mach_inner = 2.25;
  double rho_inner = 1.0;
  double sound_speed_inner = 1.0;
};

// Throws std::domain_error if the point is far outside the annulus; a small
// margin is allowed because the chords of the polygonal walls dip inside and
// outside the exact circles.
EulerState vortex_exact(Vec2 point, const VortexGeometry& geo, const GasModel& gas);

BoundaryConditions vortex_boundary(const VortexGeometry& geo, const GasModel& gas);

// Planar Mach-10 shock at 60 degrees over a reflecting wall starting at
// x0 = 1/6, in the unit-height channel [0,4] x [0,1].
struct DoubleMachSetup {
  double x0 = 1.0 / 6.0;
  double shock_mach = 10.0;
  double angle_deg = 60.0;
  EulerState pre;   // quiescent gas: rho = 1.4, p = 1
  EulerState post;  // Rankine-Hugoniot state behind the shock

  DoubleMachSetup();
};

// Post-shock state for a shock of the given Mach number running into `pre`
// at rest, moving along the unit direction `n`.
EulerState rankine_hugoniot_post(const EulerState& pre, double mach, Vec2 n,
                                 const GasModel& gas);

BoundaryConditions double_mach_boundary(const DoubleMachSetup& setup, const GasModel& gas);
EulerState double_mach_initial(Vec2 point, const DoubleMachSetup& setup);

// Structured mesh generators emitting GMSH ASCII v2.2 text.  Boundary
// physical tags map to codes -1..-5 (tag 1 = reflecting wall, 2 = curved
// reflecting, 3 = inflow, 4 = outflow, 5 = moving shock).

// Quarter annulus, 5*2^level radial by 18*2^level angular cells, each split
// into two triangles: 180*4^level elements.  Level 0..5 corresponds to the
// mesh family A..F.
std::string gen_vortex_msh(int level, const VortexGeometry& geo = {});

// Channel [0,4] x [0,1] for the double Mach problem, nx-by-ny cells split
// into 2*nx*ny triangles.
std::string gen_double_mach_msh(int nx, int ny, double x0 = 1.0 / 6.0);

// Axis-aligned box with a single boundary tag on all four walls.
std::string gen_box_msh(int nx, int ny, double width, double height, int tag);

// Same box, sheared so that vertex (x,y) moves to (x + shear*y, y).
std::string gen_sheared_box_msh(int nx, int ny, double width, double height, double shear,
                                int tag);

int vortex_level_from_letter(char letter);  // 'A' -> 0 ... 'F' -> 5

}  // namespace dg2d
