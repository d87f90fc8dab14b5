#!/usr/bin/env python3
"""Recompute the frozen post-shock state used by the double Mach setup.

A Mach-10 shock runs into quiescent gas (rho = 1.4, p = 1, gamma = 1.4)
along a front inclined 60 degrees from the x-axis.  The jump relations give
the state behind the shock; the solver hardwires these numbers as the
double-Mach defaults, and this script is the independent route to them.

Usage: tools/rankine_hugoniot.py [mach] [angle_deg]
"""
import math
import sys

gamma = 1.4
rho1, p1 = 1.4, 1.0
mach = float(sys.argv[1]) if len(sys.argv) > 1 else 10.0
angle = math.radians(float(sys.argv[2]) if len(sys.argv) > 2 else 60.0)

c1 = math.sqrt(gamma * p1 / rho1)
m2 = mach * mach
rho2 = rho1 * (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0)
p2 = p1 * (2.0 * gamma * m2 - (gamma - 1.0)) / (gamma + 1.0)
un = 2.0 * (m2 - 1.0) / ((gamma + 1.0) * mach) * c1  # gas speed, lab frame
nx, ny = math.sin(angle), -math.cos(angle)           # shock-normal direction
E2 = p2 / (gamma - 1.0) + 0.5 * rho2 * un * un

print(f"pre : rho={rho1}  v=(0,0)  p={p1}  E={p1/(gamma-1.0)}")
print(f"post: rho={rho2}  |v|={un}  v=({un*nx:.15g},{un*ny:.15g})  p={p2}  E={E2}")

# verify the jump conditions in the frame moving with the shock
w = mach * c1
u1s, u2s = -w, un - w
assert abs(rho1 * u1s - rho2 * u2s) < 1e-12
assert abs((rho1 * u1s**2 + p1) - (rho2 * u2s**2 + p2)) < 1e-9
h1 = gamma / (gamma - 1.0) * p1 / rho1 + 0.5 * u1s**2
h2 = gamma / (gamma - 1.0) * p2 / rho2 + 0.5 * u2s**2
assert abs(h1 - h2) < 1e-9
print("jump conditions verified")
