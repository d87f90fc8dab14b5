#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "dg2d/geometry.hpp"

namespace dg2d {

// Everything here lives on the canonical triangle with vertices
// (0,0), (1,0), (0,1).  Sides are labeled 1..3 in CCW traversal order:
//   side 1: (0,0) -> (1,0)
//   side 2: (1,0) -> (0,1)
//   side 3: (0,1) -> (0,0)
// The same labels are used by the mesh side mappings, so the two
// conventions must never drift apart.

constexpr int kMaxDegree = 5;

inline constexpr int basis_count(int p) { return (p + 1) * (p + 2) / 2; }

// j-th orthonormal modal basis function, 0-based.  Mode 0 is the constant
// sqrt(2); modes 1 and 2 are the two linear modes.
double eval_basis(int p, int j, Vec2 rs);
Vec2 eval_basis_grad(int p, int j, Vec2 rs);

struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to 1/2, the canonical area
  int degree = 0;               // exact for total degree <= this
};

// Symmetric rule exact to total degree 2p.
TriangleRule interior_quadrature(int p);

struct GaussRule {
  std::vector<double> nodes;  // ascending in [-1,1]
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

// Maps a 1D node xi in [-1,1] onto canonical side q (1..3), traversing the
// side in the CCW direction of the triangle.
Vec2 side_point(int q, double xi);

struct BasisTables {
  int p = 0;
  int n_p = 0;            // basis functions
  int n_quad = 0;         // interior quadrature points
  int n_edge_pts = 0;     // Gauss points per side, p+1

  // Flat, quadrature-point major: value of basis j at point k is [k*n_p + j].
  std::vector<double> phi_interior;
  std::vector<double> dphi_dr_interior;
  std::vector<double> dphi_ds_interior;
  std::vector<double> w_interior;
  std::vector<Vec2> r_interior;

  // phi_edge[(q*n_edge_pts + k)*n_p + j], q in 0..2, points in CCW order.
  std::vector<double> phi_edge;
  std::vector<double> w_edge;   // Gauss weights on [-1,1]
  std::vector<double> xi_edge;  // Gauss nodes, ascending
  std::vector<Vec2> r_edge;     // side points, [q*n_edge_pts + k]

  // Auxiliary: basis values at the three side midpoints, for wave-speed
  // estimates.  Not part of the quadrature tables proper.
  std::vector<double> phi_edge_mid;

  double phi_int(int k, int j) const { return phi_interior[k * n_p + j]; }
  double dphi_dr(int k, int j) const { return dphi_dr_interior[k * n_p + j]; }
  double dphi_ds(int k, int j) const { return dphi_ds_interior[k * n_p + j]; }
  // q is a 1-based side label.
  double phi_side(int q, int k, int j) const {
    return phi_edge[((q - 1) * n_edge_pts + k) * n_p + j];
  }
  double phi_side_mid(int q, int j) const { return phi_edge_mid[(q - 1) * n_p + j]; }
  Vec2 side_quad_point(int q, int k) const { return r_edge[(q - 1) * n_edge_pts + k]; }

  std::size_t total_stored_doubles() const;
};

BasisTables build_tables(int p);

void dump_tables_csv(const BasisTables& t, std::ostream& os);

}  // namespace dg2d
