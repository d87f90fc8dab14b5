#pragma once

#include "dg2d/solver.hpp"

namespace dg2d::ref {

// Single-threaded reference evaluation of the semi-discrete right-hand side.
// It loops element by element, evaluates basis functions directly instead of
// using the precomputed tables, recomputes edge geometry from the vertices,
// and locates the neighbor trace by inverting the neighbor's affine map at
// the physical quadrature point.  It shares only the flux formulas and the
// quadrature rules with the parallel pass pipeline, so the two paths check
// each other's bookkeeping: side mappings, traversal order, accumulation
// buffers and signs.
CoefficientArray rhs(const Mesh& mesh, const BasisTables& tables, const GasModel& gas,
                     const BoundaryConditions& bc, const CoefficientArray& coeffs, double t);

}  // namespace dg2d::ref
