#pragma once

#include <string>

#include "dg2d/solver.hpp"

namespace dg2d {

// Legacy ASCII VTK unstructured grid.  Each triangle emits its own three
// corners, so inter-element jumps stay visible; fields are rho, rho_u,
// rho_v, E and p evaluated element-locally at the corners.
void export_vtk(const CoefficientArray& coeffs, const Mesh& mesh, const BasisTables& tables,
                const GasModel& gas, const std::string& path);

// One row per element: centroid coordinates and cell-mean conserved
// variables plus the pressure of the mean state.
void export_csv(const CoefficientArray& coeffs, const Mesh& mesh, const BasisTables& tables,
                const GasModel& gas, const std::string& path);

}  // namespace dg2d
