#include "dg2d/output.hpp"

#include <cmath>
#include <fstream>

namespace dg2d {

namespace {

EulerState corner_state(const CoefficientArray& coeffs, const BasisTables& tb, int elem,
                        Vec2 rs) {
  EulerState u;
  for (int m = 0; m < kEq; ++m) {
    double s = 0.0;
    for (int j = 0; j < tb.n_p; ++j) s += coeffs.at(m, j, elem) * eval_basis(tb.p, j, rs);
    u[m] = s;
  }
  return u;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out.precision(12);
  return out;
}

}  // namespace

void export_vtk(const CoefficientArray& coeffs, const Mesh& mesh, const BasisTables& tables,
                const GasModel& gas, const std::string& path) {
  std::ofstream out = open_or_throw(path);
  const int n = mesh.n_elements();
  const Vec2 corners[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

  out << "# vtk DataFile Version 3.0\n";
  out << "dg2d solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 3 * n << " double\n";
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) {
      Vec2 v = mesh.vertex_of(i, c);
      out << v.x << ' ' << v.y << " 0\n";
    }
  out << "CELLS " << n << ' ' << 4 * n << "\n";
  for (int i = 0; i < n; ++i)
    out << "3 " << 3 * i << ' ' << 3 * i + 1 << ' ' << 3 * i + 2 << "\n";
  out << "CELL_TYPES " << n << "\n";
  for (int i = 0; i < n; ++i) out << "5\n";

  out << "POINT_DATA " << 3 * n << "\n";
  const char* names[5] = {"rho", "rho_u", "rho_v", "E", "p"};
  for (int field = 0; field < 5; ++field) {
    out << "SCALARS " << names[field] << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) {
        EulerState u = corner_state(coeffs, tables, i, corners[c]);
        out << (field < kEq ? u[field] : pressure(u, gas)) << "\n";
      }
    }
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void export_csv(const CoefficientArray& coeffs, const Mesh& mesh, const BasisTables& tables,
                const GasModel& gas, const std::string& path) {
  std::ofstream out = open_or_throw(path);
  (void)tables;
  const double sqrt2 = std::sqrt(2.0);
  out << "x,y,rho,rho_u,rho_v,E,p\n";
  for (int i = 0; i < mesh.n_elements(); ++i) {
    Vec2 c = (1.0 / 3.0) * (mesh.vertex_of(i, 0) + mesh.vertex_of(i, 1) + mesh.vertex_of(i, 2));
    EulerState mean;  // cell mean of U is the constant-mode coefficient times phi_0
    for (int m = 0; m < kEq; ++m) mean[m] = coeffs.at(m, 0, i) * sqrt2;
    out << c.x << ',' << c.y << ',' << mean.rho << ',' << mean.mx << ',' << mean.my << ','
        << mean.E << ',' << pressure(mean, gas) << "\n";
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace dg2d
