#include "dg2d/reference.hpp"

#include <cmath>

namespace dg2d::ref {

namespace {

EulerState eval_solution(const CoefficientArray& coeffs, const BasisTables& tb, int elem,
                         Vec2 rs) {
  EulerState u;
  for (int m = 0; m < kEq; ++m) {
    double s = 0.0;
    for (int j = 0; j < tb.n_p; ++j) s += coeffs.at(m, j, elem) * eval_basis(tb.p, j, rs);
    u[m] = s;
  }
  return u;
}

Vec2 to_canonical(const Mesh& mesh, int elem, Vec2 x) {
  Vec2 a = mesh.vertex_of(elem, 0);
  Vec2 b = mesh.vertex_of(elem, 1);
  Vec2 c = mesh.vertex_of(elem, 2);
  double j00 = b.x - a.x, j01 = c.x - a.x;
  double j10 = b.y - a.y, j11 = c.y - a.y;
  double det = j00 * j11 - j01 * j10;
  Vec2 d = x - a;
  return {(j11 * d.x - j01 * d.y) / det, (-j10 * d.x + j00 * d.y) / det};
}

}  // namespace

CoefficientArray rhs(const Mesh& mesh, const BasisTables& tb, const GasModel& gas,
                     const BoundaryConditions& bc, const CoefficientArray& coeffs, double t) {
  CoefficientArray deriv(kEq, tb.n_p, mesh.n_elements());
  TriangleRule interior = interior_quadrature(tb.p);
  GaussRule edge_rule = gauss_legendre(tb.p + 1);

  for (int i = 0; i < mesh.n_elements(); ++i) {
    const Element& el = mesh.elements[i];
    JacobianData jd = element_jacobian(mesh.vertex_of(i, 0), mesh.vertex_of(i, 1),
                                       mesh.vertex_of(i, 2));

    std::vector<double> acc(static_cast<std::size_t>(kEq) * tb.n_p, 0.0);

    for (std::size_t k = 0; k < interior.points.size(); ++k) {
      Vec2 rs = interior.points[k];
      EulerState u = eval_solution(coeffs, tb, i, rs);
      if (!admissible(u, gas))
        throw SolverAbort("reference rhs: inadmissible interior state in element " +
                          std::to_string(i));
      Flux f1, f2;
      euler_flux(u, gas, f1, f2);
      for (int j = 0; j < tb.n_p; ++j) {
        Vec2 g = eval_basis_grad(tb.p, j, rs);
        double tx = jd.tau[0] * g.x + jd.tau[2] * g.y;
        double ty = jd.tau[1] * g.x + jd.tau[3] * g.y;
        for (int m = 0; m < kEq; ++m)
          acc[m * tb.n_p + j] += interior.weights[k] * (f1[m] * tx + f2[m] * ty);
      }
    }

    for (int q = 1; q <= 3; ++q) {
      int from = q - 1, to = q % 3;
      Vec2 a = mesh.vertex_of(i, from);
      Vec2 b = mesh.vertex_of(i, to);
      Vec2 n_out = outward_normal(a, b);
      double half_len = 0.5 * norm(b - a);

      const Edge& e = mesh.edges[el.edge[q - 1]];
      int other = e.left == i ? e.right : e.left;

      for (std::size_t k = 0; k < edge_rule.nodes.size(); ++k) {
        double xi = edge_rule.nodes[k];
        Vec2 x = 0.5 * (1.0 - xi) * a + 0.5 * (1.0 + xi) * b;
        Vec2 rs = side_point(q, xi);
        EulerState ul = eval_solution(coeffs, tb, i, rs);
        EulerState ur = other >= 0
                            ? eval_solution(coeffs, tb, other, to_canonical(mesh, other, x))
                            : ghost_state(ul, other, x, n_out, t, bc);
        if (!admissible(ul, gas) || !admissible(ur, gas))
          throw SolverAbort("reference rhs: inadmissible trace state on element " +
                            std::to_string(i));
        Flux fn = riemann_solver(ul, ur, n_out, gas);
        for (int j = 0; j < tb.n_p; ++j) {
          double phi = eval_basis(tb.p, j, rs);
          for (int m = 0; m < kEq; ++m)
            acc[m * tb.n_p + j] -= edge_rule.weights[k] * half_len * fn[m] * phi;
        }
      }
    }

    for (int m = 0; m < kEq; ++m)
      for (int j = 0; j < tb.n_p; ++j) deriv.at(m, j, i) = acc[m * tb.n_p + j] / jd.det;
  }
  return deriv;
}

}  // namespace dg2d::ref
