#include "dg2d/basis.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dg2d {

namespace {

void check_degree(int p) {
  if (p < 1 || p > kMaxDegree)
    throw std::invalid_argument("polynomial degree must be in [1," +
                                std::to_string(kMaxDegree) + "], got " + std::to_string(p));
}

// Jacobi polynomial P_n^(alpha,beta) by the three-term recurrence.
double jacobi(int n, double alpha, double beta, double x) {
  if (n == 0) return 1.0;
  double pm1 = 1.0;
  double pc = 0.5 * ((alpha + beta + 2.0) * x + (alpha - beta));
  for (int k = 2; k <= n; ++k) {
    double ab = 2.0 * k + alpha + beta;
    double c1 = 2.0 * k * (k + alpha + beta) * (ab - 2.0);
    double c2 = (ab - 1.0) * (alpha * alpha - beta * beta);
    double c3 = (ab - 1.0) * ab * (ab - 2.0);
    double c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * ab;
    double pn = ((c2 + c3 * x) * pc - c4 * pm1) / c1;
    pm1 = pc;
    pc = pn;
  }
  return pc;
}

double jacobi_deriv(int n, double alpha, double beta, double x) {
  if (n == 0) return 0.0;
  return 0.5 * (n + alpha + beta + 1.0) * jacobi(n - 1, alpha + 1.0, beta + 1.0, x);
}

// Scaled Legendre Q_k(a,b) = P_k(a/b) * b^k, a bivariate polynomial, and its
// partial derivatives.  Evaluating this way keeps the basis well defined on
// the whole closed triangle including the collapsed vertex at (0,1).
struct ScaledLegendre {
  double q, qa, qb;
};

ScaledLegendre scaled_legendre(int k, double a, double b) {
  if (k == 0) return {1.0, 0.0, 0.0};
  double qm1 = 1.0, qm1a = 0.0, qm1b = 0.0;
  double qc = a, qca = 1.0, qcb = 0.0;
  for (int n = 1; n < k; ++n) {
    double inv = 1.0 / (n + 1.0);
    double qn = ((2.0 * n + 1.0) * a * qc - n * b * b * qm1) * inv;
    double qna = ((2.0 * n + 1.0) * (qc + a * qca) - n * b * b * qm1a) * inv;
    double qnb = ((2.0 * n + 1.0) * a * qcb - n * (2.0 * b * qm1 + b * b * qm1b)) * inv;
    qm1 = qc; qm1a = qca; qm1b = qcb;
    qc = qn; qca = qna; qcb = qnb;
  }
  return {qc, qca, qcb};
}

// Mode ordering: by total degree d = 0..p, within a degree by ascending k,
// where (k,l) indexes the Koornwinder pair and l = d - k.  Modes 1 and 2 are
// the linear modes.
std::pair<int, int> mode_kl(int p, int j) {
  if (j < 0 || j >= basis_count(p)) throw std::out_of_range("basis index out of range");
  int idx = 0;
  for (int d = 0; d <= p; ++d)
    for (int k = 0; k <= d; ++k, ++idx)
      if (idx == j) return {k, d - k};
  throw std::logic_error("unreachable");
}

double mode_norm(int k, int l) {
  return std::sqrt(2.0 * (2.0 * k + 1.0) * (k + l + 1.0));
}

struct BaryGroup {
  double w;    // weight per point, fraction of the total (weights sum to 1)
  double a, b; // generator; orbit is all distinct permutations of (1-a-b, a, b)
};

// Symmetric rules on the triangle (Dunavant), listed per target degree.
const std::array<std::vector<BaryGroup>, 5> kInteriorRules = {{
    // degree 2, 3 points
    {{1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}},
    // degree 4, 6 points
    {{0.223381589678011, 0.445948490915965, 0.445948490915965},
     {0.109951743655322, 0.091576213509771, 0.091576213509771}},
    // degree 6, 12 points
    {{0.116786275726379, 0.249286745170910, 0.249286745170910},
     {0.050844906370207, 0.063089014491502, 0.063089014491502},
     {0.082851075618374, 0.310352451033785, 0.636502499121399}},
    // degree 8, 16 points
    {{0.144315607677787, 1.0 / 3.0, 1.0 / 3.0},
     {0.095091634267285, 0.459292588292723, 0.459292588292723},
     {0.103217370534718, 0.170569307751760, 0.170569307751760},
     {0.032458497623198, 0.050547228317031, 0.050547228317031},
     {0.027230314174435, 0.263112829634638, 0.728492392955404}},
    // degree 10, 25 points
    {{0.090817990382754, 1.0 / 3.0, 1.0 / 3.0},
     {0.036725957756467, 0.485577633383657, 0.485577633383657},
     {0.045321059435528, 0.109481575485037, 0.109481575485037},
     {0.072757916845420, 0.307939838764121, 0.550352941820999},
     {0.028327242531057, 0.246672560639903, 0.728323904597411},
     {0.009421666963733, 0.066803251012200, 0.923655933587500}},
}};

void append_orbit(const BaryGroup& g, TriangleRule& rule) {
  double c = 1.0 - g.a - g.b;
  std::array<std::array<double, 3>, 6> perms = {{{c, g.a, g.b},
                                                 {g.a, g.b, c},
                                                 {g.b, c, g.a},
                                                 {c, g.b, g.a},
                                                 {g.b, g.a, c},
                                                 {g.a, c, g.b}}};
  auto seen = [&](const std::array<double, 3>& q, int upto) {
    for (int i = 0; i < upto; ++i) {
      if (std::abs(perms[i][0] - q[0]) < 1e-14 && std::abs(perms[i][1] - q[1]) < 1e-14)
        return true;
    }
    return false;
  };
  for (int i = 0; i < 6; ++i) {
    if (seen(perms[i], i)) continue;
    // barycentric (l1,l2,l3) -> (r,s) = (l2,l3); half factor converts the
    // unit-sum weights to the canonical triangle of area 1/2
    rule.points.push_back({perms[i][1], perms[i][2]});
    rule.weights.push_back(0.5 * g.w);
  }
}

}  // namespace

double eval_basis(int p, int j, Vec2 rs) {
  auto [k, l] = mode_kl(p, j);
  double a = 2.0 * rs.x + rs.y - 1.0;
  double b = 1.0 - rs.y;
  ScaledLegendre q = scaled_legendre(k, a, b);
  return mode_norm(k, l) * q.q * jacobi(l, 2.0 * k + 1.0, 0.0, 2.0 * rs.y - 1.0);
}

Vec2 eval_basis_grad(int p, int j, Vec2 rs) {
  auto [k, l] = mode_kl(p, j);
  double a = 2.0 * rs.x + rs.y - 1.0;
  double b = 1.0 - rs.y;
  double zeta = 2.0 * rs.y - 1.0;
  ScaledLegendre q = scaled_legendre(k, a, b);
  double pl = jacobi(l, 2.0 * k + 1.0, 0.0, zeta);
  double dpl = jacobi_deriv(l, 2.0 * k + 1.0, 0.0, zeta);
  double nrm = mode_norm(k, l);
  // a_r = 2, a_s = 1, b_r = 0, b_s = -1
  double dr = nrm * 2.0 * q.qa * pl;
  double ds = nrm * ((q.qa - q.qb) * pl + q.q * 2.0 * dpl);
  return {dr, ds};
}

TriangleRule interior_quadrature(int p) {
  check_degree(p);
  TriangleRule rule;
  rule.degree = 2 * p;
  for (const BaryGroup& g : kInteriorRules[p - 1]) append_orbit(g, rule);
  return rule;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev guess; converges in a few steps.
    double x = -std::cos(M_PI * (4.0 * i + 3.0) / (4.0 * n + 2.0));
    double dp = 0.0;
    for (int it = 0; it < 60; ++it) {
      double pm1 = 1.0, pc = x;
      for (int k = 2; k <= n; ++k) {
        double pn = ((2.0 * k - 1.0) * x * pc - (k - 1.0) * pm1) / k;
        pm1 = pc;
        pc = pn;
      }
      dp = n * (x * pc - pm1) / (x * x - 1.0);
      double dx = pc / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Vec2 side_point(int q, double xi) {
  static const Vec2 ends[3][2] = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}};
  if (q < 1 || q > 3) throw std::out_of_range("side label must be 1..3");
  Vec2 a = ends[q - 1][0], b = ends[q - 1][1];
  return 0.5 * (1.0 - xi) * a + 0.5 * (1.0 + xi) * b;
}

BasisTables build_tables(int p) {
  check_degree(p);
  BasisTables t;
  t.p = p;
  t.n_p = basis_count(p);
  t.n_edge_pts = p + 1;

  TriangleRule interior = interior_quadrature(p);
  t.n_quad = static_cast<int>(interior.points.size());
  t.r_interior = interior.points;
  t.w_interior = interior.weights;
  t.phi_interior.resize(static_cast<std::size_t>(t.n_quad) * t.n_p);
  t.dphi_dr_interior.resize(t.phi_interior.size());
  t.dphi_ds_interior.resize(t.phi_interior.size());
  for (int k = 0; k < t.n_quad; ++k) {
    for (int j = 0; j < t.n_p; ++j) {
      t.phi_interior[k * t.n_p + j] = eval_basis(p, j, t.r_interior[k]);
      Vec2 g = eval_basis_grad(p, j, t.r_interior[k]);
      t.dphi_dr_interior[k * t.n_p + j] = g.x;
      t.dphi_ds_interior[k * t.n_p + j] = g.y;
    }
  }

  GaussRule edge = gauss_legendre(t.n_edge_pts);
  t.xi_edge = edge.nodes;
  t.w_edge = edge.weights;
  t.r_edge.resize(3 * t.n_edge_pts);
  t.phi_edge.resize(static_cast<std::size_t>(3) * t.n_edge_pts * t.n_p);
  for (int q = 1; q <= 3; ++q) {
    for (int k = 0; k < t.n_edge_pts; ++k) {
      Vec2 pt = side_point(q, t.xi_edge[k]);
      t.r_edge[(q - 1) * t.n_edge_pts + k] = pt;
      for (int j = 0; j < t.n_p; ++j)
        t.phi_edge[((q - 1) * t.n_edge_pts + k) * t.n_p + j] = eval_basis(p, j, pt);
    }
  }
  t.phi_edge_mid.resize(3 * t.n_p);
  for (int q = 1; q <= 3; ++q)
    for (int j = 0; j < t.n_p; ++j)
      t.phi_edge_mid[(q - 1) * t.n_p + j] = eval_basis(p, j, side_point(q, 0.0));
  return t;
}

std::size_t BasisTables::total_stored_doubles() const {
  return phi_interior.size() + dphi_dr_interior.size() + dphi_ds_interior.size() +
         phi_edge.size() + w_interior.size() + w_edge.size() + 2 * r_interior.size() +
         2 * r_edge.size();
}

void dump_tables_csv(const BasisTables& t, std::ostream& os) {
  os.precision(17);
  os << "# p=" << t.p << " n_p=" << t.n_p << " n_quad=" << t.n_quad
     << " n_edge_pts=" << t.n_edge_pts << "\n";
  os << "kind,side,point,r,s,weight";
  for (int j = 0; j < t.n_p; ++j) os << ",phi" << j;
  os << "\n";
  for (int k = 0; k < t.n_quad; ++k) {
    os << "interior,0," << k << "," << t.r_interior[k].x << "," << t.r_interior[k].y << ","
       << t.w_interior[k];
    for (int j = 0; j < t.n_p; ++j) os << "," << t.phi_int(k, j);
    os << "\n";
  }
  for (int k = 0; k < t.n_quad; ++k) {
    os << "grad_r,0," << k << "," << t.r_interior[k].x << "," << t.r_interior[k].y << ","
       << t.w_interior[k];
    for (int j = 0; j < t.n_p; ++j) os << "," << t.dphi_dr(k, j);
    os << "\n";
  }
  for (int k = 0; k < t.n_quad; ++k) {
    os << "grad_s,0," << k << "," << t.r_interior[k].x << "," << t.r_interior[k].y << ","
       << t.w_interior[k];
    for (int j = 0; j < t.n_p; ++j) os << "," << t.dphi_ds(k, j);
    os << "\n";
  }
  for (int q = 1; q <= 3; ++q) {
    for (int k = 0; k < t.n_edge_pts; ++k) {
      Vec2 pt = t.side_quad_point(q, k);
      os << "edge," << q << "," << k << "," << pt.x << "," << pt.y << "," << t.w_edge[k];
      for (int j = 0; j < t.n_p; ++j) os << "," << t.phi_side(q, k, j);
      os << "\n";
    }
  }
}

}  // namespace dg2d
